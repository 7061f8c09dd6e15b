#pragma once

// RKN time stepping for q'' = f(t, q), optionally with a constant mass
// matrix M (q'' = -M^{-1} grad V, p = M q').

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "csrkn/errors.hpp"
#include "csrkn/tableau.hpp"

namespace csrkn {

template <typename Scalar = double>
struct StepState {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Scalar t = Scalar(0);
  Vector q;
  Vector p;
};

template <typename Scalar = double>
struct SecondOrderIVP {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  int dim = 1;
  /// Acceleration f(t, q); with a mass matrix this is -M^{-1} grad V.
  std::function<Vector(Scalar, const Vector&)> force;
  /// Optional d f / d q. Finite differences are used when absent.
  std::function<Matrix(Scalar, const Vector&)> force_jacobian;
  /// Optional potential V(q), enables the Hamiltonian diagnostics.
  std::function<Scalar(const Vector&)> potential;
  std::optional<Matrix> mass;
  bool autonomous = true;
  StepState<Scalar> initial;

  bool has_hamiltonian() const { return static_cast<bool>(potential); }

  /// H = p^T M^{-1} p / 2 + V(q).
  Scalar hamiltonian(const StepState<Scalar>& s) const {
    if (!potential) throw ValidationError("problem has no potential");
    const Vector v = mass ? Vector(mass->ldlt().solve(s.p)) : s.p;
    return Scalar(0.5) * s.p.dot(v) + potential(s.q);
  }

  /// Checks dimensions, the mass matrix (symmetric, invertible) and, when a
  /// potential is given, that f agrees with -grad V (or -M^{-1} grad V) at
  /// the initial position within 1e-6.
  void validate() const {
    using std::abs;
    using std::max;
    if (!force) throw ValidationError("problem has no force");
    if (initial.q.size() != dim || initial.p.size() != dim) {
      throw ValidationError("initial state does not have dimension " + std::to_string(dim));
    }
    if (mass) {
      const Matrix& m = *mass;
      if (m.rows() != dim || m.cols() != dim) throw ValidationError("mass matrix has wrong size");
      if ((m - m.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-12)) {
        throw ValidationError("mass matrix is not symmetric");
      }
      Eigen::FullPivLU<Matrix> lu(m);
      if (!lu.isInvertible() || !std::isfinite(static_cast<double>(lu.rcond())) ||
          lu.rcond() <= Scalar(0)) {
        throw ValidationError("mass matrix is not invertible");
      }
    }
    if (potential) {
      const Vector& q0 = initial.q;
      Vector grad(dim);
      for (int k = 0; k < dim; ++k) {
        const Scalar h = Scalar(1e-5) * max(Scalar(1), abs(q0(k)));
        Vector qp = q0, qm = q0;
        qp(k) += h;
        qm(k) -= h;
        grad(k) = (potential(qp) - potential(qm)) / (Scalar(2) * h);
      }
      const Vector expected = mass ? Vector(-mass->ldlt().solve(grad)) : Vector(-grad);
      const Vector actual = force(initial.t, q0);
      if ((expected - actual).cwiseAbs().maxCoeff() > Scalar(1e-6)) {
        throw ValidationError("force disagrees with the potential gradient");
      }
    }
  }
};

enum class StageSolver { Newton, FixedPoint };

struct StepperOptions {
  StageSolver solver = StageSolver::Newton;
  /// Stage residual tolerance, scaled by max(1, |q_n|_inf).
  double tolerance = 1e-12;
  int max_iterations = 50;
  /// Entries of a_bar at or below this are treated as structural zeros.
  double structure_tolerance = 1e-13;
  /// Relative probe of the finite-difference force Jacobian.
  double jacobian_probe = 1e-7;
};

template <typename Scalar = double>
struct Trajectory {
  std::vector<StepState<Scalar>> states;
  /// H at each state, empty when the problem has no potential.
  std::vector<Scalar> energy;
  /// Stage-solver iterations of each step (states.size() - 1 entries).
  std::vector<int> newton_iterations;
};

/// One-step map of an RKN tableau on a fixed problem. Stage equations are
/// solved by forward substitution (explicit), a d-dimensional Newton per
/// stage (diagonally implicit) or a coupled rd-dimensional Newton (fully
/// implicit).
template <typename Scalar = double>
class RknStepper {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using State = StepState<Scalar>;

  RknStepper(RknTableau<Scalar> tableau, SecondOrderIVP<Scalar> ivp,
             StepperOptions options = {})
      : tableau_(std::move(tableau)), ivp_(std::move(ivp)), options_(options) {
    tableau_.validate();
    ivp_.validate();
    structure_ = classify_structure(tableau_, options_.structure_tolerance);
    if (ivp_.mass) mass_ldlt_.compute(*ivp_.mass);
  }

  StructureClass structure() const { return structure_; }
  const RknTableau<Scalar>& tableau() const { return tableau_; }
  const SecondOrderIVP<Scalar>& ivp() const { return ivp_; }
  int last_iterations() const { return last_iterations_; }
  /// Stage-equation residual (inf-norm) at exit of the last step.
  Scalar last_residual() const { return last_residual_; }

  Scalar hamiltonian(const State& s) const {
    const Vector v = ivp_.mass ? Vector(mass_ldlt_.solve(s.p)) : s.p;
    return Scalar(0.5) * s.p.dot(v) + ivp_.potential(s.q);
  }

  State step(Scalar h, const State& s) {
    using std::abs;
    using std::isfinite;
    if (!(h >= Scalar(0)) || !isfinite(static_cast<double>(h))) {
      throw ValidationError("step size must be finite and non-negative");
    }
    last_iterations_ = 0;
    last_residual_ = Scalar(0);
    if (h == Scalar(0)) return s;

    const int r = tableau_.stages();
    const int d = ivp_.dim;
    const Vector velocity = ivp_.mass ? Vector(mass_ldlt_.solve(s.p)) : s.p;
    scale_ = std::max(Scalar(1), s.q.cwiseAbs().maxCoeff());

    Matrix base(d, r);
    for (int i = 0; i < r; ++i) base.col(i) = s.q + h * tableau_.c(i) * velocity;
    Matrix stages = base;
    Matrix forces(d, r);

    switch (structure_) {
      case StructureClass::Explicit:
        for (int i = 0; i < r; ++i) {
          for (int j = 0; j < i; ++j)
            stages.col(i) += h * h * tableau_.a_bar(i, j) * forces.col(j);
          forces.col(i) = f(stage_time(s, h, i), stages.col(i));
        }
        break;
      case StructureClass::DiagonallyImplicit:
        for (int i = 0; i < r; ++i) {
          Vector known = base.col(i);
          for (int j = 0; j < i; ++j) known += h * h * tableau_.a_bar(i, j) * forces.col(j);
          const Scalar diag = tableau_.a_bar(i, i);
          if (abs(static_cast<double>(diag)) <= options_.structure_tolerance) {
            stages.col(i) = known;
            forces.col(i) = f(stage_time(s, h, i), known);
          } else {
            solve_single_stage(s, h, i, known, stages, forces);
          }
        }
        break;
      case StructureClass::FullyImplicit:
        solve_coupled(s, h, base, stages, forces);
        break;
    }

    State out;
    out.t = s.t + h;
    out.q = s.q + h * velocity + h * h * (forces * tableau_.b_bar);
    const Vector kick = h * (forces * tableau_.b);
    out.p = ivp_.mass ? Vector(s.p + *ivp_.mass * kick) : Vector(s.p + kick);
    return out;
  }

 private:
  Scalar stage_time(const State& s, Scalar h, int i) const { return s.t + tableau_.c(i) * h; }

  Vector f(Scalar t, const Vector& q) const { return ivp_.force(t, q); }

  Matrix jacobian(Scalar t, const Vector& q) const {
    using std::abs;
    using std::max;
    if (ivp_.force_jacobian) return ivp_.force_jacobian(t, q);
    const int d = ivp_.dim;
    Matrix jac(d, d);
    for (int k = 0; k < d; ++k) {
      const Scalar delta = Scalar(options_.jacobian_probe) * max(Scalar(1), abs(q(k)));
      Vector qp = q, qm = q;
      qp(k) += delta;
      qm(k) -= delta;
      jac.col(k) = (f(t, qp) - f(t, qm)) / (Scalar(2) * delta);
    }
    return jac;
  }

  Scalar tolerance() const { return Scalar(options_.tolerance) * scale_; }

  [[noreturn]] void fail(Scalar residual) const {
    throw ConvergenceFailure("stage equations not solved after " +
                                 std::to_string(options_.max_iterations) + " iterations",
                             static_cast<double>(residual));
  }

  static bool finite(Scalar x) { return std::isfinite(static_cast<double>(x)); }

  // Q_i = known + h^2 a_ii f(t_i, Q_i).
  void solve_single_stage(const State& s, Scalar h, int i, const Vector& known,
                          Matrix& stages, Matrix& forces) {
    const int d = ivp_.dim;
    const Scalar t = stage_time(s, h, i);
    const Scalar weight = h * h * tableau_.a_bar(i, i);
    Vector q = known;
    for (int it = 0;; ++it) {
      const Vector fq = f(t, q);
      const Vector g = q - known - weight * fq;
      const Scalar res = g.cwiseAbs().maxCoeff();
      last_residual_ = res;
      if (!finite(res)) fail(res);
      if (res <= tolerance()) {
        stages.col(i) = q;
        forces.col(i) = fq;
        last_iterations_ = std::max(last_iterations_, it);
        return;
      }
      if (it == options_.max_iterations) fail(res);
      if (options_.solver == StageSolver::FixedPoint) {
        q = known + weight * fq;
        continue;
      }
      const Matrix jac = Matrix::Identity(d, d) - weight * jacobian(t, q);
      Eigen::FullPivLU<Matrix> lu(jac);
      if (!lu.isInvertible()) throw LinearSolveFailure("singular Newton matrix");
      q -= lu.solve(g);
    }
  }

  // Q_i = base_i + h^2 sum_j a_ij f(t_j, Q_j), all stages at once.
  void solve_coupled(const State& s, Scalar h, const Matrix& base, Matrix& stages,
                     Matrix& forces) {
    const int r = tableau_.stages();
    const int d = ivp_.dim;
    const Scalar h2 = h * h;
    for (int it = 0;; ++it) {
      for (int j = 0; j < r; ++j) forces.col(j) = f(stage_time(s, h, j), stages.col(j));
      const Matrix g = stages - base - h2 * forces * tableau_.a_bar.transpose();
      const Scalar res = g.cwiseAbs().maxCoeff();
      last_residual_ = res;
      if (!finite(res)) fail(res);
      if (res <= tolerance()) {
        last_iterations_ = it;
        return;
      }
      if (it == options_.max_iterations) fail(res);
      if (options_.solver == StageSolver::FixedPoint) {
        stages = base + h2 * forces * tableau_.a_bar.transpose();
        continue;
      }
      Matrix jac = Matrix::Identity(r * d, r * d);
      for (int j = 0; j < r; ++j) {
        const Matrix fj = jacobian(stage_time(s, h, j), stages.col(j));
        for (int i = 0; i < r; ++i) jac.block(i * d, j * d, d, d) -= h2 * tableau_.a_bar(i, j) * fj;
      }
      Eigen::FullPivLU<Matrix> lu(jac);
      if (!lu.isInvertible()) throw LinearSolveFailure("singular Newton matrix");
      const Vector delta = lu.solve(Eigen::Map<const Vector>(g.data(), r * d));
      stages -= Eigen::Map<const Matrix>(delta.data(), d, r);
    }
  }

  RknTableau<Scalar> tableau_;
  SecondOrderIVP<Scalar> ivp_;
  StepperOptions options_;
  StructureClass structure_ = StructureClass::FullyImplicit;
  Eigen::LDLT<Matrix> mass_ldlt_;
  Scalar scale_ = Scalar(1);
  int last_iterations_ = 0;
  Scalar last_residual_ = Scalar(0);
};

/// One step of size h from s.
template <typename Scalar>
StepState<Scalar> step(const RknTableau<Scalar>& tableau, const SecondOrderIVP<Scalar>& ivp,
                       Scalar h, const StepState<Scalar>& s, StepperOptions options = {}) {
  RknStepper<Scalar> stepper(tableau, ivp, options);
  return stepper.step(h, s);
}

/// n_steps uniform steps from ivp.initial. Failures are rethrown with the
/// failing step index attached.
template <typename Scalar>
Trajectory<Scalar> integrate(const RknTableau<Scalar>& tableau, const SecondOrderIVP<Scalar>& ivp,
                             Scalar h, long n_steps, StepperOptions options = {}) {
  if (n_steps < 1) throw ValidationError("n_steps must be at least 1");
  if (!(h > Scalar(0))) throw ValidationError("step size must be positive");
  RknStepper<Scalar> stepper(tableau, ivp, options);
  Trajectory<Scalar> traj;
  traj.states.reserve(static_cast<std::size_t>(n_steps + 1));
  traj.newton_iterations.reserve(static_cast<std::size_t>(n_steps));
  const bool with_energy = ivp.has_hamiltonian();
  StepState<Scalar> state = ivp.initial;
  traj.states.push_back(state);
  if (with_energy) traj.energy.push_back(stepper.hamiltonian(state));
  for (long k = 0; k < n_steps; ++k) {
    try {
      state = stepper.step(h, state);
    } catch (NumericalFailure& e) {
      e.attach_step(k);
      throw;
    }
    state.t = ivp.initial.t + Scalar(k + 1) * h;
    traj.states.push_back(state);
    traj.newton_iterations.push_back(stepper.last_iterations());
    if (with_energy) traj.energy.push_back(stepper.hamiltonian(state));
  }
  return traj;
}

/// Jacobian of (p_n, q_n) -> (p_{n+1}, q_{n+1}) by central differences with
/// probe 1e-6 max(1, |x_k|) per coordinate.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> flow_jacobian(
    const RknTableau<Scalar>& tableau, const SecondOrderIVP<Scalar>& ivp, Scalar h,
    const StepState<Scalar>& s, StepperOptions options = {}) {
  using std::abs;
  using std::max;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const int d = ivp.dim;
  if (h == Scalar(0)) return Matrix::Identity(2 * d, 2 * d);
  RknStepper<Scalar> stepper(tableau, ivp, options);
  Vector x(2 * d);
  x << s.p, s.q;
  auto map = [&](const Vector& z) {
    StepState<Scalar> in{s.t, z.tail(d), z.head(d)};
    const auto out = stepper.step(h, in);
    Vector y(2 * d);
    y << out.p, out.q;
    return y;
  };
  Matrix jac(2 * d, 2 * d);
  for (int k = 0; k < 2 * d; ++k) {
    const Scalar delta = Scalar(1e-6) * max(Scalar(1), abs(x(k)));
    Vector xp = x, xm = x;
    xp(k) += delta;
    xm(k) -= delta;
    jac.col(k) = (map(xp) - map(xm)) / (Scalar(2) * delta);
  }
  return jac;
}

/// max |Phi'^T J Phi' - J| with J = [[0, I], [-I, 0]] in (p, q) ordering.
/// Only defined for autonomous problems.
template <typename Scalar>
Scalar symplecticity_defect(const RknTableau<Scalar>& tableau, const SecondOrderIVP<Scalar>& ivp,
                            Scalar h, const StepState<Scalar>& s, StepperOptions options = {}) {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (!ivp.autonomous) {
    throw ValidationError("symplecticity diagnostics require an autonomous problem");
  }
  const int d = ivp.dim;
  const Matrix phi = flow_jacobian(tableau, ivp, h, s, options);
  Matrix j = Matrix::Zero(2 * d, 2 * d);
  j.topRightCorner(d, d).setIdentity();
  j.bottomLeftCorner(d, d) = -Matrix::Identity(d, d);
  return (phi.transpose() * j * phi - j).cwiseAbs().maxCoeff();
}

}  // namespace csrkn
