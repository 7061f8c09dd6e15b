#include "csrkn/problems.hpp"

#include <cmath>
#include <numbers>

namespace csrkn {

namespace {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

State make_state(double t, Vector q, Vector p) { return State{t, std::move(q), std::move(p)}; }

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

// E - e sin E = m by Newton.
double solve_kepler_equation(double m, double e) {
  double E = e < 0.8 ? m : std::numbers::pi * (m >= 0 ? 1.0 : -1.0);
  for (int it = 0; it < 100; ++it) {
    const double g = E - e * std::sin(E) - m;
    const double step = g / (1.0 - e * std::cos(E));
    E -= step;
    if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(E))) break;
  }
  return E;
}

}  // namespace

BenchmarkProblem harmonic_oscillator(double q0, double p0) {
  BenchmarkProblem pb;
  pb.name = "oscillator";
  pb.period = 2.0 * std::numbers::pi;
  IVP& ivp = pb.ivp;
  ivp.dim = 1;
  ivp.force = [](double, const Vector& q) { return Vector(-q); };
  ivp.force_jacobian = [](double, const Vector&) { return Matrix(-Matrix::Identity(1, 1)); };
  ivp.potential = [](const Vector& q) { return 0.5 * q.squaredNorm(); };
  ivp.initial = make_state(0.0, vec({q0}), vec({p0}));
  pb.exact_flow = [](const State& s, double t) {
    const double dt = t - s.t;
    const double c = std::cos(dt), sn = std::sin(dt);
    return make_state(t, c * s.q + sn * s.p, -sn * s.q + c * s.p);
  };
  return pb;
}

BenchmarkProblem pendulum(double q0, double p0) {
  BenchmarkProblem pb;
  pb.name = "pendulum";
  IVP& ivp = pb.ivp;
  ivp.dim = 1;
  ivp.force = [](double, const Vector& q) { return Vector(-q.array().sin()); };
  ivp.force_jacobian = [](double, const Vector& q) {
    return Matrix(Matrix::Constant(1, 1, -std::cos(q(0))));
  };
  ivp.potential = [](const Vector& q) { return -std::cos(q(0)); };
  ivp.initial = make_state(0.0, vec({q0}), vec({p0}));
  const double energy = 0.5 * p0 * p0 - std::cos(q0);
  if (energy < 1.0) {
    const double amplitude = std::acos(-energy);
    const double k = std::sin(0.5 * amplitude);
    pb.period = k == 0.0 ? 2.0 * std::numbers::pi : 4.0 * std::comp_ellint_1(k);
  }
  return pb;
}

BenchmarkProblem kepler(double e) {
  if (!(e >= 0.0 && e < 1.0)) throw ValidationError("eccentricity must lie in [0, 1)");
  BenchmarkProblem pb;
  pb.name = "kepler";
  pb.period = 2.0 * std::numbers::pi;
  IVP& ivp = pb.ivp;
  ivp.dim = 2;
  auto radius = [](const Vector& q) {
    const double r = q.norm();
    if (r < 1e-12) throw NumericalFailure("kepler: collision singularity (|q| < 1e-12)");
    return r;
  };
  ivp.force = [radius](double, const Vector& q) {
    const double r = radius(q);
    return Vector(-q / (r * r * r));
  };
  ivp.force_jacobian = [radius](double, const Vector& q) {
    const double r = radius(q);
    const double r3 = r * r * r;
    return Matrix(-Matrix::Identity(2, 2) / r3 + 3.0 * q * q.transpose() / (r3 * r * r));
  };
  ivp.potential = [radius](const Vector& q) { return -1.0 / radius(q); };
  ivp.initial = make_state(0.0, vec({1.0 - e, 0.0}), vec({0.0, std::sqrt((1.0 + e) / (1.0 - e))}));
  pb.exact = [e](double t) {
    const double E = solve_kepler_equation(t, e);
    const double c = std::cos(E), s = std::sin(E);
    const double w = std::sqrt(1.0 - e * e);
    const double rate = 1.0 / (1.0 - e * c);
    return make_state(t, vec({c - e, w * s}), vec({-s * rate, w * c * rate}));
  };
  return pb;
}

BenchmarkProblem henon_heiles() {
  BenchmarkProblem pb;
  pb.name = "henon-heiles";
  IVP& ivp = pb.ivp;
  ivp.dim = 2;
  ivp.force = [](double, const Vector& q) {
    const double x = q(0), y = q(1);
    return vec({-x - 2.0 * x * y, -y - x * x + y * y});
  };
  ivp.force_jacobian = [](double, const Vector& q) {
    const double x = q(0), y = q(1);
    Matrix j(2, 2);
    j << -1.0 - 2.0 * y, -2.0 * x, -2.0 * x, -1.0 + 2.0 * y;
    return j;
  };
  ivp.potential = [](const Vector& q) {
    const double x = q(0), y = q(1);
    return 0.5 * (x * x + y * y) + x * x * y - y * y * y / 3.0;
  };
  ivp.initial = make_state(0.0, vec({0.0, 0.1}), vec({0.39, 0.1}));
  pb.period = 2.0 * std::numbers::pi;
  return pb;
}

BenchmarkProblem mass_oscillator() {
  BenchmarkProblem pb;
  pb.name = "mass-oscillator";
  const Vector m = vec({2.0, 0.5});
  IVP& ivp = pb.ivp;
  ivp.dim = 2;
  ivp.mass = Matrix(m.asDiagonal());
  ivp.force = [m](double, const Vector& q) { return Vector(-q.cwiseQuotient(m)); };
  ivp.force_jacobian = [m](double, const Vector&) {
    return Matrix((-m.cwiseInverse()).asDiagonal());
  };
  ivp.potential = [](const Vector& q) { return 0.5 * q.squaredNorm(); };
  ivp.initial = make_state(0.0, vec({1.0, 0.5}), vec({0.0, 0.2}));
  pb.period = 2.0 * std::numbers::pi * std::sqrt(2.0);
  pb.exact_flow = [m](const State& s, double t) {
    const double dt = t - s.t;
    Vector q(2), p(2);
    for (int k = 0; k < 2; ++k) {
      const double w = 1.0 / std::sqrt(m(k));
      const double v = s.p(k) / m(k);
      const double c = std::cos(w * dt), sn = std::sin(w * dt);
      q(k) = s.q(k) * c + v / w * sn;
      p(k) = m(k) * (-s.q(k) * w * sn + v * c);
    }
    return make_state(t, q, p);
  };
  return pb;
}

std::vector<BenchmarkProblem> catalog() {
  return {harmonic_oscillator(), pendulum(), kepler(0.6), henon_heiles(), mass_oscillator()};
}

BenchmarkProblem make_problem(const std::string& name, const ProblemOptions& options) {
  BenchmarkProblem pb;
  if (name == "oscillator") {
    pb = harmonic_oscillator();
  } else if (name == "pendulum") {
    pb = pendulum();
  } else if (name == "kepler") {
    pb = kepler(options.eccentricity);
  } else if (name == "henon-heiles") {
    pb = henon_heiles();
  } else if (name == "mass-oscillator") {
    pb = mass_oscillator();
  } else {
    throw ValidationError("unknown problem '" + name + "'");
  }
  if (!options.q0 && !options.p0) return pb;
  State s = pb.ivp.initial;
  auto assign = [&](const std::optional<std::vector<double>>& v, Vector& out, const char* what) {
    if (!v) return;
    if (static_cast<int>(v->size()) != pb.ivp.dim) {
      throw ValidationError(std::string(what) + " must have " + std::to_string(pb.ivp.dim) +
                            " entries for " + name);
    }
    out = Eigen::Map<const Vector>(v->data(), pb.ivp.dim);
  };
  assign(options.q0, s.q, "q0");
  assign(options.p0, s.p, "p0");
  if (name == "pendulum") return pendulum(s.q(0), s.p(0));
  return with_initial(std::move(pb), s);
}

BenchmarkProblem with_initial(BenchmarkProblem problem, const State& initial) {
  problem.ivp.initial = initial;
  problem.exact = nullptr;
  return problem;
}

RknTableau<double> oracle_tableau() {
  SymplecticFamilySpec spec;
  spec.order = 5;
  return discretize(build_symplectic_family(spec), make_rule<double>(QuadratureFamily::Gauss, 3));
}

State reference_state(const BenchmarkProblem& problem, double t, const OracleOptions& options) {
  const State& init = problem.ivp.initial;
  if (problem.exact_flow) return problem.exact_flow(init, t);
  if (problem.exact) return problem.exact(t);
  const double span = t - init.t;
  if (span < 0.0) throw ValidationError("reference time precedes the initial time");
  if (span == 0.0) return init;

  static const RknTableau<double> tableau = oracle_tableau();
  StepperOptions stepper_options;
  stepper_options.tolerance = 1e-14;
  auto run = [&](long n) {
    RknStepper<double> stepper(tableau, problem.ivp, stepper_options);
    const double h = span / static_cast<double>(n);
    State s = init;
    for (long k = 0; k < n; ++k) {
      s = stepper.step(h, s);
      s.t = init.t + static_cast<double>(k + 1) * h;
    }
    return s;
  };
  auto flat = [](const State& s) {
    Vector x(s.q.size() + s.p.size());
    x << s.q, s.p;
    return x;
  };

  long n = std::max(1L, static_cast<long>(std::ceil(span / options.initial_step)));
  State prev = run(n);
  double diff = 0.0;
  for (int k = 0; k < options.max_halvings; ++k) {
    n *= 2;
    State next = run(n);
    const Vector a = flat(prev), b = flat(next);
    diff = (a - b).cwiseAbs().maxCoeff();
    const double scale = b.cwiseAbs().maxCoeff();
    if (diff <= options.tolerance * scale) {
      next.t = t;
      return next;
    }
    prev = std::move(next);
  }
  throw OracleFailure("reference oracle did not converge (last difference " +
                      std::to_string(diff) + ")");
}

}  // namespace csrkn
