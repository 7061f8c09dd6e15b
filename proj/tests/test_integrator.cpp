#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"

using namespace csrkn;
using namespace csrkn::testing;

namespace {

// Velocity Verlet written independently of the tableau machinery.
State textbook_verlet(const IVP& ivp, double h, const State& s) {
  const Eigen::VectorXd half = s.p + 0.5 * h * ivp.force(s.t, s.q);
  State out;
  out.t = s.t + h;
  out.q = s.q + h * half;
  out.p = half + 0.5 * h * ivp.force(out.t, out.q);
  return out;
}

IVP linear_ivp() { return harmonic_oscillator().ivp; }

}  // namespace

TEST_CASE("Stormer-Verlet step by hand") {
  const auto s1 = step(verlet(), linear_ivp(), 0.1, make_state({1.0}, {0.0}));
  CHECK(s1.q(0) == doctest::Approx(0.995).epsilon(1e-15));
  CHECK(s1.p(0) == doctest::Approx(-0.09975).epsilon(1e-14));
}

TEST_CASE("tableau Verlet matches the textbook scheme") {
  for (const auto& pb : {pendulum(), kepler(0.6), henon_heiles()}) {
    RknStepper<double> stepper(verlet(), pb.ivp);
    State a = pb.ivp.initial, b = pb.ivp.initial;
    for (int k = 0; k < 50; ++k) {
      a = stepper.step(0.05, a);
      b = textbook_verlet(pb.ivp, 0.05, b);
    }
    CAPTURE(pb.name);
    CHECK((a.q - b.q).cwiseAbs().maxCoeff() < 1e-13);
    CHECK((a.p - b.p).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("zero step returns the state") {
  const auto s = make_state({0.3}, {-0.2}, 1.5);
  const auto out = step(family_tableau(4, "gauss:2"), linear_ivp(), 0.0, s);
  CHECK(out.q == s.q);
  CHECK(out.p == s.p);
  CHECK(out.t == s.t);
}

TEST_CASE("invalid step sizes") {
  RknStepper<double> stepper(verlet(), linear_ivp());
  CHECK_THROWS_AS(stepper.step(-0.1, linear_ivp().initial), ValidationError);
  CHECK_THROWS_AS(stepper.step(std::nan(""), linear_ivp().initial), ValidationError);
  CHECK_THROWS_AS(integrate(verlet(), linear_ivp(), 0.1, 0), ValidationError);
}

TEST_CASE("Gauss-2 order-4 step matches the rotation") {
  const auto s = step(family_tableau(4, "gauss:2"), linear_ivp(), 0.1, make_state({1.0}, {0.0}));
  CHECK(std::abs(s.q(0) - std::cos(0.1)) < 2e-8);
  CHECK(std::abs(s.p(0) + std::sin(0.1)) < 2e-8);
}

TEST_CASE("ten Verlet steps") {
  const auto traj = integrate(verlet(), linear_ivp(), 0.1, 10);
  REQUIRE(traj.states.size() == 11);
  CHECK(traj.states.back().t == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(traj.states.back().q(0) - std::cos(1.0)) < 1e-2);
  CHECK(traj.energy.size() == 11);
  CHECK(traj.newton_iterations.size() == 10);
  for (std::size_t k = 1; k < traj.states.size(); ++k)
    CHECK(traj.states[k].t > traj.states[k - 1].t);
}

TEST_CASE("one-step trajectory equals a single step") {
  const auto t = family_tableau(3, "radau-left:2", 0.2, 0.1);
  const auto pb = pendulum(0.8, 0.3);
  const auto traj = integrate(t, pb.ivp, 0.07, 1);
  const auto s = step(t, pb.ivp, 0.07, pb.ivp.initial);
  CHECK(traj.states[1].q == s.q);
  CHECK(traj.states[1].p == s.p);
}

TEST_CASE("Kepler order-5 energy") {
  const auto pb = kepler(0.6);
  const auto traj = integrate(family_tableau(5, "gauss:3"), pb.ivp, 0.01, 100);
  for (double e : traj.energy) CHECK(std::abs(e - traj.energy.front()) < 1e-10);
}

TEST_CASE("local error ratios of the table tableaux") {
  const auto ivp = linear_ivp();
  const auto s0 = make_state({1.0}, {0.0});
  for (const auto& [k, rules] : kTablePairs)
    for (const auto& rule : rules) {
      const auto t = family_tableau(k, rule, 0.1, -0.1);
      std::vector<double> errors;
      for (double h = 0.1; h > 0.01; h /= 2) {
        const auto s = step(t, ivp, h, s0);
        errors.push_back(std::hypot(s.q(0) - std::cos(h), s.p(0) + std::sin(h)));
      }
      const double expected = std::pow(2.0, k + 1);
      for (std::size_t i = 1; i < errors.size(); ++i) {
        CAPTURE(rule);
        CAPTURE(k);
        CHECK(errors[i - 1] / errors[i] == doctest::Approx(expected).epsilon(0.15));
      }
    }
}

TEST_CASE("stage solvers by structure") {
  const auto pb = pendulum();
  CHECK(RknStepper<double>(verlet(), pb.ivp).structure() == StructureClass::Explicit);
  const auto dirk = solve_structure(discretize_parametric(4, make_rule("lobatto:3")),
                                    StructureClass::DiagonallyImplicit)
                        .tableau.evaluate(Eigen::VectorXd());
  RknStepper<double> d(dirk, pb.ivp);
  CHECK(d.structure() == StructureClass::DiagonallyImplicit);
  RknStepper<double> f(family_tableau(4, "gauss:2"), pb.ivp);
  CHECK(f.structure() == StructureClass::FullyImplicit);

  // The diagonally implicit and coupled solvers agree on the same tableau.
  StepperOptions coupled;
  coupled.structure_tolerance = -1.0;
  RknStepper<double> c(dirk, pb.ivp, coupled);
  CHECK(c.structure() == StructureClass::FullyImplicit);
  const auto a = d.step(0.1, pb.ivp.initial);
  const auto b = c.step(0.1, pb.ivp.initial);
  CHECK((a.q - b.q).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((a.p - b.p).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("Newton leaves stage residuals below tolerance") {
  const auto pb = kepler(0.6);
  RknStepper<double> stepper(family_tableau(5, "lobatto:4", 0.3, 0.2), pb.ivp);
  State s = pb.ivp.initial;
  for (int k = 0; k < 20; ++k) {
    s = stepper.step(0.05, s);
    CHECK(stepper.last_residual() < 1e-12);
    CHECK(stepper.last_iterations() >= 1);
  }
}

TEST_CASE("fixed-point and Newton agree") {
  const auto pb = pendulum(1.2, 0.1);
  const auto t = family_tableau(4, "gauss:2");
  StepperOptions fp;
  fp.solver = StageSolver::FixedPoint;
  fp.max_iterations = 200;
  const auto a = step(t, pb.ivp, 0.05, pb.ivp.initial);
  const auto b = step(t, pb.ivp, 0.05, pb.ivp.initial, fp);
  CHECK((a.q - b.q).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((a.p - b.p).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("analytic and finite-difference Jacobians agree") {
  auto pb = kepler(0.3);
  auto no_jac = pb.ivp;
  no_jac.force_jacobian = nullptr;
  const auto t = family_tableau(4, "gauss:2");
  const auto a = step(t, pb.ivp, 0.05, pb.ivp.initial);
  const auto b = step(t, no_jac, 0.05, pb.ivp.initial);
  CHECK((a.q - b.q).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((a.p - b.p).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("convergence failures carry the residual") {
  const auto pb = pendulum();
  StepperOptions o;
  o.solver = StageSolver::FixedPoint;
  o.max_iterations = 2;
  try {
    step(family_tableau(4, "gauss:2"), pb.ivp, 0.5, pb.ivp.initial, o);
    FAIL("expected ConvergenceFailure");
  } catch (const ConvergenceFailure& e) {
    CHECK(e.last_residual() > 0.0);
  }
}

TEST_CASE("trajectory failures carry the step index") {
  const auto pb = kepler(0.6);
  StepperOptions o;
  o.solver = StageSolver::FixedPoint;
  o.max_iterations = 3;
  try {
    integrate(family_tableau(4, "gauss:2"), pb.ivp, 0.3, 50, o);
    FAIL("expected NumericalFailure");
  } catch (const NumericalFailure& e) {
    REQUIRE(e.step_index());
    CHECK(std::string(e.what()).find("step ") == 0);
  }
}

TEST_CASE("flow Jacobian") {
  const auto ivp = linear_ivp();
  const auto s = make_state({0.4}, {0.1});
  CHECK(flow_jacobian(verlet(), ivp, 0.0, s).isIdentity());
  CHECK(std::abs(flow_jacobian(verlet(), ivp, 0.1, s).determinant() - 1.0) < 1e-9);

  std::mt19937 rng(4);
  const auto t = family_tableau(3, "gauss:2");
  const auto j1 = flow_jacobian(t, ivp, 0.1, make_state({uniform(rng, -1, 1)}, {uniform(rng, -1, 1)}));
  const auto j2 = flow_jacobian(t, ivp, 0.1, make_state({uniform(rng, -1, 1)}, {uniform(rng, -1, 1)}));
  CHECK((j1 - j2).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("symplecticity defect") {
  std::mt19937 rng(6);
  const auto pb = pendulum();
  for (const auto& [k, rules] : kTablePairs)
    for (const auto& rule : rules) {
      const auto s = make_state({uniform(rng, -2, 2)}, {uniform(rng, -1, 1)});
      CHECK(symplecticity_defect(family_tableau(k, rule), pb.ivp, 0.1, s) < 1e-6);
    }
  const double broken = symplecticity_defect(perturbed_tableau(), pb.ivp, 0.2, make_state({0.0}, {0.0}));
  CHECK(broken > 1e-5);
  // One-step defect of the perturbed scheme on f = -q is h^4 b_1 delta.
  CHECK(broken == doctest::Approx(std::pow(0.2, 4) * 0.5 * 0.05).epsilon(0.01));
}

TEST_CASE("mass matrix path is symplectic") {
  const auto pb = mass_oscillator();
  std::mt19937 rng(12);
  for (const auto& t : {verlet(), family_tableau(4, "gauss:2"), family_tableau(5, "lobatto:4")})
    for (int k = 0; k < 3; ++k) {
      const auto s = make_state({uniform(rng, -1, 1), uniform(rng, -1, 1)},
                                {uniform(rng, -1, 1), uniform(rng, -1, 1)});
      CHECK(symplecticity_defect(t, pb.ivp, 0.1, s) < 1e-6);
    }
}

TEST_CASE("mass matrix Verlet written out") {
  // p~ = M^-1 p, acceleration -M^-1 grad V, and the p update scaled by M.
  const auto pb = mass_oscillator();
  const Eigen::Matrix2d m = *pb.ivp.mass;
  const State s = pb.ivp.initial;
  const double h = 0.1;
  const Eigen::VectorXd v = m.inverse() * s.p;
  const Eigen::VectorXd f0 = -m.inverse() * s.q;
  const Eigen::VectorXd q1 = s.q + h * v + 0.5 * h * h * f0;
  const Eigen::VectorXd f1 = -m.inverse() * q1;
  const Eigen::VectorXd p1 = s.p + m * (0.5 * h * (f0 + f1));
  const auto out = step(verlet(), pb.ivp, h, s);
  CHECK((out.q - q1).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((out.p - p1).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("diagnostics refuse non-autonomous problems") {
  auto ivp = linear_ivp();
  ivp.autonomous = false;
  ivp.force = [](double t, const Eigen::VectorXd& q) -> Eigen::VectorXd { return -q * (1 + t); };
  ivp.potential = nullptr;
  CHECK_NOTHROW(step(verlet(), ivp, 0.1, ivp.initial));
  CHECK_THROWS_AS(symplecticity_defect(verlet(), ivp, 0.1, ivp.initial), ValidationError);
}

TEST_CASE("non-gradient forces still return a defect") {
  IVP ivp;
  ivp.dim = 2;
  ivp.force = [](double, const Eigen::VectorXd& q) -> Eigen::VectorXd {
    return Eigen::Vector2d(q(1), 0.0);
  };
  ivp.initial = make_state({1.0, 1.0}, {0.0, 0.0});
  const double d = symplecticity_defect(verlet(), ivp, 0.1, ivp.initial);
  CHECK(std::isfinite(d));
}

TEST_CASE("problem validation") {
  auto ivp = linear_ivp();
  ivp.mass = Eigen::MatrixXd(Eigen::Matrix2d::Identity());
  CHECK_THROWS_AS(ivp.validate(), ValidationError);
  auto asym = mass_oscillator().ivp;
  (*asym.mass)(0, 1) = 0.1;
  CHECK_THROWS_AS(asym.validate(), ValidationError);
  auto singular = mass_oscillator().ivp;
  singular.mass->setZero();
  CHECK_THROWS_AS(singular.validate(), ValidationError);
  auto wrong = linear_ivp();
  wrong.potential = [](const Eigen::VectorXd& q) { return q.squaredNorm(); };
  CHECK_THROWS_AS(wrong.validate(), ValidationError);
  CHECK_THROWS_AS(RknStepper<double>(verlet(), wrong), ValidationError);
}

TEST_CASE("trajectories are deterministic") {
  const auto pb = henon_heiles();
  const auto t = family_tableau(5, "radau-right:3", 0.1, 0.2);
  const auto a = integrate(t, pb.ivp, 0.1, 30);
  const auto b = integrate(t, pb.ivp, 0.1, 30);
  for (std::size_t k = 0; k < a.states.size(); ++k) {
    CHECK(a.states[k].q == b.states[k].q);
    CHECK(a.states[k].p == b.states[k].p);
  }
}

TEST_CASE("long double stepping") {
  SecondOrderIVP<long double> ivp;
  ivp.dim = 1;
  ivp.force = [](long double, const Eigen::Matrix<long double, -1, 1>& q) {
    return Eigen::Matrix<long double, -1, 1>(-q);
  };
  ivp.potential = [](const Eigen::Matrix<long double, -1, 1>& q) { return 0.5L * q.squaredNorm(); };
  ivp.initial.q = Eigen::Matrix<long double, -1, 1>::Constant(1, 1.0L);
  ivp.initial.p = Eigen::Matrix<long double, -1, 1>::Zero(1);
  const auto t = family_tableau(4, "gauss:2").cast<long double>();
  const auto traj = integrate(t, ivp, 0.1L, 10);
  CHECK(std::abs(static_cast<double>(traj.states.back().q(0)) - std::cos(1.0)) < 1e-6);
  const auto narrow = integrate(family_tableau(4, "gauss:2"), linear_ivp(), 0.1, 10);
  CHECK(std::abs(static_cast<double>(traj.states.back().q(0)) - narrow.states.back().q(0)) < 1e-13);
  CHECK(std::abs(static_cast<double>(traj.energy.back()) - narrow.energy.back()) < 1e-13);
}
