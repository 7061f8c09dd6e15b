#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "support.hpp"

using namespace csrkn;
using namespace csrkn::testing;

TEST_CASE("slope of synthetic power laws") {
  const std::vector<double> h = {0.2, 0.1, 0.05, 0.025, 0.0125};
  for (double m : {1.0, 2.0, 4.5, 6.0}) {
    std::vector<double> e;
    for (double x : h) e.push_back(3.7 * std::pow(x, m));
    CHECK(std::abs(fit_loglog_slope(h, e) - m) < 1e-10);
  }
  CHECK(fit_slope({0.0, 1.0, 2.0}, {1.0, 3.0, 5.0}) == doctest::Approx(2.0));
  CHECK_THROWS_AS(fit_slope({1.0}, {1.0}), ValidationError);
  CHECK_THROWS_AS(fit_slope({1.0, 1.0}, {1.0, 2.0}), ValidationError);
  CHECK_THROWS_AS(fit_loglog_slope({0.1, 0.05}, {0.0, 1.0}), ValidationError);
}

TEST_CASE("convergence of Gauss-2 order 4 and Verlet") {
  const std::vector<double> h = {0.2, 0.1, 0.05, 0.025};
  const auto g = convergence_study(family_tableau(4, "gauss:2"), harmonic_oscillator(), h, 2.0);
  CHECK(g.slope == doctest::Approx(4.0).epsilon(0.05));
  CHECK(g.interval_slopes.size() == 3);
  CHECK(std::is_sorted(g.errors.rbegin(), g.errors.rend()));
  const auto v = convergence_study(verlet(), harmonic_oscillator(), h, 2.0);
  CHECK(v.slope == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("errors are measured against the reference state") {
  const auto pb = pendulum(0.5, 0.0);
  const std::vector<double> h = {0.1, 0.05, 0.025, 0.0125};
  const auto r = convergence_study(verlet(), pb, h, 1.0);
  const auto ref = reference_state(pb, 1.0);
  const auto traj = integrate(verlet(), pb.ivp, 0.1, 10);
  const auto& s = traj.states.back();
  const double err = std::max((s.q - ref.q).cwiseAbs().maxCoeff(), (s.p - ref.p).cwiseAbs().maxCoeff());
  CHECK(r.errors[0] == doctest::Approx(err).epsilon(1e-10));
}

TEST_CASE("convergence input validation") {
  const auto pb = harmonic_oscillator();
  CHECK_THROWS_AS(convergence_study(verlet(), pb, {0.1, 0.05, 0.025}, 1.0), ValidationError);
  CHECK_THROWS_AS(convergence_study(verlet(), pb, {0.1, 0.05, 0.05, 0.025}, 1.0), ValidationError);
  CHECK_THROWS_AS(convergence_study(verlet(), pb, {0.3, 0.1, 0.05, 0.025}, 1.0), ValidationError);
  CHECK_THROWS_AS(convergence_study(verlet(), pb, {0.2, 0.1, 0.05, 0.025}, -1.0), ValidationError);
}

TEST_CASE("convergence failures name the step size") {
  const auto pb = kepler(0.9);
  StepperOptions o;
  o.solver = StageSolver::FixedPoint;
  o.max_iterations = 2;
  try {
    convergence_study(family_tableau(4, "gauss:2"), pb, {0.5, 0.25, 0.125, 0.0625}, 1.0, o);
    FAIL("expected NumericalFailure");
  } catch (const NumericalFailure& e) {
    CHECK(std::string(e.what()).rfind("h = ", 0) == 0);
  }
}

TEST_CASE("Verlet energy stays bounded on the pendulum") {
  const auto r = drift_study(verlet(), pendulum(1.0, 0.0), 0.1, 100000, 100);
  CHECK(r.window_max.size() == 100);
  CHECK(r.max_window() < 5 * r.first_window());
  CHECK(std::abs(r.slope) < r.slope_threshold());
  CHECK(r.bounded());
  CHECK(r.total_time() == doctest::Approx(10000.0));
}

TEST_CASE("perturbed tableau drifts") {
  const auto sv = drift_study(verlet(), pendulum(1.0, 0.0), 0.1, 100000, 100);
  const auto bad = drift_study(perturbed_tableau(), pendulum(1.0, 0.0), 0.1, 100000, 100);
  CHECK_FALSE(bad.bounded());
  CHECK(std::abs(bad.slope) >= 10 * sv.slope_threshold());
}

TEST_CASE("drift windows partition the trajectory") {
  const auto pb = pendulum(1.3, 0.2);
  const auto t = family_tableau(3, "lobatto:3");
  const auto r = drift_study(t, pb, 0.1, 600, 6);
  const auto traj = integrate(t, pb.ivp, 0.1, 600);
  const double h0 = traj.energy.front();
  const double scale = std::max(1.0, std::abs(h0));
  for (int w = 0; w < 6; ++w) {
    double worst = 0.0;
    for (int k = w * 100 + 1; k <= (w + 1) * 100; ++k)
      worst = std::max(worst, std::abs(traj.energy[static_cast<std::size_t>(k)] - h0) / scale);
    CHECK(r.window_max[static_cast<std::size_t>(w)] == doctest::Approx(worst).epsilon(1e-12));
    CHECK(r.window_center[static_cast<std::size_t>(w)] == doctest::Approx(0.1 * (w * 100 + 50.5)));
  }
  const auto single = drift_study(t, pb, 0.1, 600, 1);
  CHECK(single.window_max.size() == 1);
  CHECK(single.max_window() == doctest::Approx(r.max_window()).epsilon(1e-12));
  CHECK(single.slope == 0.0);
}

TEST_CASE("drift input validation") {
  CHECK_THROWS_AS(drift_study(verlet(), pendulum(), 0.1, 1000, 7), ValidationError);
  CHECK_THROWS_AS(drift_study(verlet(), pendulum(), -0.1, 1000, 10), ValidationError);
  auto pb = pendulum();
  pb.ivp.potential = nullptr;
  CHECK_THROWS_AS(drift_study(verlet(), pb, 0.1, 1000, 10), ValidationError);
}

TEST_CASE("table reproduction suite passes in full") {
  const auto r = table_reproduction_suite();
  CHECK(r.pass);
  CHECK(r.failures() == 0);
  CHECK(r.max_deviation < 1e-13);
  CHECK(r.cases.size() > 100);
}

TEST_CASE("reproduction spot values") {
  // Gauss-2, order-3 family at the origin.
  const auto g = family_tableau(3, "gauss:2");
  CHECK(std::abs(g.a_bar(0, 0) - (1 + kSqrt3) / 12) < 1e-15);
  CHECK(std::abs(g.a_bar(0, 1) - (1 - kSqrt3) / 12) < 1e-15);
  CHECK(std::abs(g.a_bar(1, 0) - (1 + kSqrt3) / 12) < 1e-15);
  CHECK(std::abs(g.a_bar(1, 1) - (1 - kSqrt3) / 12) < 1e-15);

  // Gauss-3, order 5: first diagonal entry (2 - 90a + 30b)/135.
  for (auto [a, b] : {std::pair{0.0, 0.0}, std::pair{1.0, 0.0}, std::pair{0.0, 1.0}}) {
    const auto t = family_tableau(5, "gauss:3", a, b);
    CHECK(std::abs(t.a_bar(0, 0) - (2 - 90 * a + 30 * b) / 135) < 1e-13);
  }

  // Lobatto-4, order 5.
  const auto l = family_tableau(5, "lobatto:4");
  CHECK(std::abs(l.b_bar(0) - 1.0 / 12) < 1e-15);
  CHECK(std::abs(l.b_bar(1) - (5 + kSqrt5) / 24) < 1e-15);
  CHECK(std::abs(l.b_bar(2) - (5 - kSqrt5) / 24) < 1e-15);
  CHECK(std::abs(l.b_bar(3)) < 1e-15);
}

TEST_CASE("golden tableaux cover every printed case") {
  const auto all = golden_tableaux();
  CHECK(all.size() >= 25);
  for (const auto& g : all) {
    CAPTURE(g.name);
    for (const auto& sample : parameter_samples(g.parameters))
      CHECK(max_deviation(g.generate(sample), g.golden(sample)) < 1e-13);
  }
  CHECK(parameter_samples({"a", "b"}).size() == 9);
  CHECK(parameter_samples({}).size() == 1);
}

TEST_CASE("max deviation") {
  const auto v = verlet();
  CHECK(max_deviation(v, v) == 0.0);
  auto w = v;
  w.b(1) += 0.25;
  CHECK(max_deviation(v, w) == 0.25);
  CHECK(std::isinf(max_deviation(v, family_tableau(4, "gauss:3"))));
}

TEST_CASE("report serialization") {
  const auto c = convergence_study(verlet(), harmonic_oscillator(), {0.2, 0.1, 0.05, 0.025}, 2.0);
  const auto j = to_json(c);
  CHECK(j["points"].size() == 4);
  CHECK(j["slope"].get<double>() == c.slope);
  const auto csv = to_csv(c);
  CHECK(csv.rfind("h,error\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);

  const auto d = drift_study(verlet(), pendulum(), 0.1, 100, 4);
  const auto dj = to_json(d);
  CHECK(dj["windows"].size() == 4);
  CHECK(dj["windows"][0].contains("max_rel_err"));
  CHECK(dj["bounded"].get<bool>() == d.bounded());
  CHECK(to_csv(d).rfind("window,t_center,max_rel_err\n", 0) == 0);

  ReproductionReport r;
  ReproductionCase bad;
  bad.name = "x";
  bad.deviation = std::numeric_limits<double>::infinity();
  bad.error = "boom";
  r.cases.push_back(bad);
  r.max_deviation = bad.deviation;
  const auto rj = to_json(r);
  CHECK(rj["max_deviation"].is_null());
  CHECK(rj["cases"][0]["error"] == "boom");
  CHECK(rj["failures"] == 1);
}
