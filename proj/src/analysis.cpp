#include "csrkn/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace csrkn {

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ValidationError("slope fit needs at least two points of equal count");
  }
  const auto n = static_cast<Eigen::Index>(x.size());
  const Eigen::Map<const Eigen::VectorXd> xs(x.data(), n), ys(y.data(), n);
  const Eigen::VectorXd dx = xs.array() - xs.mean();
  const double denom = dx.squaredNorm();
  if (denom == 0.0) throw ValidationError("slope fit needs distinct abscissae");
  return dx.dot(ys.array().matrix() - Eigen::VectorXd::Constant(n, ys.mean())) / denom;
}

double fit_loglog_slope(const std::vector<double>& h, const std::vector<double>& errors) {
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < h.size() && k < errors.size(); ++k) {
    if (!(h[k] > 0.0) || !(errors[k] > 0.0)) {
      throw ValidationError("log-log fit needs positive step sizes and errors");
    }
    lx.push_back(std::log(h[k]));
    ly.push_back(std::log(errors[k]));
  }
  if (h.size() != errors.size()) throw ValidationError("h and errors differ in length");
  return fit_slope(lx, ly);
}

namespace {

Eigen::VectorXd flatten(const State& s) {
  Eigen::VectorXd x(s.q.size() + s.p.size());
  x << s.q, s.p;
  return x;
}

long steps_for(double span, double h) {
  const double n = span / h;
  const double rounded = std::round(n);
  if (rounded < 1.0 || std::abs(n - rounded) > 1e-9 * std::max(1.0, rounded)) {
    throw ValidationError("step size " + format_double(h) + " does not divide " +
                          format_double(span));
  }
  return static_cast<long>(rounded);
}

}  // namespace

ConvergenceReport convergence_study(const RknTableau<double>& tableau,
                                    const BenchmarkProblem& problem,
                                    const std::vector<double>& h_list, double t_final,
                                    const StepperOptions& options) {
  if (h_list.size() < 4) throw ValidationError("convergence study needs at least 4 step sizes");
  if (!(t_final > 0.0)) throw ValidationError("t_final must be positive");
  for (std::size_t k = 0; k < h_list.size(); ++k) {
    if (!(h_list[k] > 0.0)) throw ValidationError("step sizes must be positive");
    if (k > 0 && !(h_list[k] < h_list[k - 1])) {
      throw ValidationError("step sizes must be strictly decreasing");
    }
  }
  const State& init = problem.ivp.initial;
  const Eigen::VectorXd exact = flatten(reference_state(problem, init.t + t_final));

  ConvergenceReport report;
  report.t_final = t_final;
  report.h = h_list;
  for (double h : h_list) {
    const long n = steps_for(t_final, h);
    State s = init;
    try {
      RknStepper<double> stepper(tableau, problem.ivp, options);
      for (long k = 0; k < n; ++k) {
        try {
          s = stepper.step(h, s);
        } catch (NumericalFailure& e) {
          e.attach_step(k);
          throw;
        }
        s.t = init.t + static_cast<double>(k + 1) * h;
      }
    } catch (const NumericalFailure& e) {
      throw NumericalFailure("h = " + format_double(h) + ": " + e.what());
    }
    const double err = (flatten(s) - exact).cwiseAbs().maxCoeff();
    if (!(err > 0.0)) throw ValidationError("zero error at h = " + format_double(h));
    report.errors.push_back(err);
  }
  report.slope = fit_loglog_slope(report.h, report.errors);
  for (std::size_t k = 1; k < report.h.size(); ++k) {
    report.interval_slopes.push_back(std::log(report.errors[k - 1] / report.errors[k]) /
                                     std::log(report.h[k - 1] / report.h[k]));
  }
  return report;
}

double DriftReport::max_window() const {
  return window_max.empty() ? 0.0 : *std::max_element(window_max.begin(), window_max.end());
}

bool DriftReport::bounded() const {
  return max_window() <= 5.0 * first_window() && std::abs(slope) < slope_threshold();
}

DriftReport drift_study(const RknTableau<double>& tableau, const BenchmarkProblem& problem,
                        double h, long n_steps, int window_count,
                        const StepperOptions& options) {
  if (!problem.ivp.has_hamiltonian()) throw ValidationError("drift study needs a Hamiltonian");
  if (!(h > 0.0)) throw ValidationError("step size must be positive");
  if (window_count < 1 || n_steps < window_count || n_steps % window_count != 0) {
    throw ValidationError("n_steps must be a positive multiple of window_count");
  }
  RknStepper<double> stepper(tableau, problem.ivp, options);
  DriftReport report;
  report.h = h;
  report.n_steps = n_steps;
  report.window_count = window_count;
  const State& init = problem.ivp.initial;
  report.h0 = stepper.hamiltonian(init);
  const double scale = std::max(1.0, std::abs(report.h0));
  const long length = n_steps / window_count;

  State s = init;
  for (int w = 0; w < window_count; ++w) {
    double worst = 0.0;
    for (long k = w * length; k < (w + 1) * length; ++k) {
      try {
        s = stepper.step(h, s);
      } catch (NumericalFailure& e) {
        e.attach_step(k);
        throw;
      }
      s.t = init.t + static_cast<double>(k + 1) * h;
      worst = std::max(worst, std::abs(stepper.hamiltonian(s) - report.h0) / scale);
    }
    report.window_max.push_back(worst);
    report.window_center.push_back(
        init.t + h * (static_cast<double>(w * length) + 0.5 * static_cast<double>(length + 1)));
  }
  report.slope = window_count > 1 ? fit_slope(report.window_center, report.window_max) : 0.0;
  return report;
}

double max_deviation(const RknTableau<double>& x, const RknTableau<double>& y) {
  if (x.stages() != y.stages() || x.a_bar.rows() != y.a_bar.rows() ||
      x.a_bar.cols() != y.a_bar.cols() || x.b.size() != y.b.size() ||
      x.b_bar.size() != y.b_bar.size()) {
    return std::numeric_limits<double>::infinity();
  }
  double d = (x.c - y.c).cwiseAbs().maxCoeff();
  d = std::max(d, (x.a_bar - y.a_bar).cwiseAbs().maxCoeff());
  d = std::max(d, (x.b_bar - y.b_bar).cwiseAbs().maxCoeff());
  d = std::max(d, (x.b - y.b).cwiseAbs().maxCoeff());
  return d;
}

std::size_t ReproductionReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(cases.begin(), cases.end(), [](const auto& c) { return !c.pass; }));
}

ReproductionReport table_reproduction_suite(double tolerance) {
  ReproductionReport report;
  report.tolerance = tolerance;
  for (const auto& g : golden_tableaux()) {
    for (const auto& sample : parameter_samples(g.parameters)) {
      ReproductionCase rc;
      rc.name = g.name;
      rc.sample = sample;
      try {
        const auto expected = g.golden(sample);
        rc.deviation = max_deviation(g.generate(sample), expected);
        if (g.family_order) {
          ParameterMap full;
          for (const auto& name : family_parameter_names(*g.family_order)) full[name] = 0.0;
          for (const auto& [k, v] : sample) full[k] = v;
          const auto direct = discretize(
              build_symplectic_family(SymplecticFamilySpec::from_params(*g.family_order, full)),
              make_rule(g.rule));
          rc.deviation = std::max(rc.deviation, max_deviation(direct, expected));
        }
        rc.pass = rc.deviation < tolerance;
      } catch (const Error& e) {
        rc.error = e.what();
        rc.deviation = std::numeric_limits<double>::infinity();
      }
      report.max_deviation = std::max(report.max_deviation, rc.deviation);
      report.cases.push_back(std::move(rc));
    }
  }
  report.pass = report.failures() == 0 && !report.cases.empty();
  return report;
}

namespace {

// JSON cannot carry infinities; report them as null.
Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

}  // namespace

Json to_json(const ConvergenceReport& report) {
  Json points = Json::array();
  for (std::size_t k = 0; k < report.h.size(); ++k)
    points.push_back({{"h", report.h[k]}, {"error", report.errors[k]}});
  return {{"t_final", report.t_final},
          {"points", points},
          {"slope", report.slope},
          {"interval_slopes", report.interval_slopes}};
}

Json to_json(const DriftReport& report) {
  Json windows = Json::array();
  for (std::size_t k = 0; k < report.window_max.size(); ++k) {
    windows.push_back({{"window", k},
                       {"t_center", report.window_center[k]},
                       {"max_rel_err", report.window_max[k]}});
  }
  return {{"h", report.h},
          {"n_steps", report.n_steps},
          {"h0", report.h0},
          {"windows", windows},
          {"slope", report.slope},
          {"first_window", report.first_window()},
          {"max_window", report.max_window()},
          {"slope_threshold", report.slope_threshold()},
          {"bounded", report.bounded()}};
}

Json to_json(const ReproductionReport& report) {
  Json cases = Json::array();
  for (const auto& c : report.cases) {
    Json sample = Json::object();
    for (const auto& [k, v] : c.sample) sample[k] = v;
    Json entry = {{"name", c.name},
                  {"sample", sample},
                  {"deviation", number_or_null(c.deviation)},
                  {"pass", c.pass}};
    if (!c.error.empty()) entry["error"] = c.error;
    cases.push_back(entry);
  }
  return {{"tolerance", report.tolerance},
          {"max_deviation", number_or_null(report.max_deviation)},
          {"cases", cases},
          {"failures", report.failures()},
          {"pass", report.pass}};
}

std::string to_csv(const ConvergenceReport& report) {
  std::string out = "h,error\n";
  for (std::size_t k = 0; k < report.h.size(); ++k)
    out += format_double(report.h[k]) + "," + format_double(report.errors[k]) + "\n";
  return out;
}

std::string to_csv(const DriftReport& report) {
  std::string out = "window,t_center,max_rel_err\n";
  for (std::size_t k = 0; k < report.window_max.size(); ++k) {
    out += std::to_string(k) + "," + format_double(report.window_center[k]) + "," +
           format_double(report.window_max[k]) + "\n";
  }
  return out;
}

}  // namespace csrkn
