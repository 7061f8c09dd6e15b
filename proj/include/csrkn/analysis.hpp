#pragma once

// Convergence, long-time energy and table-reproduction experiments.

#include <string>
#include <vector>

#include "csrkn/golden.hpp"
#include "csrkn/problems.hpp"
#include "csrkn/serialize.hpp"

namespace csrkn {

/// Least-squares slope of log(errors) against log(h).
double fit_loglog_slope(const std::vector<double>& h, const std::vector<double>& errors);

/// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

struct ConvergenceReport {
  std::vector<double> h;       // strictly decreasing
  std::vector<double> errors;  // max-norm over (q, p) at t_final
  double t_final = 0.0;
  double slope = 0.0;
  /// Slope between consecutive step sizes.
  std::vector<double> interval_slopes;
};

/// Global errors against reference_state(problem, t_final). Requires at
/// least four strictly decreasing step sizes that divide t_final.
/// Integration failures are rethrown naming the failing h.
ConvergenceReport convergence_study(const RknTableau<double>& tableau,
                                    const BenchmarkProblem& problem,
                                    const std::vector<double>& h_list, double t_final,
                                    const StepperOptions& options = {});

struct DriftReport {
  double h = 0.0;
  long n_steps = 0;
  int window_count = 0;
  double h0 = 0.0;
  /// Steps 1..n split into window_count contiguous windows of equal length.
  std::vector<double> window_center;
  /// max |H - H0| / max(1, |H0|) per window.
  std::vector<double> window_max;
  double slope = 0.0;

  double total_time() const { return h * static_cast<double>(n_steps); }
  double first_window() const { return window_max.empty() ? 0.0 : window_max.front(); }
  double max_window() const;
  /// first-window error / total time.
  double slope_threshold() const { return first_window() / total_time(); }
  /// No window above 5x the first and |slope| below slope_threshold().
  bool bounded() const;
};

/// Streams the trajectory, keeping only the window maxima.
DriftReport drift_study(const RknTableau<double>& tableau, const BenchmarkProblem& problem,
                        double h, long n_steps, int window_count,
                        const StepperOptions& options = {});

struct ReproductionCase {
  std::string name;
  ParameterMap sample;
  /// Max entry deviation of both generation routes from the golden tableau.
  double deviation = 0.0;
  bool pass = false;
  std::string error;
};

struct ReproductionReport {
  double tolerance = 1e-13;
  std::vector<ReproductionCase> cases;
  double max_deviation = 0.0;
  bool pass = false;

  std::size_t failures() const;
};

/// Regenerates every golden tableau at parameter samples {0, 1, -1}.
/// Family tableaux are generated both symbolically and by direct
/// discretization.
ReproductionReport table_reproduction_suite(double tolerance = 1e-13);

/// Max |x - y| over c, a_bar, b_bar and b; infinity on a size mismatch.
double max_deviation(const RknTableau<double>& x, const RknTableau<double>& y);

Json to_json(const ConvergenceReport& report);
Json to_json(const DriftReport& report);
Json to_json(const ReproductionReport& report);

/// h,error
std::string to_csv(const ConvergenceReport& report);
/// window,t_center,max_rel_err
std::string to_csv(const DriftReport& report);

}  // namespace csrkn
