#pragma once

// Benchmark problems with potentials, force Jacobians and reference
// solutions.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "csrkn/integrator.hpp"

namespace csrkn {

using State = StepState<double>;
using IVP = SecondOrderIVP<double>;

struct BenchmarkProblem {
  std::string name;
  IVP ivp;
  /// Closed-form flow from any initial state (linear problems).
  std::function<State(const State& initial, double t)> exact_flow;
  /// Closed-form solution valid only for ivp.initial.
  std::function<State(double t)> exact;
  /// Characteristic period; 0 when there is none.
  double period = 0.0;

  bool has_exact() const { return exact_flow || exact; }
};

/// q'' = -q, V = q^2/2.
BenchmarkProblem harmonic_oscillator(double q0 = 1.0, double p0 = 0.0);

/// q'' = -sin q, V = -cos q. The period follows from the complete elliptic
/// integral of the energy's amplitude (0 for rotating orbits).
BenchmarkProblem pendulum(double q0 = 1.0, double p0 = 0.0);

/// V = -1/|q| in the plane, starting at pericenter:
/// q = (1 - e, 0), p = (0, sqrt((1 + e)/(1 - e))), H = -1/2, period 2 pi.
/// The force throws NumericalFailure for |q| < 1e-12.
BenchmarkProblem kepler(double eccentricity = 0.6);

/// V = (x^2 + y^2)/2 + x^2 y - y^3/3.
BenchmarkProblem henon_heiles();

/// V = |q|^2/2 with M = diag(2, 1/2); frequencies 1/sqrt2 and sqrt2.
BenchmarkProblem mass_oscillator();

/// oscillator, pendulum, kepler (e = 0.6), henon-heiles, mass-oscillator.
std::vector<BenchmarkProblem> catalog();

struct ProblemOptions {
  double eccentricity = 0.6;
  std::optional<std::vector<double>> q0;
  std::optional<std::vector<double>> p0;
};

/// Looks a problem up by its catalog name; unknown names and initial data
/// of the wrong dimension throw ValidationError.
BenchmarkProblem make_problem(const std::string& name, const ProblemOptions& options = {});

/// The same problem started from another state. A closed form tied to the
/// old initial data is dropped.
BenchmarkProblem with_initial(BenchmarkProblem problem, const State& initial);

struct OracleOptions {
  /// Successive halvings must agree within tolerance * |x|_inf in the
  /// max-norm over (q, p).
  double tolerance = 1e-12;
  /// Initial step size bound.
  double initial_step = 0.05;
  int max_halvings = 16;
};

/// Exact solution where available; otherwise the order-5 Gauss-3 scheme
/// with the step halved until two successive results agree. Throws
/// OracleFailure when they never do.
State reference_state(const BenchmarkProblem& problem, double t, const OracleOptions& options = {});

/// The order-5 family at alpha = beta = 0 on 3-point Gauss.
RknTableau<double> oracle_tableau();

}  // namespace csrkn
