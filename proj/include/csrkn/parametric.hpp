#pragma once

// Tableaux whose entries are affine in named family parameters, and the
// linear solve that imposes diagonally implicit or explicit structure on
// them.

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

#include "csrkn/tableau.hpp"

namespace csrkn {

/// constant + sum_k coeffs(k) theta_k, over a parameter list held by the
/// owning tableau.
struct AffineForm {
  double constant = 0.0;
  Eigen::VectorXd coeffs;

  double operator()(const Eigen::VectorXd& theta) const {
    return constant + (coeffs.size() ? coeffs.dot(theta) : 0.0);
  }
  bool is_constant(double tol = 0.0) const {
    return coeffs.size() == 0 || coeffs.cwiseAbs().maxCoeff() <= tol;
  }
};

struct ParametricTableau {
  std::vector<std::string> parameters;
  Eigen::VectorXd c;
  std::vector<AffineForm> a_bar;  // row-major r x r
  std::vector<AffineForm> b_bar;
  std::vector<AffineForm> b;

  int stages() const { return static_cast<int>(c.size()); }
  const AffineForm& a(int i, int j) const {
    return a_bar[static_cast<std::size_t>(i * stages() + j)];
  }

  /// Values in parameter order. Missing names throw UnsupportedFamilyError.
  Eigen::VectorXd parameter_vector(const ParameterMap& values) const;
  RknTableau<double> evaluate(const Eigen::VectorXd& theta) const;
  RknTableau<double> evaluate(const ParameterMap& values) const {
    return evaluate(parameter_vector(values));
  }
  /// Throws ValidationError on inconsistent sizes.
  void validate() const;
};

/// A parameterized csRKN family: parameter values -> coefficients.
using FamilyFunction = std::function<CsRknCoefficients(const ParameterMap&)>;

/// Discretizes a family with `symbolic` parameters kept as unknowns and the
/// remaining ones taken from `fixed`. Affinity is checked by probing; a
/// non-affine family throws UnsupportedFamilyError.
ParametricTableau discretize_parametric(const FamilyFunction& family,
                                        const std::vector<std::string>& symbolic,
                                        const ParameterMap& fixed,
                                        const QuadratureRule<double>& rule);

/// The symplectic family of the given order with all of its parameters
/// symbolic unless listed in `fixed`.
ParametricTableau discretize_parametric(int order, const QuadratureRule<double>& rule,
                                        const ParameterMap& fixed = {});

struct SolveOptions {
  /// Parameters tried first as pivots, in order; a preferred column is
  /// used when its coefficient is at least 1e-3 of the row's largest.
  /// Otherwise pivoting is by largest magnitude.
  std::vector<std::string> pivot_preference;
  double rank_tolerance = 1e-10;
};

struct StructureSolution {
  enum class Status { Unique, Family, Infeasible };

  Status status = Status::Infeasible;
  std::vector<std::string> parameters;
  std::vector<std::string> free_parameters;
  /// One form per entry of `parameters`, affine in `free_parameters`.
  std::vector<AffineForm> values;
  /// The input tableau after substitution, over `free_parameters`.
  ParametricTableau tableau;
  /// For infeasible systems: the first equation inconsistent with the ones
  /// before it, e.g. "a_bar(1,1) = 0", and its reduced residual.
  std::string violated_equation;
  double violation = 0.0;
  std::string message;

  bool feasible() const { return status != Status::Infeasible; }
  /// Value of a parameter with every free parameter set to zero.
  double value(const std::string& name) const;
};

std::string to_string(StructureSolution::Status s);

/// Collects a_bar_ij = 0 for j > i (DiagonallyImplicit) or j >= i
/// (Explicit), row-major, and solves the affine system by elimination with
/// rank analysis. The substituted tableau is re-classified before a
/// feasible result is returned.
StructureSolution solve_structure(const ParametricTableau& pt, StructureClass target,
                                  const SolveOptions& options = {});

}  // namespace csrkn
