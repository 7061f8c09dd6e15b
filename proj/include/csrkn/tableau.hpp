#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>

#include "csrkn/cstableau.hpp"
#include "csrkn/quadrature.hpp"

namespace csrkn {

/// Classical r-stage RKN tableau (c, a_bar, b_bar, b):
///
///   Q_i     = q + h c_i p + h^2 sum_j a_bar_ij f(Q_j)
///   q_{n+1} = q + h p + h^2 sum_i b_bar_i f(Q_i)
///   p_{n+1} = p + h sum_i b_i f(Q_i)
template <typename Scalar = double>
struct RknTableau {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Vector c;
  Matrix a_bar;
  Vector b_bar;
  Vector b;

  int stages() const { return static_cast<int>(c.size()); }

  /// Throws ValidationError when the dimensions disagree.
  void validate() const {
    const auto r = c.size();
    if (r == 0) throw ValidationError("tableau has no stages");
    if (a_bar.rows() != r || a_bar.cols() != r) {
      throw ValidationError("a_bar is " + std::to_string(a_bar.rows()) + "x" +
                            std::to_string(a_bar.cols()) + " but r = " +
                            std::to_string(r));
    }
    if (b_bar.size() != r) throw ValidationError("b_bar length differs from r");
    if (b.size() != r) throw ValidationError("b length differs from r");
  }

  template <typename Other>
  RknTableau<Other> cast() const {
    return RknTableau<Other>{c.template cast<Other>(), a_bar.template cast<Other>(),
                             b_bar.template cast<Other>(), b.template cast<Other>()};
  }
};

/// Optional provenance attached to serialized tableaux.
struct TableauMeta {
  std::optional<int> source_family_order;
  std::optional<ParameterMap> params;
  std::optional<std::string> quadrature;
};

enum class StructureClass { Explicit, DiagonallyImplicit, FullyImplicit };

std::string to_string(StructureClass s);

/// Explicit when |a_bar_ij| <= tol for all j >= i, diagonally implicit when
/// only for j > i, fully implicit otherwise.
template <typename Scalar>
StructureClass classify_structure(const RknTableau<Scalar>& t, double tol = 1e-13) {
  using std::abs;
  bool strictly_lower = true;
  bool lower = true;
  for (Eigen::Index i = 0; i < t.a_bar.rows(); ++i) {
    for (Eigen::Index j = i; j < t.a_bar.cols(); ++j) {
      const bool zero = abs(static_cast<double>(t.a_bar(i, j))) <= tol;
      if (!zero) {
        strictly_lower = false;
        if (j > i) lower = false;
      }
    }
  }
  if (strictly_lower) return StructureClass::Explicit;
  if (lower) return StructureClass::DiagonallyImplicit;
  return StructureClass::FullyImplicit;
}

/// a_bar_ij = b_j A(c_i, c_j), b_bar_i = b_i B_bar(c_i), b_i B_hat(c_i),
/// C(c_i).
RknTableau<double> discretize(const CsRknCoefficients& cs,
                              const QuadratureRule<double>& rule);

struct DiscreteSymplecticReport {
  bool pass = false;
  /// max_i |b_bar_i - b_i (1 - c_i)|.
  double node_residual = 0.0;
  /// max_ij |b_i (b_bar_j - a_bar_ij) - b_j (b_bar_i - a_bar_ji)|.
  double pair_residual = 0.0;
  /// Human-readable name of the worst violated condition, empty on pass.
  std::string violated;

  double max_residual() const { return std::max(node_residual, pair_residual); }
};

DiscreteSymplecticReport check_symplectic_discrete(const RknTableau<double>& t,
                                                   double tol = 1e-13);

/// Sums of the reduced order conditions 1) .. 13), no hypothesis check.
std::array<double, 13> order_condition_sums(const RknTableau<double>& t);

struct DiscreteOrderReport {
  int order = 0;
  std::array<double, 13> values{};
  std::array<double, 13> residuals{};
};

/// Requires b_bar_i = b_i (1 - c_i) within 1e-10 (AssumptionViolation
/// otherwise); returns the highest order k <= 5 whose conditions hold within
/// 1e-11.
DiscreteOrderReport check_order_discrete(const RknTableau<double>& t);

}  // namespace csrkn
