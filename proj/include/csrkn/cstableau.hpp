#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "csrkn/legendre.hpp"

namespace csrkn {

using Series1D = LegendreSeries1D<double>;
using Series2D = LegendreSeries2D<double>;
using ParameterMap = std::map<std::string, double>;

/// Continuous-stage RKN coefficients (A_bar, B_bar, B_hat, C).
struct CsRknCoefficients {
  Series2D a_bar;
  Series1D b_bar;
  Series1D b_hat;
  Series1D c;

  /// B_hat = 1, C = tau, B_bar = 1 - tau around the given A_bar.
  static CsRknCoefficients canonical(Series2D a_bar);

  /// Whether B_hat = 1, C = tau and B_bar = 1 - tau hold on a 64-point grid.
  bool is_canonical(double tol = 1e-10) const;
};

/// The two-parameter symplectic families of orders 2 to 5.
///
///   order 2: A = alpha + (beta - sqrt3/6) P1(s) + beta P1(t)
///                + gamma P1(t) P1(s)            (gamma = 0 by default)
///   order 3: A = 1/6 + (alpha - sqrt3/6) P1(s) + alpha P1(t)
///                + beta P1(t) P1(s)
///   order 4: A = 1/6 + (t - s)/2 + alpha P1(t) P1(s)
///                + beta (P2(t) + P2(s))
///   order 5: fixed low-degree block plus
///                alpha (P1(t) P2(s) + P2(t) P1(s)) + beta P2(t) P2(s)
///
/// `extra` sets further symmetric coefficients alpha_(i,j) = alpha_(j,i)
/// with i + j > 2, which keep both symplecticity and the family order.
struct SymplecticFamilySpec {
  int order = 2;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  std::map<std::pair<int, int>, double> extra;
  int max_degree = kDefaultMaxDegree;

  /// Reads parameters named a, b (and c for order 2); unknown names throw
  /// UnsupportedFamilyError.
  static SymplecticFamilySpec from_params(int order, const ParameterMap& params);
  ParameterMap params() const;
};

/// Parameter names of a family in declaration order: {a, b, c} for
/// order 2, {a, b} otherwise.
std::vector<std::string> family_parameter_names(int order);

/// Coefficients alpha_(i,j) of A_bar = sum alpha_(i,j) P_i(t) P_j(s) for a
/// family spec. Throws on unsupported orders, parameters or degrees.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> symplectic_family_matrix(
    const SymplecticFamilySpec& spec) {
  using std::sqrt;
  if (spec.order < 2 || spec.order > 5) {
    throw UnsupportedOrderError("no symplectic family of order " +
                                std::to_string(spec.order));
  }
  if (spec.order != 2 && spec.gamma != 0.0) {
    throw UnsupportedFamilyError("parameter 'c' exists only in the order-2 family");
  }
  const Scalar s3 = sqrt(Scalar(3));
  const Scalar s5 = sqrt(Scalar(5));

  int size = spec.order >= 4 ? 3 : 2;
  for (const auto& [ij, value] : spec.extra) {
    const auto [i, j] = ij;
    if (i < 0 || j < 0 || i + j <= 2) {
      throw UnsupportedFamilyError("extra coefficient (" + std::to_string(i) +
                                   "," + std::to_string(j) +
                                   ") must have i + j > 2");
    }
    if (spec.order == 5 && (i == 0 || j == 0 || (i <= 2 && j <= 2))) {
      throw UnsupportedFamilyError(
          "order-5 family fixes alpha_(0,j), alpha_(j,0) and the degree-2 block");
    }
    const auto mirrored = spec.extra.find({j, i});
    if (mirrored != spec.extra.end() && mirrored->second != value) {
      throw UnsupportedFamilyError("extra coefficients must be symmetric");
    }
    size = std::max(size, std::max(i, j) + 1);
  }
  if (size - 1 > spec.max_degree) {
    throw DegreeLimitError("family needs degree " + std::to_string(size - 1) +
                           " > max degree " + std::to_string(spec.max_degree));
  }

  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Matrix a = Matrix::Zero(size, size);
  switch (spec.order) {
    case 2:
      a(0, 0) = Scalar(spec.alpha);
      a(0, 1) = Scalar(spec.beta) - s3 / 6;
      a(1, 0) = Scalar(spec.beta);
      a(1, 1) = Scalar(spec.gamma);
      break;
    case 3:
      a(0, 0) = Scalar(1) / 6;
      a(0, 1) = Scalar(spec.alpha) - s3 / 6;
      a(1, 0) = Scalar(spec.alpha);
      a(1, 1) = Scalar(spec.beta);
      break;
    case 4:
      a(0, 0) = Scalar(1) / 6;
      a(1, 0) = s3 / 12;
      a(0, 1) = -s3 / 12;
      a(1, 1) = Scalar(spec.alpha);
      a(2, 0) = Scalar(spec.beta);
      a(0, 2) = Scalar(spec.beta);
      break;
    case 5:
      a(0, 0) = Scalar(1) / 6;
      a(1, 0) = s3 / 12;
      a(0, 1) = -s3 / 12;
      a(1, 1) = Scalar(-1) / 10;
      a(2, 0) = s5 / 60;
      a(0, 2) = s5 / 60;
      a(1, 2) = Scalar(spec.alpha);
      a(2, 1) = Scalar(spec.alpha);
      a(2, 2) = Scalar(spec.beta);
      break;
  }
  for (const auto& [ij, value] : spec.extra) {
    a(ij.first, ij.second) = Scalar(value);
    a(ij.second, ij.first) = Scalar(value);
  }
  return a;
}

CsRknCoefficients build_symplectic_family(const SymplecticFamilySpec& spec);

struct ContinuousSymplecticReport {
  bool pass = false;
  /// max |B_hat (1 - C) - B_bar| over the grid.
  double node_residual = 0.0;
  /// |alpha_(0,1) - alpha_(1,0) + sqrt3/6| (coefficient route only).
  double relation_residual = 0.0;
  /// max |alpha_(i,j) - alpha_(j,i)| over i+j > 1, or the pointwise
  /// residual of B_hat_t (B_bar_s - A_ts) = B_hat_s (B_bar_t - A_st) when
  /// the coefficients are not canonical.
  double symmetry_residual = 0.0;
  bool coefficient_route = true;

  double max_residual() const;
};

ContinuousSymplecticReport check_symplectic_continuous(
    const CsRknCoefficients& cs, double tol = 1e-13);

/// Right-hand sides of the reduced order conditions 1) .. 13).
inline constexpr std::array<double, 13> kOrderConditionTargets = {
    1.0,       1.0 / 2,  1.0 / 3,  1.0 / 6,  1.0 / 4,  1.0 / 8,   1.0 / 24,
    1.0 / 5,   1.0 / 10, 1.0 / 20, 1.0 / 30, 1.0 / 60, 1.0 / 120};

inline constexpr double kOrderTolerance = 1e-11;

/// Largest k in 1..5 whose condition set ({1}, {1,2}, {1..4}, {1..7},
/// {1..13}) holds within `tol`; 0 when condition 1) fails.
int order_from_residuals(const std::array<double, 13>& residuals,
                         double tol = kOrderTolerance);

struct ContinuousOrderReport {
  int order = 0;
  /// Integrals by Legendre coefficient algebra.
  std::array<double, 13> analytic{};
  /// Same integrals by tensor Gauss quadrature of the pointwise functions.
  std::array<double, 13> oracle{};
  /// |analytic - target|.
  std::array<double, 13> residuals{};
  /// max |analytic - oracle|.
  double route_gap = 0.0;
};

/// Evaluates the continuous order conditions. Requires the canonical
/// hypothesis (B_hat = 1, C = tau, B_bar = B_hat (1 - C)); throws
/// AssumptionViolation naming the failing hypothesis otherwise.
ContinuousOrderReport check_order_continuous(const CsRknCoefficients& cs);

}  // namespace csrkn
