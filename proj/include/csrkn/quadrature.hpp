#pragma once

// Interpolatory quadrature rules on [0,1]: Gauss, Radau (left/right) and
// Lobatto. Nodes come from Newton iteration on the defining Legendre
// combinations; weights from the classical closed-form weight formulas.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "csrkn/errors.hpp"

namespace csrkn {

enum class QuadratureFamily { Gauss, RadauLeft, RadauRight, Lobatto };

inline constexpr int kMaxRuleSize = 6;

inline std::string to_string(QuadratureFamily f) {
  switch (f) {
    case QuadratureFamily::Gauss: return "gauss";
    case QuadratureFamily::RadauLeft: return "radau-left";
    case QuadratureFamily::RadauRight: return "radau-right";
    case QuadratureFamily::Lobatto: return "lobatto";
  }
  return "unknown";
}

/// Largest polynomial degree an r-node rule of the family integrates
/// exactly.
inline int theoretical_exactness(QuadratureFamily f, int r) {
  switch (f) {
    case QuadratureFamily::Gauss: return 2 * r - 1;
    case QuadratureFamily::RadauLeft:
    case QuadratureFamily::RadauRight: return 2 * r - 2;
    case QuadratureFamily::Lobatto: return 2 * r - 3;
  }
  return -1;
}

template <typename Scalar = double>
struct QuadratureRule {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  QuadratureFamily family = QuadratureFamily::Gauss;
  Vector nodes;
  Vector weights;
  int exactness_degree = -1;

  int size() const { return static_cast<int>(nodes.size()); }
  /// Order p of the rule, one more than its exactness degree.
  int order() const { return exactness_degree + 1; }
  /// "family:r", the form accepted by parse_rule_name.
  std::string name() const { return to_string(family) + ":" + std::to_string(size()); }
};

/// Parses "gauss:3", "radau-left:2", "radau-right:2", "lobatto:4".
std::pair<QuadratureFamily, int> parse_rule_name(const std::string& name);

namespace detail {

/// L_n(y) and L_n'(y) for the classical Legendre polynomial on [-1,1].
template <typename Scalar>
std::pair<Scalar, Scalar> legendre_with_derivative(int n, Scalar y) {
  if (n == 0) return {Scalar(1), Scalar(0)};
  Scalar l_prev(1), l_cur = y;
  Scalar d_prev(0), d_cur(1);
  for (int k = 1; k < n; ++k) {
    const Scalar l_next =
        (Scalar(2 * k + 1) * y * l_cur - Scalar(k) * l_prev) / Scalar(k + 1);
    // L'_{k+1} = L'_{k-1} + (2k+1) L_k
    const Scalar d_next = d_prev + Scalar(2 * k + 1) * l_cur;
    l_prev = l_cur;
    l_cur = l_next;
    d_prev = d_cur;
    d_cur = d_next;
  }
  return {l_cur, d_cur};
}

/// Finds the roots of q(y) on (-1,1) other than `fixed` by Newton's method
/// with deflation of the fixed and already converged roots.
template <typename Scalar, typename Poly>
std::vector<Scalar> newton_roots(const Poly& q, int count,
                                 std::vector<Scalar> fixed,
                                 const std::vector<Scalar>& guesses) {
  using std::abs;
  constexpr int kMaxIterations = 100;
  const Scalar tol = Scalar(8) * std::numeric_limits<Scalar>::epsilon();
  std::vector<Scalar> found;
  for (int k = 0; k < count; ++k) {
    Scalar y = guesses[static_cast<std::size_t>(k)];
    bool converged = false;
    for (int it = 0; it < kMaxIterations; ++it) {
      const auto [v, dv] = q(y);
      Scalar deflation(0);
      for (Scalar z : fixed) deflation += Scalar(1) / (y - z);
      for (Scalar z : found) deflation += Scalar(1) / (y - z);
      const Scalar delta = v / (dv - v * deflation);
      y -= delta;
      if (abs(delta) <= tol) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      throw NumericalFailure("quadrature node Newton iteration did not "
                             "converge after 100 iterations");
    }
    found.push_back(y);
  }
  std::sort(found.begin(), found.end());
  return found;
}

template <typename Scalar>
std::vector<Scalar> gauss_guesses(int n) {
  using std::cos;
  const Scalar pi = Scalar(3.14159265358979323846264338327950288L);
  std::vector<Scalar> g;
  for (int k = 1; k <= n; ++k)
    g.push_back(-cos(pi * (Scalar(k) - Scalar(0.25)) / (Scalar(n) + Scalar(0.5))));
  return g;
}

template <typename Scalar>
QuadratureRule<Scalar> to_unit_interval(QuadratureFamily family,
                                        const std::vector<Scalar>& y,
                                        const std::vector<Scalar>& w,
                                        int exactness) {
  QuadratureRule<Scalar> rule;
  rule.family = family;
  rule.exactness_degree = exactness;
  const auto n = static_cast<Eigen::Index>(y.size());
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    rule.nodes(i) = (y[static_cast<std::size_t>(i)] + Scalar(1)) / Scalar(2);
    rule.weights(i) = w[static_cast<std::size_t>(i)] / Scalar(2);
  }
  return rule;
}

/// n-point Gauss-Legendre rule on [0,1] without the public size cap; used
/// internally as a tensor-quadrature oracle.
template <typename Scalar = double>
QuadratureRule<Scalar> gauss_rule(int n) {
  auto q = [n](Scalar y) { return legendre_with_derivative(n, y); };
  auto y = newton_roots<Scalar>(q, n, {}, gauss_guesses<Scalar>(n));
  std::vector<Scalar> w;
  for (Scalar yi : y) {
    const Scalar d = legendre_with_derivative(n, yi).second;
    w.push_back(Scalar(2) / ((Scalar(1) - yi * yi) * d * d));
  }
  return to_unit_interval(QuadratureFamily::Gauss, y, w, 2 * n - 1);
}

template <typename Scalar>
QuadratureRule<Scalar> radau_left_rule(int r) {
  // Nodes: zeros of L_{r-1} + L_r, one of which is y = -1.
  auto q = [r](Scalar y) {
    const auto [a, da] = legendre_with_derivative(r - 1, y);
    const auto [b, db] = legendre_with_derivative(r, y);
    return std::pair<Scalar, Scalar>(a + b, da + db);
  };
  std::vector<Scalar> y{Scalar(-1)};
  const auto interior =
      newton_roots<Scalar>(q, r - 1, {Scalar(-1)}, gauss_guesses<Scalar>(r - 1));
  y.insert(y.end(), interior.begin(), interior.end());
  std::vector<Scalar> w;
  const Scalar r2 = Scalar(r) * Scalar(r);
  for (Scalar yi : y) {
    if (yi == Scalar(-1)) {
      w.push_back(Scalar(2) / r2);
    } else {
      const Scalar l = legendre_with_derivative(r - 1, yi).first;
      w.push_back((Scalar(1) - yi) / (r2 * l * l));
    }
  }
  return to_unit_interval(QuadratureFamily::RadauLeft, y, w, 2 * r - 2);
}

template <typename Scalar>
QuadratureRule<Scalar> lobatto_rule(int r) {
  using std::cos;
  // Nodes: zeros of L_{r-2} - L_r = c (1 - y^2) L'_{r-1}.
  auto q = [r](Scalar y) {
    const auto [a, da] = legendre_with_derivative(r - 2, y);
    const auto [b, db] = legendre_with_derivative(r, y);
    return std::pair<Scalar, Scalar>(a - b, da - db);
  };
  const Scalar pi = Scalar(3.14159265358979323846264338327950288L);
  std::vector<Scalar> guesses;
  for (int k = r - 2; k >= 1; --k) guesses.push_back(cos(pi * Scalar(k) / Scalar(r - 1)));
  std::vector<Scalar> y{Scalar(-1)};
  const auto interior =
      newton_roots<Scalar>(q, r - 2, {Scalar(-1), Scalar(1)}, guesses);
  y.insert(y.end(), interior.begin(), interior.end());
  y.push_back(Scalar(1));
  std::vector<Scalar> w;
  const Scalar scale = Scalar(2) / (Scalar(r) * Scalar(r - 1));
  for (Scalar yi : y) {
    if (yi == Scalar(-1) || yi == Scalar(1)) {
      w.push_back(scale);
    } else {
      const Scalar l = legendre_with_derivative(r - 1, yi).first;
      w.push_back(scale / (l * l));
    }
  }
  return to_unit_interval(QuadratureFamily::Lobatto, y, w, 2 * r - 3);
}

}  // namespace detail

/// Hardcoded closed forms of the rules used by the tabled RKN methods
/// (Gauss 1-3, Radau 2-3, Lobatto 2-4). Empty for any other rule.
std::optional<QuadratureRule<double>> closed_form_rule(QuadratureFamily family,
                                                       int r);

/// Builds the r-node rule of the family, 1 <= r <= 6 (Lobatto needs r >= 2).
/// Throws UnsupportedSizeError out of range and NumericalFailure when the
/// node iteration fails or disagrees with a known closed form.
template <typename Scalar = double>
QuadratureRule<Scalar> make_rule(QuadratureFamily family, int r) {
  using std::abs;
  if constexpr (std::is_same_v<Scalar, double>) {
    // Double rules are computed in extended precision and rounded once.
    const auto wide = make_rule<long double>(family, r);
    QuadratureRule<double> rule;
    rule.family = wide.family;
    rule.exactness_degree = wide.exactness_degree;
    rule.nodes = wide.nodes.template cast<double>();
    rule.weights = wide.weights.template cast<double>();
    return rule;
  }
  const int min_r = family == QuadratureFamily::Lobatto ? 2 : 1;
  if (r < min_r || r > kMaxRuleSize) {
    throw UnsupportedSizeError(to_string(family) + " rule with " +
                               std::to_string(r) + " nodes is not supported");
  }
  QuadratureRule<Scalar> rule;
  switch (family) {
    case QuadratureFamily::Gauss:
      rule = detail::gauss_rule<Scalar>(r);
      break;
    case QuadratureFamily::RadauLeft:
      rule = detail::radau_left_rule<Scalar>(r);
      break;
    case QuadratureFamily::RadauRight: {
      const auto left = detail::radau_left_rule<Scalar>(r);
      rule.family = QuadratureFamily::RadauRight;
      rule.exactness_degree = left.exactness_degree;
      rule.nodes = (Scalar(1) - left.nodes.reverse().array()).matrix();
      rule.weights = left.weights.reverse();
      break;
    }
    case QuadratureFamily::Lobatto:
      rule = detail::lobatto_rule<Scalar>(r);
      break;
  }
  if (const auto known = closed_form_rule(family, r)) {
    for (int i = 0; i < r; ++i) {
      const double dn = abs(static_cast<double>(rule.nodes(i)) - known->nodes(i));
      const double dw = abs(static_cast<double>(rule.weights(i)) - known->weights(i));
      if (dn > 1e-13 || dw > 1e-13) {
        throw NumericalFailure("generated " + rule.name() +
                               " rule disagrees with its closed form");
      }
    }
  }
  return rule;
}

inline QuadratureRule<double> make_rule(const std::string& name) {
  const auto [family, r] = parse_rule_name(name);
  return make_rule<double>(family, r);
}

/// Largest k <= 2r+2 with sum_i b_i c_i^m = 1/(m+1) (within 1e-12) for all
/// m <= k; -1 when even the weights do not sum to one.
template <typename Scalar>
int verify_exactness(const QuadratureRule<Scalar>& rule) {
  using std::abs;
  const int r = rule.size();
  int exact = -1;
  for (int m = 0; m <= 2 * r + 2; ++m) {
    Scalar sum(0);
    for (int i = 0; i < r; ++i) {
      Scalar p(1);
      for (int e = 0; e < m; ++e) p *= rule.nodes(i);
      sum += rule.weights(i) * p;
    }
    if (abs(static_cast<double>(sum - Scalar(1) / Scalar(m + 1))) > 1e-12) break;
    exact = m;
  }
  return exact;
}

}  // namespace csrkn
