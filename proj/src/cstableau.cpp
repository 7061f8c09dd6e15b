#include "csrkn/cstableau.hpp"

#include <algorithm>
#include <cmath>

#include "csrkn/quadrature.hpp"

namespace csrkn {

namespace {

constexpr int kGridPoints = 64;

double grid_point(int k) { return static_cast<double>(k) / (kGridPoints - 1); }

Series1D tau_series(int max_degree) {
  return Series1D({0.5, legendre_xi(1)}, max_degree);
}

Series1D one_minus_tau_series(int max_degree) {
  return Series1D({0.5, -legendre_xi(1)}, max_degree);
}

}  // namespace

CsRknCoefficients CsRknCoefficients::canonical(Series2D a_bar) {
  const int d = a_bar.max_degree();
  return CsRknCoefficients{std::move(a_bar), one_minus_tau_series(d),
                           Series1D({1.0}, d), tau_series(d)};
}

bool CsRknCoefficients::is_canonical(double tol) const {
  for (int k = 0; k < kGridPoints; ++k) {
    const double x = grid_point(k);
    if (std::abs(b_hat(x) - 1.0) > tol) return false;
    if (std::abs(c(x) - x) > tol) return false;
    if (std::abs(b_bar(x) - (1.0 - x)) > tol) return false;
  }
  return true;
}

std::vector<std::string> family_parameter_names(int order) {
  if (order == 2) return {"a", "b", "c"};
  if (order >= 3 && order <= 5) return {"a", "b"};
  throw UnsupportedOrderError("no symplectic family of order " +
                              std::to_string(order));
}

SymplecticFamilySpec SymplecticFamilySpec::from_params(int order,
                                                       const ParameterMap& params) {
  const auto names = family_parameter_names(order);
  SymplecticFamilySpec spec;
  spec.order = order;
  for (const auto& [name, value] : params) {
    if (std::find(names.begin(), names.end(), name) == names.end()) {
      throw UnsupportedFamilyError("order-" + std::to_string(order) +
                                   " family has no parameter '" + name + "'");
    }
    if (name == "a") spec.alpha = value;
    if (name == "b") spec.beta = value;
    if (name == "c") spec.gamma = value;
  }
  return spec;
}

ParameterMap SymplecticFamilySpec::params() const {
  ParameterMap out{{"a", alpha}, {"b", beta}};
  if (order == 2) out["c"] = gamma;
  return out;
}

CsRknCoefficients build_symplectic_family(const SymplecticFamilySpec& spec) {
  return CsRknCoefficients::canonical(
      Series2D(symplectic_family_matrix<double>(spec), spec.max_degree));
}

double ContinuousSymplecticReport::max_residual() const {
  return std::max({node_residual, relation_residual, symmetry_residual});
}

ContinuousSymplecticReport check_symplectic_continuous(const CsRknCoefficients& cs,
                                                       double tol) {
  ContinuousSymplecticReport report;
  for (int k = 0; k < kGridPoints; ++k) {
    const double t = grid_point(k);
    report.node_residual = std::max(
        report.node_residual, std::abs(cs.b_hat(t) * (1.0 - cs.c(t)) - cs.b_bar(t)));
  }

  report.coefficient_route = cs.is_canonical(1e-12);
  if (report.coefficient_route) {
    const auto& m = cs.a_bar.coeffs();
    report.relation_residual =
        std::abs(cs.a_bar.coeff(0, 1) - cs.a_bar.coeff(1, 0) + std::sqrt(3.0) / 6);
    const int n = static_cast<int>(std::max(m.rows(), m.cols()));
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (i + j <= 1) continue;
        report.symmetry_residual = std::max(
            report.symmetry_residual, std::abs(cs.a_bar.coeff(i, j) - cs.a_bar.coeff(j, i)));
      }
    }
  } else {
    for (int k = 0; k < kGridPoints; ++k) {
      const double t = grid_point(k);
      for (int l = 0; l < kGridPoints; ++l) {
        const double s = grid_point(l);
        const double lhs = cs.b_hat(t) * (cs.b_bar(s) - cs.a_bar(t, s));
        const double rhs = cs.b_hat(s) * (cs.b_bar(t) - cs.a_bar(s, t));
        report.symmetry_residual = std::max(report.symmetry_residual, std::abs(lhs - rhs));
      }
    }
  }
  report.pass = report.max_residual() <= tol;
  return report;
}

int order_from_residuals(const std::array<double, 13>& residuals, double tol) {
  static constexpr std::array<int, 5> kConditionCount = {1, 2, 4, 7, 13};
  int order = 0;
  for (int k = 0; k < 5; ++k) {
    const auto end = residuals.begin() + kConditionCount[static_cast<std::size_t>(k)];
    if (std::all_of(residuals.begin(), end, [tol](double r) { return r <= tol; })) {
      order = k + 1;
    } else {
      break;
    }
  }
  return order;
}

namespace {

void require_canonical(const CsRknCoefficients& cs) {
  constexpr double tol = 1e-10;
  double node = 0, hat = 0, c = 0;
  for (int k = 0; k < kGridPoints; ++k) {
    const double x = grid_point(k);
    node = std::max(node, std::abs(cs.b_bar(x) - cs.b_hat(x) * (1.0 - cs.c(x))));
    hat = std::max(hat, std::abs(cs.b_hat(x) - 1.0));
    c = std::max(c, std::abs(cs.c(x) - x));
  }
  if (node > tol) throw AssumptionViolation("B_bar = B_hat (1 - C)", node);
  if (hat > tol) throw AssumptionViolation("B_hat = 1", hat);
  if (c > tol) throw AssumptionViolation("C = tau", c);
}

std::array<double, 13> analytic_conditions(const CsRknCoefficients& cs) {
  const int n = std::max({static_cast<int>(cs.a_bar.coeffs().rows()),
                          static_cast<int>(cs.a_bar.coeffs().cols()), 3});
  const int degree = std::max(cs.a_bar.max_degree(), 4);
  const Eigen::MatrixXd a = cs.a_bar.padded(n);
  const Series1D one = monomial_to_legendre(0, degree);
  const Series1D t1 = monomial_to_legendre(1, degree);
  const Series1D t2 = monomial_to_legendre(2, degree);
  const Eigen::VectorXd m0 = one.padded(n), m1 = t1.padded(n), m2 = t2.padded(n);
  const Eigen::VectorXd row_integral = a * m0;              // int A ds, in tau
  const Eigen::VectorXd col_integral = a.transpose() * m0;  // int A dt, in sigma

  std::array<double, 13> v{};
  v[0] = inner_product(cs.b_hat, one);
  v[1] = inner_product(cs.b_hat, cs.c);
  v[2] = inner_product(t1, t1);
  v[3] = m0.dot(row_integral);
  v[4] = inner_product(t1, t2);
  v[5] = m1.dot(row_integral);
  v[6] = m0.dot(a * m1);
  v[7] = inner_product(t2, t2);
  v[8] = m2.dot(row_integral);
  v[9] = row_integral.squaredNorm();
  v[10] = m1.dot(a * m1);
  v[11] = m0.dot(a * m2);
  v[12] = col_integral.dot(row_integral);
  return v;
}

std::array<double, 13> quadrature_conditions(const CsRknCoefficients& cs) {
  const int degree = std::max({cs.a_bar.max_degree(), cs.b_hat.max_degree(),
                               cs.c.max_degree()});
  const auto rule = detail::gauss_rule<double>(degree + 2);
  const int n = rule.size();
  const Eigen::VectorXd& w = rule.weights;
  Eigen::VectorXd bh(n), c(n);
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) {
    bh(i) = cs.b_hat(rule.nodes(i));
    c(i) = cs.c(rule.nodes(i));
    for (int j = 0; j < n; ++j) a(i, j) = cs.a_bar(rule.nodes(i), rule.nodes(j));
  }

  std::array<double, 13> v{};
  for (int i = 0; i < n; ++i) {
    const double wb = w(i) * bh(i);
    v[0] += wb;
    v[1] += wb * c(i);
    v[2] += wb * c(i) * c(i);
    v[4] += wb * c(i) * c(i) * c(i);
    v[7] += wb * c(i) * c(i) * c(i) * c(i);
    for (int j = 0; j < n; ++j) {
      const double wba = wb * w(j) * a(i, j);
      v[3] += wba;
      v[5] += wba * c(i);
      v[6] += wba * c(j);
      v[8] += wba * c(i) * c(i);
      v[10] += wba * c(i) * c(j);
      v[11] += wba * c(j) * c(j);
      for (int k = 0; k < n; ++k) {
        v[9] += wba * w(k) * a(i, k);
        v[12] += wba * w(k) * a(j, k);
      }
    }
  }
  return v;
}

}  // namespace

ContinuousOrderReport check_order_continuous(const CsRknCoefficients& cs) {
  require_canonical(cs);
  ContinuousOrderReport report;
  report.analytic = analytic_conditions(cs);
  report.oracle = quadrature_conditions(cs);
  for (std::size_t k = 0; k < 13; ++k) {
    report.residuals[k] = std::abs(report.analytic[k] - kOrderConditionTargets[k]);
    report.route_gap =
        std::max(report.route_gap, std::abs(report.analytic[k] - report.oracle[k]));
  }
  report.order = order_from_residuals(report.residuals);
  return report;
}

}  // namespace csrkn
