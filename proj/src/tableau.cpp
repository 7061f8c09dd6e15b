#include "csrkn/tableau.hpp"

#include <cmath>

namespace csrkn {

std::string to_string(StructureClass s) {
  switch (s) {
    case StructureClass::Explicit: return "explicit";
    case StructureClass::DiagonallyImplicit: return "diagonally-implicit";
    case StructureClass::FullyImplicit: return "fully-implicit";
  }
  return "unknown";
}

RknTableau<double> discretize(const CsRknCoefficients& cs,
                              const QuadratureRule<double>& rule) {
  const int r = rule.size();
  RknTableau<double> t;
  t.c.resize(r);
  t.a_bar.resize(r, r);
  t.b_bar.resize(r);
  t.b.resize(r);
  for (int i = 0; i < r; ++i) {
    const double ci = rule.nodes(i);
    const double bi = rule.weights(i);
    t.c(i) = cs.c(ci);
    t.b_bar(i) = bi * cs.b_bar(ci);
    t.b(i) = bi * cs.b_hat(ci);
    for (int j = 0; j < r; ++j) t.a_bar(i, j) = rule.weights(j) * cs.a_bar(ci, rule.nodes(j));
  }
  return t;
}

DiscreteSymplecticReport check_symplectic_discrete(const RknTableau<double>& t,
                                                   double tol) {
  t.validate();
  DiscreteSymplecticReport report;
  const int r = t.stages();
  int worst_node = -1, worst_i = -1, worst_j = -1;
  for (int i = 0; i < r; ++i) {
    const double res = std::abs(t.b_bar(i) - t.b(i) * (1.0 - t.c(i)));
    if (res > report.node_residual) {
      report.node_residual = res;
      worst_node = i;
    }
    for (int j = 0; j < r; ++j) {
      const double pair = std::abs(t.b(i) * (t.b_bar(j) - t.a_bar(i, j)) -
                                   t.b(j) * (t.b_bar(i) - t.a_bar(j, i)));
      if (pair > report.pair_residual) {
        report.pair_residual = pair;
        worst_i = i;
        worst_j = j;
      }
    }
  }
  report.pass = report.max_residual() <= tol;
  if (!report.pass) {
    if (report.node_residual >= report.pair_residual) {
      const auto i = std::to_string(worst_node + 1);
      report.violated = "b_bar_" + i + " = b_" + i + " (1 - c_" + i + ")";
    } else {
      const auto i = std::to_string(worst_i + 1), j = std::to_string(worst_j + 1);
      report.violated = "b_" + i + " (b_bar_" + j + " - a_bar_" + i + j + ") = b_" + j +
                        " (b_bar_" + i + " - a_bar_" + j + i + ")";
    }
  }
  return report;
}

std::array<double, 13> order_condition_sums(const RknTableau<double>& t) {
  t.validate();
  const Eigen::VectorXd& b = t.b;
  const Eigen::ArrayXd c = t.c.array();
  const Eigen::MatrixXd& a = t.a_bar;
  const Eigen::VectorXd row = a.rowwise().sum();
  const Eigen::VectorXd ac = a * t.c;
  const Eigen::VectorXd ac2 = a * c.square().matrix();
  const Eigen::ArrayXd ba = b.array();

  std::array<double, 13> v{};
  v[0] = b.sum();
  v[1] = (ba * c).sum();
  v[2] = (ba * c.square()).sum();
  v[3] = b.dot(row);
  v[4] = (ba * c.cube()).sum();
  v[5] = (ba * c * row.array()).sum();
  v[6] = b.dot(ac);
  v[7] = (ba * c.square().square()).sum();
  v[8] = (ba * c.square() * row.array()).sum();
  v[9] = (ba * row.array().square()).sum();
  v[10] = (ba * c * ac.array()).sum();
  v[11] = b.dot(ac2);
  v[12] = b.dot(a * row);
  return v;
}

DiscreteOrderReport check_order_discrete(const RknTableau<double>& t) {
  t.validate();
  double node = 0.0;
  for (int i = 0; i < t.stages(); ++i)
    node = std::max(node, std::abs(t.b_bar(i) - t.b(i) * (1.0 - t.c(i))));
  if (node > 1e-10) throw AssumptionViolation("b_bar_i = b_i (1 - c_i)", node);

  DiscreteOrderReport report;
  report.values = order_condition_sums(t);
  for (std::size_t k = 0; k < 13; ++k)
    report.residuals[k] = std::abs(report.values[k] - kOrderConditionTargets[k]);
  report.order = order_from_residuals(report.residuals);
  return report;
}

}  // namespace csrkn
