#include "csrkn/parametric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace csrkn {

Eigen::VectorXd ParametricTableau::parameter_vector(const ParameterMap& values) const {
  Eigen::VectorXd theta(static_cast<Eigen::Index>(parameters.size()));
  for (std::size_t k = 0; k < parameters.size(); ++k) {
    const auto it = values.find(parameters[k]);
    if (it == values.end()) {
      throw UnsupportedFamilyError("no value given for parameter '" + parameters[k] + "'");
    }
    theta(static_cast<Eigen::Index>(k)) = it->second;
  }
  return theta;
}

void ParametricTableau::validate() const {
  const auto r = static_cast<std::size_t>(c.size());
  if (r == 0) throw ValidationError("tableau has no stages");
  if (a_bar.size() != r * r) throw ValidationError("a_bar does not have r*r entries");
  if (b_bar.size() != r) throw ValidationError("b_bar length differs from r");
  if (b.size() != r) throw ValidationError("b length differs from r");
  const auto n = static_cast<Eigen::Index>(parameters.size());
  auto check = [n](const std::vector<AffineForm>& forms) {
    for (const auto& f : forms)
      if (f.coeffs.size() != n) throw ValidationError("affine form has wrong parameter count");
  };
  check(a_bar);
  check(b_bar);
  check(b);
}

RknTableau<double> ParametricTableau::evaluate(const Eigen::VectorXd& theta) const {
  const int r = stages();
  RknTableau<double> t;
  t.c = c;
  t.a_bar.resize(r, r);
  t.b_bar.resize(r);
  t.b.resize(r);
  for (int i = 0; i < r; ++i) {
    t.b_bar(i) = b_bar[static_cast<std::size_t>(i)](theta);
    t.b(i) = b[static_cast<std::size_t>(i)](theta);
    for (int j = 0; j < r; ++j) t.a_bar(i, j) = a(i, j)(theta);
  }
  return t;
}

namespace {

double max_abs_diff(const RknTableau<double>& x, const RknTableau<double>& y) {
  return std::max({(x.c - y.c).cwiseAbs().maxCoeff(),
                   (x.a_bar - y.a_bar).cwiseAbs().maxCoeff(),
                   (x.b_bar - y.b_bar).cwiseAbs().maxCoeff(),
                   (x.b - y.b).cwiseAbs().maxCoeff()});
}

double max_abs(const RknTableau<double>& x) {
  return std::max({x.c.cwiseAbs().maxCoeff(), x.a_bar.cwiseAbs().maxCoeff(),
                   x.b_bar.cwiseAbs().maxCoeff(), x.b.cwiseAbs().maxCoeff()});
}

RknTableau<double> combine(const RknTableau<double>& base,
                           const std::vector<RknTableau<double>>& dirs,
                           const Eigen::VectorXd& theta) {
  RknTableau<double> out = base;
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    const double s = theta(static_cast<Eigen::Index>(k));
    out.a_bar += s * (dirs[k].a_bar - base.a_bar);
    out.b_bar += s * (dirs[k].b_bar - base.b_bar);
    out.b += s * (dirs[k].b - base.b);
  }
  return out;
}

}  // namespace

ParametricTableau discretize_parametric(const FamilyFunction& family,
                                        const std::vector<std::string>& symbolic,
                                        const ParameterMap& fixed,
                                        const QuadratureRule<double>& rule) {
  const auto n = static_cast<Eigen::Index>(symbolic.size());
  auto params_at = [&](const Eigen::VectorXd& theta) {
    ParameterMap p = fixed;
    for (Eigen::Index k = 0; k < n; ++k) p[symbolic[static_cast<std::size_t>(k)]] = theta(k);
    return p;
  };
  auto tableau_at = [&](const Eigen::VectorXd& theta) {
    return discretize(family(params_at(theta)), rule);
  };

  const RknTableau<double> base = tableau_at(Eigen::VectorXd::Zero(n));
  std::vector<RknTableau<double>> unit;
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto t = tableau_at(Eigen::VectorXd::Unit(n, k));
    if ((t.c - base.c).cwiseAbs().maxCoeff() > 0.0) {
      throw UnsupportedFamilyError("stage nodes depend on parameter '" +
                                   symbolic[static_cast<std::size_t>(k)] + "'");
    }
    unit.push_back(t);
  }

  // Affinity probes: scaled single directions and pairwise sums.
  std::vector<Eigen::VectorXd> probes;
  for (Eigen::Index k = 0; k < n; ++k) {
    probes.push_back(2.0 * Eigen::VectorXd::Unit(n, k));
    probes.push_back(-1.5 * Eigen::VectorXd::Unit(n, k));
    for (Eigen::Index j = k + 1; j < n; ++j)
      probes.push_back(Eigen::VectorXd::Unit(n, k) + Eigen::VectorXd::Unit(n, j));
  }
  for (const auto& theta : probes) {
    const auto actual = tableau_at(theta);
    const auto predicted = combine(base, unit, theta);
    if (max_abs_diff(actual, predicted) > 1e-12 * (1.0 + max_abs(actual))) {
      throw UnsupportedFamilyError("family is not affine in its parameters");
    }
  }

  ParametricTableau pt;
  pt.parameters = symbolic;
  pt.c = base.c;
  const int r = base.stages();
  auto form = [&](double constant, auto&& component) {
    AffineForm f;
    f.constant = constant;
    f.coeffs.resize(n);
    for (Eigen::Index k = 0; k < n; ++k)
      f.coeffs(k) = component(unit[static_cast<std::size_t>(k)]) - constant;
    return f;
  };
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      pt.a_bar.push_back(form(base.a_bar(i, j), [i, j](const auto& t) { return t.a_bar(i, j); }));
  for (int i = 0; i < r; ++i) {
    pt.b_bar.push_back(form(base.b_bar(i), [i](const auto& t) { return t.b_bar(i); }));
    pt.b.push_back(form(base.b(i), [i](const auto& t) { return t.b(i); }));
  }
  return pt;
}

namespace {

using LVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
using LMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

// The same rule in extended precision when it is one of the generated
// rules, otherwise the given values widened.
QuadratureRule<long double> widen(const QuadratureRule<double>& rule) {
  try {
    auto wide = make_rule<long double>(rule.family, rule.size());
    const bool same = (wide.nodes.cast<double>() - rule.nodes).cwiseAbs().maxCoeff() == 0.0 &&
                      (wide.weights.cast<double>() - rule.weights).cwiseAbs().maxCoeff() == 0.0;
    if (same) return wide;
  } catch (const Error&) {
  }
  QuadratureRule<long double> out;
  out.family = rule.family;
  out.exactness_degree = rule.exactness_degree;
  out.nodes = rule.nodes.cast<long double>();
  out.weights = rule.weights.cast<long double>();
  return out;
}

}  // namespace

ParametricTableau discretize_parametric(int order, const QuadratureRule<double>& rule,
                                        const ParameterMap& fixed) {
  std::vector<std::string> symbolic;
  for (const auto& name : family_parameter_names(order))
    if (!fixed.count(name)) symbolic.push_back(name);
  for (const auto& [name, value] : fixed) {
    const auto names = family_parameter_names(order);
    if (std::find(names.begin(), names.end(), name) == names.end()) {
      throw UnsupportedFamilyError("order-" + std::to_string(order) + " family has no parameter '" +
                                   name + "'");
    }
  }

  // A_bar is linear in the parameters, so each direction is the coefficient
  // matrix at a unit parameter minus the one at zero. Entries are formed in
  // extended precision and rounded once.
  auto spec_at = [&](const std::string& unit) {
    ParameterMap p = fixed;
    for (const auto& name : symbolic) p[name] = name == unit ? 1.0 : 0.0;
    return SymplecticFamilySpec::from_params(order, p);
  };
  const LMatrix base = symplectic_family_matrix<long double>(spec_at(""));
  std::vector<LMatrix> dirs;
  for (const auto& name : symbolic) {
    LMatrix m = symplectic_family_matrix<long double>(spec_at(name));
    m.conservativeResize(base.rows(), base.cols());
    dirs.push_back(m - base);
  }

  const auto wide = widen(rule);
  const int r = rule.size();
  const int deg = static_cast<int>(base.rows()) - 1;
  std::vector<LVector> values;
  for (int i = 0; i < r; ++i) values.push_back(shifted_legendre_values<long double>(deg, wide.nodes(i)));

  const auto n = static_cast<Eigen::Index>(symbolic.size());
  ParametricTableau pt;
  pt.parameters = symbolic;
  pt.c = wide.nodes.cast<double>();
  auto constant = [n](long double x) {
    AffineForm f;
    f.constant = static_cast<double>(x);
    f.coeffs = Eigen::VectorXd::Zero(n);
    return f;
  };
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      const long double w = wide.weights(j);
      AffineForm f = constant(w * values[i].dot(base * values[j]));
      for (Eigen::Index k = 0; k < n; ++k)
        f.coeffs(k) = static_cast<double>(w * values[i].dot(dirs[static_cast<std::size_t>(k)] * values[j]));
      pt.a_bar.push_back(std::move(f));
    }
  }
  for (int i = 0; i < r; ++i) {
    pt.b_bar.push_back(constant(wide.weights(i) * (1.0L - wide.nodes(i))));
    pt.b.push_back(constant(wide.weights(i)));
  }
  return pt;
}

std::string to_string(StructureSolution::Status s) {
  switch (s) {
    case StructureSolution::Status::Unique: return "unique";
    case StructureSolution::Status::Family: return "family";
    case StructureSolution::Status::Infeasible: return "infeasible";
  }
  return "unknown";
}

double StructureSolution::value(const std::string& name) const {
  for (std::size_t k = 0; k < parameters.size(); ++k)
    if (parameters[k] == name) return values[k].constant;
  throw UnsupportedFamilyError("solution has no parameter '" + name + "'");
}

namespace {

struct PivotRow {
  Eigen::Index column;
  LVector coeffs;
  long double rhs;
};

bool satisfies(StructureClass got, StructureClass target) {
  if (target == StructureClass::DiagonallyImplicit)
    return got == StructureClass::Explicit || got == StructureClass::DiagonallyImplicit;
  return got == target;
}

std::string equation_label(int i, int j) {
  return "a_bar(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") = 0";
}

}  // namespace

StructureSolution solve_structure(const ParametricTableau& pt, StructureClass target,
                                  const SolveOptions& options) {
  pt.validate();
  if (target == StructureClass::FullyImplicit) {
    throw UnsupportedFamilyError("solve_structure targets explicit or diagonally implicit");
  }
  const int r = pt.stages();
  const auto n = static_cast<Eigen::Index>(pt.parameters.size());
  const double tol = options.rank_tolerance;

  std::vector<Eigen::Index> preference;
  for (const auto& name : options.pivot_preference) {
    const auto it = std::find(pt.parameters.begin(), pt.parameters.end(), name);
    if (it == pt.parameters.end()) {
      throw UnsupportedFamilyError("pivot preference names unknown parameter '" + name + "'");
    }
    preference.push_back(it - pt.parameters.begin());
  }

  StructureSolution sol;
  sol.parameters = pt.parameters;

  std::vector<std::pair<int, int>> zero_entries;
  for (int i = 0; i < r; ++i) {
    const int first = target == StructureClass::Explicit ? i : i + 1;
    for (int j = first; j < r; ++j) zero_entries.emplace_back(i, j);
  }

  std::vector<PivotRow> rows;
  for (const auto& [i, j] : zero_entries) {
    const AffineForm& e = pt.a(i, j);
    LVector v = e.coeffs.cast<long double>();
    long double rhs = -static_cast<long double>(e.constant);
    for (const auto& row : rows) {
      const long double f = v(row.column);
      v -= f * row.coeffs;
      rhs -= f * row.rhs;
    }
    const long double vmax = n ? v.cwiseAbs().maxCoeff() : 0.0L;
    if (vmax <= tol) {
      if (std::abs(rhs) > tol) {
        sol.status = StructureSolution::Status::Infeasible;
        sol.violated_equation = equation_label(i, j);
        sol.violation = static_cast<double>(std::abs(rhs));
        sol.message = "inconsistent linear system";
        return sol;
      }
      continue;
    }
    Eigen::Index pivot = -1;
    for (Eigen::Index col : preference) {
      if (std::abs(v(col)) >= 1e-3 * vmax) {
        pivot = col;
        break;
      }
    }
    if (pivot < 0) v.cwiseAbs().maxCoeff(&pivot);
    const long double p = v(pivot);
    v /= p;
    rhs /= p;
    v(pivot) = 1.0L;
    for (auto& row : rows) {
      const long double f = row.coeffs(pivot);
      row.coeffs -= f * v;
      row.rhs -= f * rhs;
      row.coeffs(pivot) = 0.0L;
    }
    rows.push_back({pivot, std::move(v), rhs});
  }

  // Parameter values as affine forms in the free parameters.
  std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
  for (const auto& row : rows) is_pivot[static_cast<std::size_t>(row.column)] = true;
  std::vector<Eigen::Index> free_cols;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (!is_pivot[static_cast<std::size_t>(k)]) {
      free_cols.push_back(k);
      sol.free_parameters.push_back(pt.parameters[static_cast<std::size_t>(k)]);
    }
  }
  const auto nf = static_cast<Eigen::Index>(free_cols.size());
  LVector theta0 = LVector::Zero(n);
  LMatrix map = LMatrix::Zero(n, nf);
  for (Eigen::Index f = 0; f < nf; ++f) map(free_cols[static_cast<std::size_t>(f)], f) = 1.0;
  for (const auto& row : rows) {
    theta0(row.column) = row.rhs;
    for (Eigen::Index f = 0; f < nf; ++f)
      map(row.column, f) = -row.coeffs(free_cols[static_cast<std::size_t>(f)]);
  }
  // Elimination leaves residue of a few ulps where exact zeros belong.
  const double ulp_tol = 64.0 * std::numeric_limits<double>::epsilon();
  auto snap_form = [&](AffineForm& f) {
    double scale = std::abs(f.constant);
    if (f.coeffs.size()) scale = std::max(scale, f.coeffs.cwiseAbs().maxCoeff());
    const double cut = ulp_tol * std::max(1.0, scale);
    if (std::abs(f.constant) <= cut) f.constant = 0.0;
    for (Eigen::Index k = 0; k < f.coeffs.size(); ++k)
      if (std::abs(f.coeffs(k)) <= cut) f.coeffs(k) = 0.0;
  };
  auto rounded = [&](long double constant, const LVector& coeffs) {
    AffineForm f;
    f.constant = static_cast<double>(constant);
    f.coeffs = coeffs.cast<double>();
    snap_form(f);
    return f;
  };
  for (Eigen::Index k = 0; k < n; ++k)
    sol.values.push_back(rounded(theta0(k), map.row(k).transpose()));

  auto substitute = [&](const AffineForm& e) {
    const LVector coeffs = e.coeffs.cast<long double>();
    return rounded(static_cast<long double>(e.constant) + coeffs.dot(theta0),
                   map.transpose() * coeffs);
  };
  ParametricTableau& st = sol.tableau;
  st.parameters = sol.free_parameters;
  st.c = pt.c;
  for (const auto& e : pt.a_bar) st.a_bar.push_back(substitute(e));
  for (const auto& e : pt.b_bar) st.b_bar.push_back(substitute(e));
  for (const auto& e : pt.b) st.b.push_back(substitute(e));

  // The imposed entries must vanish identically in the free parameters.
  for (const auto& [i, j] : zero_entries) {
    AffineForm& e = st.a_bar[static_cast<std::size_t>(i * r + j)];
    const double residual =
        std::max(std::abs(e.constant), nf ? e.coeffs.cwiseAbs().maxCoeff() : 0.0);
    if (residual > tol) {
      sol.status = StructureSolution::Status::Infeasible;
      sol.violated_equation = equation_label(i, j);
      sol.violation = residual;
      sol.message = "substituted entry does not vanish";
      return sol;
    }
    e.constant = 0.0;
    e.coeffs.setZero();
  }

  std::vector<Eigen::VectorXd> samples{Eigen::VectorXd::Zero(nf)};
  for (Eigen::Index f = 0; f < nf; ++f) {
    samples.push_back(Eigen::VectorXd::Unit(nf, f));
    samples.push_back(-0.75 * Eigen::VectorXd::Unit(nf, f));
  }
  for (const auto& phi : samples) {
    if (!satisfies(classify_structure(st.evaluate(phi), 1e-12), target)) {
      sol.status = StructureSolution::Status::Infeasible;
      sol.message = "substituted tableau is not " + to_string(target);
      return sol;
    }
  }

  sol.status = nf == 0 ? StructureSolution::Status::Unique : StructureSolution::Status::Family;
  return sol;
}

}  // namespace csrkn
