#include "csrkn/golden.hpp"

#include <algorithm>
#include <cmath>

#include "csrkn/parametric.hpp"

namespace csrkn {

namespace {

using E = std::vector<double>;
using Entries = E (*)(double, double, double);

const double s3 = std::sqrt(3.0);
const double s5 = std::sqrt(5.0);
const double s6 = std::sqrt(6.0);
const double s10 = std::sqrt(10.0);
const double s15 = std::sqrt(15.0);

struct Columns {
  E c, b_bar, b;
};

Columns columns(const std::string& rule) {
  if (rule == "gauss:1") return {{0.5}, {0.5}, {1.0}};
  if (rule == "gauss:2")
    return {{(3.0 - s3) / 6.0, (3.0 + s3) / 6.0}, {0.25 + s3 / 12.0, 0.25 - s3 / 12.0}, {0.5, 0.5}};
  if (rule == "gauss:3")
    return {{(5.0 - s15) / 10.0, 0.5, (5.0 + s15) / 10.0},
            {(5.0 + s15) / 36.0, 2.0 / 9.0, (5.0 - s15) / 36.0},
            {5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0}};
  if (rule == "radau-left:2") return {{0.0, 2.0 / 3.0}, {0.25, 0.25}, {0.25, 0.75}};
  if (rule == "radau-left:3")
    return {{0.0, (6.0 - s6) / 10.0, (6.0 + s6) / 10.0},
            {1.0 / 9.0, (7.0 + 2.0 * s6) / 36.0, (7.0 - 2.0 * s6) / 36.0},
            {1.0 / 9.0, (16.0 + s6) / 36.0, (16.0 - s6) / 36.0}};
  if (rule == "radau-right:2") return {{1.0 / 3.0, 1.0}, {0.5, 0.0}, {0.75, 0.25}};
  if (rule == "radau-right:3")
    return {{(4.0 - s6) / 10.0, (4.0 + s6) / 10.0, 1.0},
            {(9.0 + s6) / 36.0, (9.0 - s6) / 36.0, 0.0},
            {(16.0 - s6) / 36.0, (16.0 + s6) / 36.0, 1.0 / 9.0}};
  if (rule == "lobatto:2") return {{0.0, 1.0}, {0.5, 0.0}, {0.5, 0.5}};
  if (rule == "lobatto:3")
    return {{0.0, 0.5, 1.0}, {1.0 / 6.0, 1.0 / 3.0, 0.0}, {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0}};
  if (rule == "lobatto:4")
    return {{0.0, (5.0 - s5) / 10.0, (5.0 + s5) / 10.0, 1.0},
            {1.0 / 12.0, (5.0 + s5) / 24.0, (5.0 - s5) / 24.0, 0.0},
            {1.0 / 12.0, 5.0 / 12.0, 5.0 / 12.0, 1.0 / 12.0}};
  throw ValidationError("no golden columns for " + rule);
}

RknTableau<double> assemble(const std::string& rule, const E& a_bar) {
  const Columns col = columns(rule);
  const auto r = static_cast<Eigen::Index>(col.c.size());
  RknTableau<double> t;
  t.c = Eigen::Map<const Eigen::VectorXd>(col.c.data(), r);
  t.b_bar = Eigen::Map<const Eigen::VectorXd>(col.b_bar.data(), r);
  t.b = Eigen::Map<const Eigen::VectorXd>(col.b.data(), r);
  t.a_bar = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      a_bar.data(), r, r);
  return t;
}

double get(const ParameterMap& p, const char* name) {
  auto it = p.find(name);
  return it == p.end() ? 0.0 : it->second;
}

}  // namespace

std::vector<ParameterMap> parameter_samples(const std::vector<std::string>& names) {
  static constexpr double values[] = {0.0, 1.0, -1.0};
  std::vector<ParameterMap> out;
  std::size_t count = 1;
  for (std::size_t k = 0; k < names.size(); ++k) count *= 3;
  for (std::size_t n = 0; n < count; ++n) {
    ParameterMap sample;
    std::size_t rest = n;
    for (std::size_t k = names.size(); k-- > 0;) {
      sample[names[k]] = values[rest % 3];
      rest /= 3;
    }
    out.push_back(sample);
  }
  return out;
}

std::vector<GoldenTableau> golden_tableaux() {
  std::vector<GoldenTableau> out;

  auto family = [&](int order, const std::string& rule, std::vector<std::string> params,
                    Entries entries) {
    GoldenTableau g;
    const bool three = params.size() == 3;
    g.name = (three ? std::string("three-parameter") : "order" + std::to_string(order)) + "/" + rule;
    g.rule = rule;
    g.family_order = order;
    ParameterMap fixed;
    for (const auto& name : family_parameter_names(order))
      if (std::find(params.begin(), params.end(), name) == params.end()) fixed[name] = 0.0;
    g.parameters = std::move(params);
    g.golden = [rule, entries](const ParameterMap& p) {
      return assemble(rule, entries(get(p, "a"), get(p, "b"), get(p, "c")));
    };
    g.generate = [order, rule, fixed](const ParameterMap& p) {
      return discretize_parametric(order, make_rule(rule), fixed).evaluate(p);
    };
    out.push_back(std::move(g));
  };

  family(2, "gauss:1", {"a", "b"}, [](double a, double /*b*/, double /*g*/) {
    return E{a};
  });
  family(2, "radau-left:2", {"a", "b"}, [](double a, double b, double /*g*/) {
    return E{a/4.0 - s3/2.0*b + 1.0/8.0,
             3.0*a/4.0 - s3/2.0*b - 1.0/8.0,
             a/4.0 - s3/6.0*b + 1.0/8.0,
             3.0*a/4.0 + s3/2.0*b - 1.0/8.0};
  });
  family(2, "radau-right:2", {"a", "b"}, [](double a, double b, double /*g*/) {
    return E{3.0*a/4.0 - s3/2.0*b + 1.0/8.0,
             a/4.0 + s3/6.0*b - 1.0/8.0,
             3.0*a/4.0 + s3/2.0*b + 1.0/8.0,
             a/4.0 + s3/2.0*b - 1.0/8.0};
  });
  family(2, "lobatto:2", {"a", "b"}, [](double a, double b, double /*g*/) {
    return E{a/2.0 - s3*b + 1.0/4.0,
             a/2.0 - 1.0/4.0,
             a/2.0 + 1.0/4.0,
             a/2.0 + s3*b - 1.0/4.0};
  });
  family(3, "gauss:2", {"a", "b"}, [](double a, double b, double /*g*/) {
    return E{(1.0 + s3)/12.0 - a + b/2.0,
             (1.0 - s3)/12.0 - b/2.0,
             (1.0 + s3)/12.0 - b/2.0,
             (1.0 - s3)/12.0 + a + b/2.0};
  });
  family(3, "radau-left:2", {"a", "b"}, [](double a, double b, double /*g*/) {
    return E{(2.0 - 6.0*s3*a + 9.0*b)/12.0,
             -s3/2.0*a - 3.0/4.0*b,
             (2.0 - 2.0*s3*a - 3.0*b)/12.0,
             s3/2.0*a + b/4.0};
  });
  family(3, "radau-right:2", {"a", "b"}, [](double a, double b, double /*g*/) {
    return E{(1.0 - 2.0*s3*a + b)/4.0,
             (-1.0 + 2.0*s3*a - 3.0*b)/12.0,
             (1.0 + 2.0*s3*a - 3.0*b)/4.0,
             (-1.0 + 6.0*s3*a + 9.0*b)/12.0};
  });
  family(3, "lobatto:3", {"a", "b"}, [](double a, double b, double /*g*/) {
    return E{(6.0 - 18.0*s3*a + 27.0*b)/54.0,
             (1.0 - 6.0*s3*a)/9.0,
             -1.0/18.0 - b/2.0,
             1.0/9.0 - s3/6.0*a,
             1.0/9.0,
             -1.0/18.0 + s3/6.0*a,
             1.0/9.0 - b/2.0,
             (1.0 + 6.0*s3*a)/9.0,
             (-1.0 + 6.0*s3*a + 9.0*b)/18.0};
  });
  family(4, "gauss:2", {"a", "b"}, [](double a, double /*b*/, double /*g*/) {
    return E{1.0/12.0 + a/2.0,
             (1.0 - s3)/12.0 - a/2.0,
             (1.0 + s3)/12.0 - a/2.0,
             1.0/12.0 + a/2.0};
  });
  family(4, "radau-left:3", {"a"}, [](double a, double /*b*/, double /*g*/) {
    return E{(1.0 + 18.0*a)/54.0,
             (-11.0 + 4.0*s6 + (-36.0 + 54.0*s6)*a)/216.0,
             (-11.0 - 4.0*s6 + (-36.0 - 54.0*s6)*a)/216.0,
             (28.0 - 3.0*s6)/540.0 + (-15.0 + 15.0*s6)*a/225.0,
             (16.0 + s6)/216.0 + (12.0 - 3.0*s6)*a/36.0,
             (98.0 - 53.0*s6)/1080.0 + (-240.0 + 15.0*s6)*a/900.0,
             (28.0 + 3.0*s6)/540.0 + (-15.0 - 15.0*s6)*a/225.0,
             (98.0 + 53.0*s6)/1080.0 - (240.0 + 15.0*s6)*a/900.0,
             (16.0 - s6)/216.0 + (12.0 + 3.0*s6)*a/36.0};
  });
  family(4, "radau-right:3", {"a"}, [](double a, double /*b*/, double /*g*/) {
    return E{(16.0 - s6)/216.0 + (12.0 + 3.0*s6)*a/36.0,
             (62.0 - 43.0*s6)/1080.0 - (240.0 + 15.0*s6)*a/900.0,
             -(8.0 + 3.0*s6)/540.0 + (-(15.0 + 15.0*s6))*a/225.0,
             (62.0 + 43.0*s6)/1080.0 - (240.0 - 15.0*s6)*a/900.0,
             (16.0 + s6)/216.0 + (12.0 - 3.0*s6)*a/36.0,
             -(8.0 - 3.0*s6)/540.0 + (-(15.0 - 15.0*s6))*a/225.0,
             (43.0 + 2.0*s6)/216.0 + (-(6.0 + 9.0*s6))*a/36.0,
             (43.0 - 2.0*s6)/216.0 + (-(6.0 - 9.0*s6))*a/36.0,
             (1.0 + 18.0*a)/54.0};
  });
  family(4, "lobatto:3", {"a", "b"}, [](double a, double b, double /*g*/) {
    return E{(1.0 + 18.0*a + 12.0*s5*b)/36.0,
             (-1.0 + 6.0*s5*b)/18.0,
             (-2.0 - 18.0*a + 12.0*s5*b)/36.0,
             (5.0 + 6.0*s5*b)/72.0,
             (1.0 - 6.0*s5*b)/9.0,
             (-1.0 + 6.0*s5*b)/72.0,
             (2.0 - 9.0*a + 6.0*s5*b)/18.0,
             (5.0 + 6.0*s5*b)/18.0,
             (1.0 + 18.0*a + 12.0*s5*b)/36.0};
  });
  family(5, "gauss:3", {"a", "b"}, [](double a, double b, double /*g*/) {
    // b1 P2(c1)^2 = 2/9 fixes the beta coefficient of the diagonal at 30.
    return E{(2.0 - 90.0*a + 30.0*b)/135.0,
             (19.0 - 6.0*s15 + 180.0*a - 120.0*b)/270.0,
             (62.0 - 15.0*s15 + 120.0*b)/540.0,
             (19.0 + 6.0*s15 + 180.0*a - 120.0*b)/432.0,
             (1.0 + 15.0*b)/27.0,
             (19.0 - 6.0*s15 - 180.0*a - 120.0*b)/432.0,
             (62.0 + 15.0*s15 + 120.0*b)/540.0,
             (19.0 + 6.0*s15 - 180.0*a - 120.0*b)/270.0,
             (2.0 + 90.0*a + 30.0*b)/135.0};
  });
  family(5, "radau-left:3", {"a"}, [](double a, double /*b*/, double /*g*/) {
    return E{(1.0 - 60.0*s15*a)/270.0,
             (-4.0 - 19.0*s6 + (240.0*s15 - 180.0*s10)*a)/2160.0,
             (-4.0 + 19.0*s6 + (240.0*s15 + 180.0*s10)*a)/2160.0,
             (181.0 - 36.0*s6 + (84.0*s15 - 72.0*s10)*a)/2700.0,
             (17.0 + 2.0*s6 + 60.0*s15*a)/540.0,
             (301.0 - 136.0*s6 - (384.0*s15 - 72.0*s10)*a)/2700.0,
             (181.0 + 36.0*s6 + (84.0*s15 + 72.0*s10)*a)/2700.0,
             (301.0 + 136.0*s6 - (384.0*s15 + 72.0*s10)*a)/2700.0,
             (17.0 - 2.0*s6 + 60.0*s15*a)/540.0};
  });
  family(5, "radau-right:3", {"a"}, [](double a, double /*b*/, double /*g*/) {
    return E{(17.0 - 2.0*s6 - 60.0*s15*a)/540.0,
             (211.0 - 104.0*s6 + (384.0*s15 + 72.0*s10)*a)/2700.0,
             (1.0 + 6.0*s6 - (84.0*s15 + 72.0*s10)*a)/2700.0,
             (211.0 + 104.0*s6 + (384.0*s15 - 72.0*s10)*a)/2700.0,
             (17.0 + 2.0*s6 - 60.0*s15*a)/540.0,
             (1.0 - 6.0*s6 - (84.0*s15 - 72.0*s10)*a)/2700.0,
             (536.0 + 79.0*s6 - (240.0*s15 + 180.0*s10)*a)/2160.0,
             (536.0 - 79.0*s6 - (240.0*s15 - 180.0*s10)*a)/2160.0,
             (1.0 + 60.0*s15*a)/270.0};
  });
  family(5, "lobatto:4", {"a", "b"}, [](double a, double b, double /*g*/) {
    return E{(1.0 - 60.0*s15*a + 150.0*b)/360.0,
             (-5.0 - 3.0*s5 - (300.0*s3 - 60.0*s15)*a - 300.0*b)/720.0,
             (-5.0 + 3.0*s5 + (300.0*s3 + 60.0*s15)*a - 300.0*b)/720.0,
             (2.0 + 75.0*b)/180.0,
             29.0/720.0 - (11.0*s5 + (100.0*s3 - 20.0*s15)*a + 100.0*b)/1200.0,
             (11.0 + 60.0*s3*a + 30.0*b)/360.0,
             (29.0 - 15.0*s5 + 30.0*b)/360.0,
             -1.0/720.0 + (s5 - (20.0*s15 + 100.0*s3)*a - 100.0*b)/1200.0,
             29.0/720.0 + (11.0*s5 + (100.0*s3 + 20.0*s15)*a - 100.0*b)/1200.0,
             (29.0 + 15.0*s5 + 30.0*b)/360.0,
             (11.0 - 60.0*s3*a + 30.0*b)/360.0,
             -1.0/720.0 - (s5 + (20.0*s15 - 100.0*s3)*a + 100.0*b)/1200.0,
             (17.0 + 75.0*b)/180.0,
             (145.0 + 33.0*s5 - (60.0*s15 + 300.0*s3)*a - 300.0*b)/720.0,
             (145.0 - 33.0*s5 - (60.0*s15 - 300.0*s3)*a - 300.0*b)/720.0,
             (1.0 + 60.0*s15*a + 150.0*b)/360.0};
  });
  family(2, "radau-left:2", {"a", "b", "c"}, [](double a, double b, double g) {
    return E{1.0/8.0 + a/4.0 - s3/2.0*b + 3.0/4.0*g,
             -1.0/8.0 + 3.0/4.0*a - s3/2.0*b - 3.0/4.0*g,
             1.0/8.0 + a/4.0 - s3/6.0*b - g/4.0,
             -1.0/8.0 + 3.0/4.0*a + s3/2.0*b + g/4.0};
  });
  family(2, "radau-right:2", {"a", "b", "c"}, [](double a, double b, double g) {
    return E{1.0/8.0 + 3.0/4.0*a - s3/2.0*b + g/4.0,
             -1.0/8.0 + a/4.0 + s3/6.0*b - g/4.0,
             1.0/8.0 + 3.0/4.0*a + s3/2.0*b - 3.0/4.0*g,
             -1.0/8.0 + a/4.0 + s3/2.0*b + 3.0/4.0*g};
  });
  family(2, "lobatto:2", {"a", "b", "c"}, [](double a, double b, double g) {
    return E{1.0/4.0 + a/2.0 - s3*b + 3.0*g/2.0,
             -1.0/4.0 + a/2.0 - 3.0*g/2.0,
             1.0/4.0 + a/2.0 - 3.0*g/2.0,
             -1.0/4.0 + a/2.0 + s3*b + 3.0*g/2.0};
  });

  auto solved = [&](const std::string& kind, const std::string& rule, StructureClass target,
                    std::vector<std::string> params, Entries entries) {
    GoldenTableau g;
    g.name = kind + "/" + rule;
    g.rule = rule;
    g.parameters = std::move(params);
    g.golden = [rule, entries](const ParameterMap& p) {
      return assemble(rule, entries(get(p, "a"), get(p, "b"), 0.0));
    };
    g.generate = [rule, target](const ParameterMap& p) {
      SolveOptions options;
      options.pivot_preference = {"c"};
      const auto solution = solve_structure(discretize_parametric(2, make_rule(rule)), target, options);
      if (!solution.feasible()) throw ValidationError(solution.message);
      return solution.tableau.evaluate(p);
    };
    out.push_back(std::move(g));
  };

  // Diagonally implicit two-parameter families, gamma eliminated.
  solved("dirkn", "radau-left:2", StructureClass::DiagonallyImplicit, {"a", "b"},
         [](double a, double b, double /*g*/) {
           return E{a - s3 * b, 0.0, 1.0 / 6.0, -1.0 / 6.0 + a + s3 / 3.0 * b};
         });
  solved("dirkn", "radau-right:2", StructureClass::DiagonallyImplicit, {"a", "b"},
         [](double a, double b, double /*g*/) {
           return E{a - s3 / 3.0 * b, 0.0, 0.5, -0.5 + a + s3 * b};
         });
  solved("dirkn", "lobatto:2", StructureClass::DiagonallyImplicit, {"a", "b"},
         [](double a, double b, double /*g*/) {
           return E{a - s3 * b, 0.0, 0.5, -0.5 + a + s3 * b};
         });

  // Explicit members of the three-parameter family.
  solved("explicit", "radau-left:2", StructureClass::Explicit, {},
         [](double, double, double) { return E{0.0, 0.0, 1.0 / 6.0, 0.0}; });
  solved("explicit", "radau-right:2", StructureClass::Explicit, {},
         [](double, double, double) { return E{0.0, 0.0, 0.5, 0.0}; });
  solved("explicit", "lobatto:2", StructureClass::Explicit, {},
         [](double, double, double) { return E{0.0, 0.0, 0.5, 0.0}; });

  return out;
}

}  // namespace csrkn
