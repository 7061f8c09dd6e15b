#include "csrkn/quadrature.hpp"

#include <cmath>

namespace csrkn {

std::pair<QuadratureFamily, int> parse_rule_name(const std::string& name) {
  const auto colon = name.find(':');
  if (colon == std::string::npos) {
    throw ParseError("quadrature", "expected FAMILY:R, got '" + name + "'");
  }
  const std::string family = name.substr(0, colon);
  const std::string count = name.substr(colon + 1);
  QuadratureFamily f;
  if (family == "gauss") {
    f = QuadratureFamily::Gauss;
  } else if (family == "radau-left") {
    f = QuadratureFamily::RadauLeft;
  } else if (family == "radau-right") {
    f = QuadratureFamily::RadauRight;
  } else if (family == "lobatto") {
    f = QuadratureFamily::Lobatto;
  } else {
    throw ParseError("quadrature", "unknown rule family '" + family + "'");
  }
  std::size_t used = 0;
  int r = 0;
  try {
    r = std::stoi(count, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != count.size()) {
    throw ParseError("quadrature", "invalid node count '" + count + "'");
  }
  return {f, r};
}

std::optional<QuadratureRule<double>> closed_form_rule(QuadratureFamily family,
                                                       int r) {
  const double s3 = std::sqrt(3.0);
  const double s5 = std::sqrt(5.0);
  const double s6 = std::sqrt(6.0);
  const double s15 = std::sqrt(15.0);
  QuadratureRule<double> rule;
  rule.family = family;
  rule.exactness_degree = theoretical_exactness(family, r);
  auto set = [&rule](std::initializer_list<double> c,
                     std::initializer_list<double> b) {
    rule.nodes = Eigen::Map<const Eigen::VectorXd>(c.begin(), static_cast<Eigen::Index>(c.size()));
    rule.weights = Eigen::Map<const Eigen::VectorXd>(b.begin(), static_cast<Eigen::Index>(b.size()));
  };
  switch (family) {
    case QuadratureFamily::Gauss:
      if (r == 1) set({0.5}, {1.0});
      else if (r == 2) set({(3 - s3) / 6, (3 + s3) / 6}, {0.5, 0.5});
      else if (r == 3) set({(5 - s15) / 10, 0.5, (5 + s15) / 10}, {5.0 / 18, 4.0 / 9, 5.0 / 18});
      else return std::nullopt;
      break;
    case QuadratureFamily::RadauLeft:
      if (r == 2) set({0.0, 2.0 / 3}, {0.25, 0.75});
      else if (r == 3)
        set({0.0, (6 - s6) / 10, (6 + s6) / 10}, {1.0 / 9, (16 + s6) / 36, (16 - s6) / 36});
      else return std::nullopt;
      break;
    case QuadratureFamily::RadauRight:
      if (r == 2) set({1.0 / 3, 1.0}, {0.75, 0.25});
      else if (r == 3)
        set({(4 - s6) / 10, (4 + s6) / 10, 1.0}, {(16 - s6) / 36, (16 + s6) / 36, 1.0 / 9});
      else return std::nullopt;
      break;
    case QuadratureFamily::Lobatto:
      if (r == 2) set({0.0, 1.0}, {0.5, 0.5});
      else if (r == 3) set({0.0, 0.5, 1.0}, {1.0 / 6, 2.0 / 3, 1.0 / 6});
      else if (r == 4)
        set({0.0, (5 - s5) / 10, (5 + s5) / 10, 1.0}, {1.0 / 12, 5.0 / 12, 5.0 / 12, 1.0 / 12});
      else return std::nullopt;
      break;
  }
  return rule;
}

}  // namespace csrkn
