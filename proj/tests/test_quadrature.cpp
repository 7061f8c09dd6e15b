#include <doctest.h>

#include <cmath>

#include "support.hpp"

using namespace csrkn;
using namespace csrkn::testing;

namespace {

const QuadratureFamily kFamilies[] = {QuadratureFamily::Gauss, QuadratureFamily::RadauLeft,
                                      QuadratureFamily::RadauRight, QuadratureFamily::Lobatto};

int min_size(QuadratureFamily f) { return f == QuadratureFamily::Lobatto ? 2 : 1; }

void check_rule(const QuadratureRule<double>& rule, std::initializer_list<double> c,
                std::initializer_list<double> b) {
  REQUIRE(rule.size() == static_cast<int>(c.size()));
  int i = 0;
  for (double x : c) CHECK(std::abs(rule.nodes(i++) - x) < 1e-15);
  i = 0;
  for (double x : b) CHECK(std::abs(rule.weights(i++) - x) < 1e-15);
}

}  // namespace

TEST_CASE("make_rule examples") {
  check_rule(make_rule("gauss:2"), {(3 - kSqrt3) / 6, (3 + kSqrt3) / 6}, {0.5, 0.5});
  check_rule(make_rule("radau-left:2"), {0.0, 2.0 / 3}, {0.25, 0.75});
  check_rule(make_rule("lobatto:4"), {0.0, (5 - kSqrt5) / 10, (5 + kSqrt5) / 10, 1.0},
             {1.0 / 12, 5.0 / 12, 5.0 / 12, 1.0 / 12});
}

TEST_CASE("closed forms of the tabulated rules") {
  check_rule(make_rule("gauss:1"), {0.5}, {1.0});
  check_rule(make_rule("gauss:3"), {0.5 - std::sqrt(15.0) / 10, 0.5, 0.5 + std::sqrt(15.0) / 10},
             {5.0 / 18, 4.0 / 9, 5.0 / 18});
  check_rule(make_rule("radau-right:2"), {1.0 / 3, 1.0}, {0.75, 0.25});
  check_rule(make_rule("radau-left:3"), {0.0, (6 - kSqrt6) / 10, (6 + kSqrt6) / 10},
             {1.0 / 9, (16 + kSqrt6) / 36, (16 - kSqrt6) / 36});
  check_rule(make_rule("radau-right:3"), {(4 - kSqrt6) / 10, (4 + kSqrt6) / 10, 1.0},
             {(16 - kSqrt6) / 36, (16 + kSqrt6) / 36, 1.0 / 9});
  check_rule(make_rule("lobatto:2"), {0.0, 1.0}, {0.5, 0.5});
  check_rule(make_rule("lobatto:3"), {0.0, 0.5, 1.0}, {1.0 / 6, 2.0 / 3, 1.0 / 6});
}

TEST_CASE("Gauss rules agree with Golub-Welsch") {
  for (int r = 1; r <= kMaxRuleSize; ++r) {
    const auto rule = make_rule<double>(QuadratureFamily::Gauss, r);
    const auto [x, w] = golub_welsch(r);
    CHECK((rule.nodes - x).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((rule.weights - w).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("rule invariants for every family and size") {
  for (auto f : kFamilies) {
    for (int r = min_size(f); r <= kMaxRuleSize; ++r) {
      const auto rule = make_rule<double>(f, r);
      CAPTURE(rule.name());
      CHECK(rule.family == f);
      CHECK(std::abs(rule.weights.sum() - 1.0) < 1e-14);
      CHECK((rule.weights.array() > 0.0).all());
      for (int i = 1; i < r; ++i) CHECK(rule.nodes(i) > rule.nodes(i - 1));
      CHECK(rule.nodes(0) >= 0.0);
      CHECK(rule.nodes(r - 1) <= 1.0);
      if (f == QuadratureFamily::RadauLeft || f == QuadratureFamily::Lobatto)
        CHECK(rule.nodes(0) == 0.0);
      if (f == QuadratureFamily::RadauRight || f == QuadratureFamily::Lobatto)
        CHECK(rule.nodes(r - 1) == 1.0);
      CHECK(rule.exactness_degree == theoretical_exactness(f, r));
      CHECK(verify_exactness(rule) == theoretical_exactness(f, r));
      CHECK(rule.order() == rule.exactness_degree + 1);
    }
  }
}

TEST_CASE("Radau-right mirrors Radau-left") {
  for (int r = 1; r <= kMaxRuleSize; ++r) {
    const auto left = make_rule<double>(QuadratureFamily::RadauLeft, r);
    const auto right = make_rule<double>(QuadratureFamily::RadauRight, r);
    for (int i = 0; i < r; ++i) {
      CHECK(std::abs(right.nodes(i) - (1.0 - left.nodes(r - 1 - i))) < 1e-15);
      CHECK(std::abs(right.weights(i) - left.weights(r - 1 - i)) < 1e-15);
    }
  }
}

TEST_CASE("verify_exactness examples") {
  CHECK(verify_exactness(make_rule("gauss:3")) == 5);
  QuadratureRule<double> lob;
  lob.family = QuadratureFamily::Lobatto;
  lob.nodes = Eigen::Vector3d(0.0, 0.5, 1.0);
  lob.weights = Eigen::Vector3d(1.0 / 6, 2.0 / 3, 1.0 / 6);
  CHECK(verify_exactness(lob) == 3);
  CHECK(verify_exactness(make_rule("radau-right:3")) == 4);

  QuadratureRule<double> bad;
  bad.nodes = Eigen::Vector2d(0.2, 0.7);
  bad.weights = Eigen::Vector2d(0.5, 0.4);
  CHECK(verify_exactness(bad) == -1);
}

TEST_CASE("sizes out of range are rejected") {
  CHECK_THROWS_AS(make_rule<double>(QuadratureFamily::Gauss, 0), UnsupportedSizeError);
  CHECK_THROWS_AS(make_rule<double>(QuadratureFamily::Gauss, 7), UnsupportedSizeError);
  CHECK_THROWS_AS(make_rule<double>(QuadratureFamily::Lobatto, 1), UnsupportedSizeError);
  CHECK_THROWS_AS(make_rule("radau-left:9"), UnsupportedSizeError);
}

TEST_CASE("rule names parse") {
  CHECK(parse_rule_name("gauss:3") == std::make_pair(QuadratureFamily::Gauss, 3));
  CHECK(parse_rule_name("radau-left:2") == std::make_pair(QuadratureFamily::RadauLeft, 2));
  CHECK(parse_rule_name("radau-right:2") == std::make_pair(QuadratureFamily::RadauRight, 2));
  CHECK(parse_rule_name("lobatto:4") == std::make_pair(QuadratureFamily::Lobatto, 4));
  CHECK(make_rule("lobatto:4").name() == "lobatto:4");
  CHECK_THROWS_AS(parse_rule_name("simpson:3"), Error);
  CHECK_THROWS_AS(parse_rule_name("gauss"), Error);
  CHECK_THROWS_AS(parse_rule_name("gauss:x"), Error);
}

TEST_CASE("long double rules refine the double ones") {
  for (auto f : kFamilies) {
    for (int r = min_size(f); r <= kMaxRuleSize; ++r) {
      const auto wide = make_rule<long double>(f, r);
      const auto narrow = make_rule<double>(f, r);
      CHECK(std::abs(wide.weights.sum() - 1.0L) < 1e-17L);
      for (int i = 0; i < r; ++i) {
        CHECK(narrow.nodes(i) == static_cast<double>(wide.nodes(i)));
        CHECK(narrow.weights(i) == static_cast<double>(wide.weights(i)));
      }
    }
  }
}
