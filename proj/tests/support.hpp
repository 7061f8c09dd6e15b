#pragma once

// Shared fixtures and independent oracles for the unit tests.

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "csrkn/csrkn.hpp"

namespace csrkn::testing {

inline const double kSqrt3 = std::sqrt(3.0);
inline const double kSqrt5 = std::sqrt(5.0);
inline const double kSqrt6 = std::sqrt(6.0);

/// (order, rules) pairs of the printed tables.
inline const std::vector<std::pair<int, std::vector<std::string>>> kTablePairs = {
    {2, {"gauss:1", "radau-left:2", "radau-right:2", "lobatto:2"}},
    {3, {"gauss:2", "radau-left:2", "radau-right:2", "lobatto:3"}},
    {4, {"gauss:2", "radau-left:3", "radau-right:3", "lobatto:3"}},
    {5, {"gauss:3", "radau-left:3", "radau-right:3", "lobatto:4"}},
};

inline std::vector<std::string> all_rule_names() {
  std::vector<std::string> out;
  for (const char* f : {"gauss", "radau-left", "radau-right"})
    for (int r = 1; r <= 6; ++r) out.push_back(std::string(f) + ":" + std::to_string(r));
  for (int r = 2; r <= 6; ++r) out.push_back("lobatto:" + std::to_string(r));
  return out;
}

inline CsRknCoefficients family(int order, double a = 0.0, double b = 0.0) {
  return build_symplectic_family(SymplecticFamilySpec::from_params(order, {{"a", a}, {"b", b}}));
}

inline RknTableau<double> family_tableau(int order, const std::string& rule, double a = 0.0,
                                         double b = 0.0) {
  return discretize(family(order, a, b), make_rule(rule));
}

/// Two-stage Stormer-Verlet written out by hand.
inline RknTableau<double> verlet() {
  RknTableau<double> t;
  t.c = Eigen::Vector2d(0.0, 1.0);
  t.a_bar = Eigen::Matrix2d::Zero();
  t.a_bar(1, 0) = 0.5;
  t.b_bar = Eigen::Vector2d(0.5, 0.0);
  t.b = Eigen::Vector2d(0.5, 0.5);
  return t;
}

/// Lobatto-2 order-2 tableau with a_bar(1,2) moved by 0.05.
inline RknTableau<double> perturbed_tableau() {
  auto t = family_tableau(2, "lobatto:2");
  t.a_bar(0, 1) += 0.05;
  return t;
}

inline State make_state(std::initializer_list<double> q, std::initializer_list<double> p,
                        double t = 0.0) {
  State s;
  s.t = t;
  s.q = Eigen::Map<const Eigen::VectorXd>(q.begin(), static_cast<Eigen::Index>(q.size()));
  s.p = Eigen::Map<const Eigen::VectorXd>(p.begin(), static_cast<Eigen::Index>(p.size()));
  return s;
}

/// Gauss-Legendre nodes and weights on [0,1] by Golub-Welsch, any n.
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> golub_welsch(int n) {
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) j(k, k - 1) = j(k - 1, k) = k / std::sqrt(4.0 * k * k - 1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
  Eigen::VectorXd x = (es.eigenvalues().array() + 1.0) / 2.0;
  Eigen::VectorXd w = es.eigenvectors().row(0).array().square();
  return {x, w};
}

/// int_0^1 f by an n-point Gauss rule.
template <typename F>
double integrate_gauss(F f, int n = 20) {
  const auto [x, w] = golub_welsch(n);
  double s = 0.0;
  for (int k = 0; k < n; ++k) s += w(k) * f(x(k));
  return s;
}

inline double uniform(std::mt19937& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace csrkn::testing
