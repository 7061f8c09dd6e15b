#pragma once

// Printed tableaux transcribed as closed-form expressions in the family
// parameters, paired with the library routine that regenerates them.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "csrkn/tableau.hpp"

namespace csrkn {

struct GoldenTableau {
  /// e.g. "order4/lobatto:3", "three-parameter/radau-left:2",
  /// "dirkn/lobatto:2", "explicit/lobatto:2".
  std::string name;
  std::string rule;
  /// Family order for tableaux discretized straight from a family.
  std::optional<int> family_order;
  /// Parameters sampled over {0, 1, -1}; every other family parameter is 0.
  std::vector<std::string> parameters;
  std::function<RknTableau<double>(const ParameterMap&)> golden;
  /// Symbolic route: parametric discretization (and structure solving).
  std::function<RknTableau<double>(const ParameterMap&)> generate;
};

std::vector<GoldenTableau> golden_tableaux();

/// Every assignment of {0, 1, -1} to the given names, in lexicographic
/// order of the sample index.
std::vector<ParameterMap> parameter_samples(const std::vector<std::string>& names);

}  // namespace csrkn
