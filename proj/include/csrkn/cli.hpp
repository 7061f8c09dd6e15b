#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace csrkn::cli {

enum ExitCode : int {
  kOk = 0,
  kVerificationFailure = 1,
  kUsageError = 2,
  kNumericalFailure = 3,
};

/// Runs one subcommand. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "a=0.1,b=-2" -> {a: 0.1, b: -2}. Throws ValidationError on bad input.
std::vector<std::pair<std::string, double>> parse_assignments(const std::string& text);

/// Comma-separated doubles.
std::vector<double> parse_list(const std::string& text);

/// Short closed form such as "sqrt(3)/12" when x is a small rational
/// multiple of sqrt(1, 2, 3, 5, 6, 10, 15); otherwise 17 digits.
std::string closed_form(double x);

}  // namespace csrkn::cli
