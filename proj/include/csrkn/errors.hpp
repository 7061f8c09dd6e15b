#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace csrkn {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A Legendre degree exceeded the configured maximum.
class DegreeLimitError : public Error {
 public:
  using Error::Error;
};

class UnsupportedOrderError : public Error {
 public:
  using Error::Error;
};

class UnsupportedSizeError : public Error {
 public:
  using Error::Error;
};

/// Non-affine parameter dependence or an unknown family parameter.
class UnsupportedFamilyError : public Error {
 public:
  using Error::Error;
};

/// A hypothesis required by a reduced condition list does not hold.
class AssumptionViolation : public Error {
 public:
  AssumptionViolation(std::string hypothesis, double residual)
      : Error("assumption violated: " + hypothesis +
              " (residual " + std::to_string(residual) + ")"),
        hypothesis_(std::move(hypothesis)),
        residual_(residual) {}

  const std::string& hypothesis() const noexcept { return hypothesis_; }
  double residual() const noexcept { return residual_; }

 private:
  std::string hypothesis_;
  double residual_;
};

/// Malformed input document; `path()` names the offending field.
class ParseError : public Error {
 public:
  ParseError(std::string path, const std::string& message)
      : Error(path.empty() ? message : path + ": " + message),
        path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Structurally valid document whose contents are inconsistent.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Numerical failures. `step_index()` is attached when the failure
/// happened inside a trajectory.
class NumericalFailure : public Error {
 public:
  explicit NumericalFailure(const std::string& message)
      : Error(message), message_(message) {}

  const char* what() const noexcept override { return message_.c_str(); }

  std::optional<long> step_index() const noexcept { return step_index_; }

  void attach_step(long index) {
    if (step_index_) return;
    step_index_ = index;
    message_ = "step " + std::to_string(index) + ": " + message_;
  }

 private:
  std::string message_;
  std::optional<long> step_index_;
};

/// Newton iteration on the stage equations did not reach tolerance.
class ConvergenceFailure : public NumericalFailure {
 public:
  ConvergenceFailure(const std::string& message, double last_residual)
      : NumericalFailure(message + " (last residual " +
                         std::to_string(last_residual) + ")"),
        last_residual_(last_residual) {}

  double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

class LinearSolveFailure : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

/// The high-accuracy reference oracle could not reach its agreement
/// tolerance.
class OracleFailure : public NumericalFailure {
 public:
  using NumericalFailure::NumericalFailure;
};

}  // namespace csrkn
