#pragma once

#include <cstddef>
#include <exception>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bgkpi {

enum class ErrorKind {
  NonPositiveInput,
  NonPositiveDensity,
  NonPositiveTemperature,
  StepUnstable,
  GridTooSmall,
  GridMismatch,
  DimensionMismatch,
  UnsupportedDimension,
  InvalidTableau,
  InvalidParameters,
  EigensolverFailure,
  AdviceRejected,
  IoError,
};

const char* to_string(ErrorKind kind);

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Where in a run a failure happened. Fields are filled in as the exception
// travels outward: the RHS knows the cell, the stepper knows the stage and
// inner step, the run loop knows the outer step and time.
struct FailureContext {
  std::optional<std::size_t> cell{};
  std::optional<int> stage{};
  std::optional<int> inner_step{};
  std::optional<long> outer_step{};  // 1-based index of the failing outer step
  std::optional<double> time{};
};

// Unphysical or non-finite solver state (negative density/temperature, NaN).
// These are the failures the CLI reports with exit code 2.
class InstabilityError : public std::exception {
 public:
  InstabilityError(ErrorKind kind, std::string detail, FailureContext context = {});

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }
  FailureContext& context() noexcept { return context_; }
  const FailureContext& context() const noexcept { return context_; }
  const char* what() const noexcept override;

 private:
  ErrorKind kind_;
  std::string detail_;
  FailureContext context_;
  mutable std::string rendered_;
};

// Configuration text that cannot be read at all.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, int line, int column, const std::string& message);
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

// A readable configuration that violates one or more constraints. Every
// violation is collected before throwing.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

}  // namespace bgkpi
