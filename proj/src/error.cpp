#include "bgkpi/error.hpp"

#include <sstream>

namespace bgkpi {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonPositiveInput: return "NonPositiveInput";
    case ErrorKind::NonPositiveDensity: return "NonPositiveDensity";
    case ErrorKind::NonPositiveTemperature: return "NonPositiveTemperature";
    case ErrorKind::StepUnstable: return "StepUnstable";
    case ErrorKind::GridTooSmall: return "GridTooSmall";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorKind::InvalidTableau: return "InvalidTableau";
    case ErrorKind::InvalidParameters: return "InvalidParameters";
    case ErrorKind::EigensolverFailure: return "EigensolverFailure";
    case ErrorKind::AdviceRejected: return "AdviceRejected";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

InstabilityError::InstabilityError(ErrorKind kind, std::string detail, FailureContext context)
    : kind_(kind), detail_(std::move(detail)), context_(context) {}

const char* InstabilityError::what() const noexcept {
  try {
    std::ostringstream os;
    os.precision(10);
    os << to_string(kind_) << ": " << detail_;
    if (context_.time) os << " [t=" << *context_.time << "]";
    if (context_.outer_step) os << " [step=" << *context_.outer_step << "]";
    if (context_.stage) os << " [stage=" << *context_.stage << "]";
    if (context_.inner_step) os << " [inner=" << *context_.inner_step << "]";
    if (context_.cell) os << " [cell=" << *context_.cell << "]";
    rendered_ = os.str();
    return rendered_.c_str();
  } catch (...) {
    return detail_.c_str();
  }
}

ParseError::ParseError(const std::string& source, int line, int column, const std::string& message)
    : std::runtime_error(source + ":" + std::to_string(line) + ":" + std::to_string(column) +
                         ": " + message),
      line_(line),
      column_(column) {}

namespace {
std::string join_problems(const std::vector<std::string>& problems) {
  std::string out = "invalid configuration";
  for (const auto& p : problems) out += "\n  - " + p;
  return out;
}
}  // namespace

ValidationError::ValidationError(std::vector<std::string> problems)
    : std::runtime_error(join_problems(problems)), problems_(std::move(problems)) {}

}  // namespace bgkpi
