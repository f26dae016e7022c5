#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ogc {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  EmptySet,
  Unbounded,
  NoConvergence,
  GradientNotFinite,
  SeriesOutOfRange,
  InfeasibleLimits,
  MissingAdvertisement,
  InfeasibleStep,
  ParseError,
  SchemaError,
  SeriesLengthError,
  IoError,
};

std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by iterative projections that exhaust their budget. Carries the last
// iterate and the distance of that iterate to every member set.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& message, std::vector<double> last_iterate,
                   std::vector<double> violations)
      : Error(ErrorCode::NoConvergence, message),
        last_iterate_(std::move(last_iterate)),
        violations_(std::move(violations)) {}

  const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }
  const std::vector<double>& violations() const noexcept { return violations_; }

 private:
  std::vector<double> last_iterate_;
  std::vector<double> violations_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace ogc
