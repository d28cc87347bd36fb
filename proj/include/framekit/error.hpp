#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace framekit {

enum class ErrorCode {
  InvalidArgument,
  NotHermitian,
  NotPSD,
  NotAFrame,
  BadBounds,
  ZeroK,
  NotCertified,
  OutOfRange,
  DimensionMismatch,
  NotPositive,
  CommutationViolated,
  ShapeMismatch,
  ConditionFailed,
  DegenerateProjector,
  SpanCollapse,
  DegenerateDraw,
  BadRank,
};

std::string_view to_string(ErrorCode code);

// Every failure the library reports carries one of the codes above so the CLI
// can map it onto an exit status and callers can branch without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace framekit
