#pragma once

#include <stdexcept>
#include <string>

namespace turnsolve {

enum class Errc {
  EmptyInstance,
  Disconnected,
  DuplicatePixel,
  SubsetNotContained,
  NegativePenalty,
  Unreachable,
  NoLoopWitness,
  OddVertexCount,
  NoPerfectMatching,
  TooLarge,
  SizeLimitExceeded,
  TimeLimitExceeded,
  Infeasible,
  NoViolation,
  NoWitness,
  InconsistentPath,
  NumericFailure,
  PointInsideObstacle,
  DegeneratePolygon,
  ParamOutOfRange,
  SyntaxError,
};

const char* errc_name(Errc code);

/// Error type carrying a machine-checkable code next to its message.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace turnsolve
