#include "turnsolve/error.hpp"

namespace turnsolve {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::EmptyInstance: return "EmptyInstance";
    case Errc::Disconnected: return "Disconnected";
    case Errc::DuplicatePixel: return "DuplicatePixel";
    case Errc::SubsetNotContained: return "SubsetNotContained";
    case Errc::NegativePenalty: return "NegativePenalty";
    case Errc::Unreachable: return "Unreachable";
    case Errc::NoLoopWitness: return "NoLoopWitness";
    case Errc::OddVertexCount: return "OddVertexCount";
    case Errc::NoPerfectMatching: return "NoPerfectMatching";
    case Errc::TooLarge: return "TooLarge";
    case Errc::SizeLimitExceeded: return "SizeLimitExceeded";
    case Errc::TimeLimitExceeded: return "TimeLimitExceeded";
    case Errc::Infeasible: return "Infeasible";
    case Errc::NoViolation: return "NoViolation";
    case Errc::NoWitness: return "NoWitness";
    case Errc::InconsistentPath: return "InconsistentPath";
    case Errc::NumericFailure: return "NumericFailure";
    case Errc::PointInsideObstacle: return "PointInsideObstacle";
    case Errc::DegeneratePolygon: return "DegeneratePolygon";
    case Errc::ParamOutOfRange: return "ParamOutOfRange";
    case Errc::SyntaxError: return "SyntaxError";
  }
  return "Unknown";
}

}  // namespace turnsolve
