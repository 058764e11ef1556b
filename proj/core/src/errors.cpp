#include "pbtk/errors.hpp"

namespace pbtk {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingSection: return "MissingSection";
    case ErrorCode::MissingObligatoryField: return "MissingObligatoryField";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::UnknownVoteType: return "UnknownVoteType";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::InvalidNumber: return "InvalidNumber";
    case ErrorCode::UnsupportedScoringFn: return "UnsupportedScoringFn";
    case ErrorCode::NegativeScore: return "NegativeScore";
    case ErrorCode::UnknownVoter: return "UnknownVoter";
    case ErrorCode::UnknownProject: return "UnknownProject";
    case ErrorCode::MixedUnits: return "MixedUnits";
    case ErrorCode::DuplicateSubunit: return "DuplicateSubunit";
    case ErrorCode::UnsupportedSelectedProject: return "UnsupportedSelectedProject";
    case ErrorCode::NoDistricts: return "NoDistricts";
    case ErrorCode::TooFewProjects: return "TooFewProjects";
    case ErrorCode::NoPositions: return "NoPositions";
    case ErrorCode::NoTags: return "NoTags";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

std::string decorate(ErrorCode code, const std::string& message, std::size_t line) {
  std::string out(to_string(code));
  if (line != 0) out += " (line " + std::to_string(line) + ")";
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, std::size_t line)
    : std::runtime_error(decorate(code, message, line)), code_(code), line_(line) {}

}  // namespace pbtk
