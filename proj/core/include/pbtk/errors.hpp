#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pbtk {

enum class ErrorCode {
  MissingSection,
  MissingObligatoryField,
  DuplicateId,
  UnknownVoteType,
  MalformedRow,
  InvalidNumber,
  UnsupportedScoringFn,
  NegativeScore,
  UnknownVoter,
  UnknownProject,
  MixedUnits,
  DuplicateSubunit,
  UnsupportedSelectedProject,
  NoDistricts,
  TooFewProjects,
  NoPositions,
  NoTags,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

/// Domain error raised by the library. `line` is 1-based and 0 when the
/// error is not tied to a line of input text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::size_t line = 0);

  ErrorCode code() const noexcept { return code_; }
  std::size_t line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  std::size_t line_;
};

}  // namespace pbtk
