#pragma once

#include "pbtk/rational.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pbtk {

/// META section: key/value pairs in file order.
class MetaMap {
 public:
  using Entry = std::pair<std::string, std::string>;

  const std::string* find(std::string_view key) const;
  bool contains(std::string_view key) const { return find(key) != nullptr; }
  /// Inserts or overwrites; new keys are appended.
  void set(std::string key, std::string value);
  bool erase(std::string_view key);

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  bool operator==(const MetaMap&) const = default;

 private:
  std::vector<Entry> entries_;
};

struct ProjectRow {
  std::string project_id;
  std::int64_t cost = 0;
  std::optional<std::string> name;
  std::optional<std::vector<std::string>> category;
  std::optional<std::vector<std::string>> target;
  std::map<std::string, std::string> extra;

  bool operator==(const ProjectRow&) const = default;
};

struct VoteRow {
  std::string voter_id;
  std::vector<std::string> vote;
  std::optional<std::vector<Rational>> points;
  std::optional<std::string> age;
  std::optional<std::string> sex;
  std::optional<std::string> voting_method;
  std::map<std::string, std::string> extra;

  bool operator==(const VoteRow&) const = default;
};

/// In-memory image of one `.pb` file. Column lists record the header order
/// of the PROJECTS and VOTES sections so serialization reproduces it.
struct ElectionFile {
  MetaMap meta;
  std::vector<std::string> project_columns;
  std::vector<ProjectRow> projects;
  std::vector<std::string> vote_columns;
  std::vector<VoteRow> votes;
  std::string source_name;

  std::string unit() const;
  std::string instance() const;
  std::optional<std::string> subunit() const;
  std::string vote_type() const;
  std::int64_t budget() const;

  /// Field-by-field equality; source_name is diagnostic only and ignored.
  bool operator==(const ElectionFile& other) const;
};

enum class Severity { warning, error };

struct Diagnostic {
  Severity severity = Severity::error;
  std::string code;
  std::string location;
  std::string message;

  bool operator==(const Diagnostic&) const = default;
};

struct ValidationReport {
  std::vector<Diagnostic> diagnostics;

  bool is_valid() const;
  bool has(std::string_view code) const;
  std::size_t count(Severity severity) const;
};

/// Ballot constraints of one file with the format's documented defaults
/// applied. An absent optional bound means unbounded.
struct BallotConstraints {
  std::size_t min_length = 1;
  std::size_t max_length = 0;
  Rational min_sum_cost = 0;
  std::optional<Rational> max_sum_cost;
  std::optional<Rational> min_points;
  std::optional<Rational> max_points;
  Rational min_sum_points = 0;
  std::optional<Rational> max_sum_points;
  std::string scoring_fn = "Borda";
  Rational default_score = 0;

  bool operator==(const BallotConstraints&) const = default;
};

inline constexpr std::string_view kVoteTypes[] = {"approval", "ordinal", "cumulative", "scoring"};
inline constexpr std::string_view kObligatoryMetaKeys[] = {
    "description", "country", "unit", "instance", "num_projects",
    "num_votes",   "budget",  "vote_type", "rule"};

/// Parses a complete `.pb` file body. Throws pbtk::Error carrying the
/// offending line number.
ElectionFile parse_pb(std::string_view text, std::string source_name = {});

/// Reads and parses a file from disk. I/O failures throw std::runtime_error.
ElectionFile read_pb_file(const std::string& path);

/// Applies per-vote-type defaults. Throws pbtk::Error on unparsable values or
/// on a missing obligatory constraint (max_sum_points for cumulative ballots).
BallotConstraints ballot_constraints(const ElectionFile& file);

/// Checks counts, identifiers and ballot constraints. Never throws.
ValidationReport validate(const ElectionFile& file);

std::string serialize(const ElectionFile& file);

}  // namespace pbtk
