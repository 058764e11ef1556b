#pragma once

#include "pbtk/pbformat.hpp"
#include "pbtk/rational.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pbtk {

using ProjectIndex = std::size_t;
using VoterIndex = std::size_t;

struct GeoPoint {
  double latitude = 0.0;
  double longitude = 0.0;

  bool operator==(const GeoPoint&) const = default;
};

struct Project {
  std::string id;
  std::int64_t cost = 0;
  std::vector<std::string> tags;
  std::optional<GeoPoint> gps;

  bool operator==(const Project&) const = default;
};

/// One (voter, project) score given by index, used to construct an Election.
struct ScoreEntry {
  VoterIndex voter;
  ProjectIndex project;
  Rational score;
};

enum class UtilityModel { score, cost };

std::string_view to_string(UtilityModel model);

/// An election instance: projects with costs, voters, a budget and a sparse
/// score table holding only strictly positive scores. Immutable once built.
class Election {
 public:
  struct Support {
    VoterIndex voter;
    Rational score;
  };
  struct BallotItem {
    ProjectIndex project;
    Rational score;
  };

  Election() = default;

  /// Zero scores are dropped; negative scores, duplicate (voter, project)
  /// pairs, duplicate ids, non-positive costs and out-of-range indices throw.
  /// `districts` is either empty or holds one entry per voter, where an empty
  /// string means the voter's district is unknown.
  Election(std::vector<Project> projects, std::vector<std::string> voters, std::int64_t budget,
           std::vector<ScoreEntry> scores, std::vector<std::string> districts = {});

  std::size_t num_projects() const { return projects_.size(); }
  std::size_t num_voters() const { return voters_.size(); }
  std::int64_t budget() const { return budget_; }

  const Project& project(ProjectIndex p) const { return projects_.at(p); }
  const std::vector<Project>& projects() const { return projects_; }
  const std::string& voter_id(VoterIndex i) const { return voters_.at(i); }
  const std::vector<std::string>& voters() const { return voters_; }

  std::optional<ProjectIndex> find_project(std::string_view id) const;
  std::optional<VoterIndex> find_voter(std::string_view id) const;
  /// Throw UnknownProject / UnknownVoter.
  ProjectIndex project_index(std::string_view id) const;
  VoterIndex voter_index(std::string_view id) const;

  /// Voters with a positive score for `p`, ordered by voter index.
  std::span<const Support> supporters(ProjectIndex p) const { return supporters_.at(p); }
  /// Projects the voter scored positively, ordered by project index.
  std::span<const BallotItem> ballot(VoterIndex i) const { return ballots_.at(i); }

  /// s_i(p); zero when absent.
  Rational score(VoterIndex i, ProjectIndex p) const;
  const Rational& total_score(ProjectIndex p) const { return total_scores_.at(p); }
  Rational max_score() const;
  bool is_approval() const;
  bool has_districts() const { return !districts_.empty(); }
  const std::vector<std::string>& districts() const { return districts_; }
  std::optional<std::string_view> district_of(VoterIndex i) const;

  std::int64_t cost(std::span<const ProjectIndex> projects) const;

  /// All stored scores as index triples, ordered by (voter, project).
  std::vector<ScoreEntry> score_entries() const;

 private:
  std::vector<Project> projects_;
  std::vector<std::string> voters_;
  std::int64_t budget_ = 0;
  std::vector<std::vector<Support>> supporters_;
  std::vector<std::vector<BallotItem>> ballots_;
  std::vector<Rational> total_scores_;
  std::vector<std::string> districts_;
  std::unordered_map<std::string, ProjectIndex> project_lookup_;
  std::unordered_map<std::string, VoterIndex> voter_lookup_;
};

/// One project bought through the equal-shares payment ledger.
struct Purchase {
  ProjectIndex project;
  Rational alpha;
  std::vector<std::pair<VoterIndex, Rational>> payments;
};

/// A selected project set. `selected` is in selection order. `purchases`
/// is present for priceable rules and covers the projects funded through
/// the payment ledger.
struct Outcome {
  std::vector<ProjectIndex> selected;
  std::optional<std::vector<Purchase>> purchases;
  std::int64_t total_cost = 0;
  Rational funds_used_fraction = 0;
  /// Per-voter starting endowment of the equal-shares run that produced the
  /// ledger, when one was involved.
  std::optional<Rational> endowment;
  /// Set when the ledger contains payments from voters whose original score
  /// for the project was zero (utility-tweaking completion).
  bool epsilon_payments = false;

  bool contains(ProjectIndex p) const;
  std::vector<ProjectIndex> sorted() const;
  std::vector<std::string> ids(const Election& e) const;
};

/// Builds an Outcome with cost totals computed against `e`.
Outcome make_outcome(const Election& e, std::vector<ProjectIndex> selected);

enum class OrdinalScoring { borda };

/// Derives scores from ballots: approval 1 per listed project, cumulative and
/// scoring the given points (unlisted scoring projects get default_score),
/// ordinal ballot-relative Borda (k - j + 1 for position j of k).
Election build_election(const ElectionFile& file, OrdinalScoring scoring = OrdinalScoring::borda);

/// s_i(p) under the model: score, or score times cost.
Rational project_utility(const Election& e, VoterIndex i, ProjectIndex p, UtilityModel model);
Rational utility(const Election& e, VoterIndex i, std::span<const ProjectIndex> projects, UtilityModel model);
Rational utility(const Election& e, std::string_view voter_id, std::span<const std::string> project_ids,
                 UtilityModel model);

/// Every stored score becomes 1.
Election to_approval(const Election& e);

enum class Scheme { citywide, districtwise };

std::string_view to_string(Scheme scheme);

struct SubElection {
  std::string label;
  Election election;
  /// Index maps into the merged election.
  std::vector<ProjectIndex> merged_project;
  std::vector<VoterIndex> merged_voter;
};

/// All elections of one unit and instance. `merged` pools every project and
/// voter of the parts and is the election metrics are evaluated against
/// under both schemes; districtwise rules run on each part separately.
struct SchemeElection {
  Scheme scheme = Scheme::citywide;
  std::string unit;
  std::string instance;
  std::vector<SubElection> sub_elections;
  Election merged;
};

SchemeElection assemble_scheme(std::span<const ElectionFile> files, Scheme scheme,
                               OrdinalScoring scoring = OrdinalScoring::borda);

/// Maps per-part outcomes (one per sub-election, same order) onto the merged
/// election as their union.
Outcome combine_outcomes(const SchemeElection& scheme, std::span<const Outcome> parts);

SchemeElection to_approval(const SchemeElection& scheme);

}  // namespace pbtk
