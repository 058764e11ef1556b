#include "pbtk/model.hpp"

#include "pbtk/errors.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <set>

namespace pbtk {

std::string_view to_string(UtilityModel model) { return model == UtilityModel::score ? "score" : "cost"; }

std::string_view to_string(Scheme scheme) { return scheme == Scheme::citywide ? "citywide" : "districtwise"; }

// ---------------------------------------------------------------------------
// Election

Election::Election(std::vector<Project> projects, std::vector<std::string> voters, std::int64_t budget,
                   std::vector<ScoreEntry> scores, std::vector<std::string> districts)
    : projects_(std::move(projects)),
      voters_(std::move(voters)),
      budget_(budget),
      supporters_(projects_.size()),
      ballots_(voters_.size()),
      total_scores_(projects_.size(), Rational(0)),
      districts_(std::move(districts)) {
  if (budget_ < 0) throw Error(ErrorCode::InvalidArgument, "budget must be non-negative");
  if (!districts_.empty() && districts_.size() != voters_.size()) {
    throw Error(ErrorCode::InvalidArgument, "district list must have one entry per voter");
  }
  for (ProjectIndex p = 0; p < projects_.size(); ++p) {
    if (projects_[p].cost < 1) {
      throw Error(ErrorCode::InvalidArgument, "project '" + projects_[p].id + "' must cost at least 1");
    }
    if (!project_lookup_.emplace(projects_[p].id, p).second) {
      throw Error(ErrorCode::DuplicateId, "duplicate project id '" + projects_[p].id + "'");
    }
  }
  for (VoterIndex i = 0; i < voters_.size(); ++i) {
    if (!voter_lookup_.emplace(voters_[i], i).second) {
      throw Error(ErrorCode::DuplicateId, "duplicate voter id '" + voters_[i] + "'");
    }
  }
  for (auto& entry : scores) {
    if (entry.voter >= voters_.size() || entry.project >= projects_.size()) {
      throw Error(ErrorCode::InvalidArgument, "score entry index out of range");
    }
    if (entry.score < 0) {
      throw Error(ErrorCode::NegativeScore, "negative score from voter '" + voters_[entry.voter] +
                                                "' for project '" + projects_[entry.project].id + "'");
    }
    if (entry.score == 0) continue;
    ballots_[entry.voter].push_back({entry.project, entry.score});
  }
  for (VoterIndex i = 0; i < voters_.size(); ++i) {
    auto& ballot = ballots_[i];
    std::sort(ballot.begin(), ballot.end(),
              [](const BallotItem& a, const BallotItem& b) { return a.project < b.project; });
    for (std::size_t k = 0; k < ballot.size(); ++k) {
      if (k > 0 && ballot[k].project == ballot[k - 1].project) {
        throw Error(ErrorCode::InvalidArgument, "voter '" + voters_[i] + "' scores project '" +
                                                    projects_[ballot[k].project].id + "' twice");
      }
      supporters_[ballot[k].project].push_back({i, ballot[k].score});
      total_scores_[ballot[k].project] += ballot[k].score;
    }
  }
}

std::optional<ProjectIndex> Election::find_project(std::string_view id) const {
  const auto it = project_lookup_.find(std::string(id));
  if (it == project_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<VoterIndex> Election::find_voter(std::string_view id) const {
  const auto it = voter_lookup_.find(std::string(id));
  if (it == voter_lookup_.end()) return std::nullopt;
  return it->second;
}

ProjectIndex Election::project_index(std::string_view id) const {
  if (auto p = find_project(id)) return *p;
  throw Error(ErrorCode::UnknownProject, "unknown project '" + std::string(id) + "'");
}

VoterIndex Election::voter_index(std::string_view id) const {
  if (auto i = find_voter(id)) return *i;
  throw Error(ErrorCode::UnknownVoter, "unknown voter '" + std::string(id) + "'");
}

Rational Election::score(VoterIndex i, ProjectIndex p) const {
  const auto& ballot = ballots_.at(i);
  const auto it = std::lower_bound(ballot.begin(), ballot.end(), p,
                                   [](const BallotItem& item, ProjectIndex q) { return item.project < q; });
  if (it != ballot.end() && it->project == p) return it->score;
  return 0;
}

Rational Election::max_score() const {
  Rational best = 0;
  for (const auto& ballot : ballots_) {
    for (const auto& item : ballot) best = std::max(best, item.score);
  }
  return best;
}

bool Election::is_approval() const {
  return std::all_of(ballots_.begin(), ballots_.end(), [](const auto& ballot) {
    return std::all_of(ballot.begin(), ballot.end(), [](const BallotItem& item) { return item.score == 1; });
  });
}

std::optional<std::string_view> Election::district_of(VoterIndex i) const {
  if (districts_.empty() || districts_.at(i).empty()) return std::nullopt;
  return districts_[i];
}

std::int64_t Election::cost(std::span<const ProjectIndex> projects) const {
  std::int64_t total = 0;
  for (const auto p : projects) total += projects_.at(p).cost;
  return total;
}

std::vector<ScoreEntry> Election::score_entries() const {
  std::vector<ScoreEntry> out;
  for (VoterIndex i = 0; i < ballots_.size(); ++i) {
    for (const auto& item : ballots_[i]) out.push_back({i, item.project, item.score});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Outcome

bool Outcome::contains(ProjectIndex p) const { return std::find(selected.begin(), selected.end(), p) != selected.end(); }

std::vector<ProjectIndex> Outcome::sorted() const {
  auto out = selected;
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> Outcome::ids(const Election& e) const {
  std::vector<std::string> out;
  for (const auto p : sorted()) out.push_back(e.project(p).id);
  return out;
}

Outcome make_outcome(const Election& e, std::vector<ProjectIndex> selected) {
  Outcome out;
  out.selected = std::move(selected);
  out.total_cost = e.cost(out.selected);
  out.funds_used_fraction = e.budget() > 0 ? Rational(out.total_cost, e.budget()) : Rational(0);
  out.funds_used_fraction.canonicalize();
  return out;
}

// ---------------------------------------------------------------------------
// build_election

namespace {

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::optional<GeoPoint> project_gps(const ProjectRow& row) {
  const auto lat = row.extra.find("latitude");
  const auto lon = row.extra.find("longitude");
  if (lat == row.extra.end() || lon == row.extra.end() || lat->second.empty() || lon->second.empty()) {
    return std::nullopt;
  }
  try {
    return GeoPoint{std::stod(lat->second), std::stod(lon->second)};
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

Election build_election(const ElectionFile& file, OrdinalScoring scoring) {
  (void)scoring;  // Borda is the only ordinal scoring function
  std::vector<Project> projects;
  projects.reserve(file.projects.size());
  for (const auto& row : file.projects) {
    projects.push_back({row.project_id, row.cost, row.category.value_or(std::vector<std::string>{}),
                        project_gps(row)});
  }
  std::unordered_map<std::string, ProjectIndex> lookup;
  for (ProjectIndex p = 0; p < projects.size(); ++p) lookup.emplace(projects[p].id, p);

  std::vector<std::string> voters;
  voters.reserve(file.votes.size());
  for (const auto& row : file.votes) voters.push_back(row.voter_id);

  const auto vote_type = file.vote_type();
  if (vote_type == "ordinal") {
    if (const auto* fn = file.meta.find("scoring_fn"); fn != nullptr && lowercase(*fn) != "borda") {
      throw Error(ErrorCode::UnsupportedScoringFn, "unsupported ordinal scoring function '" + *fn + "'");
    }
  } else if (vote_type != "approval" && vote_type != "cumulative" && vote_type != "scoring") {
    throw Error(ErrorCode::UnknownVoteType, "unknown vote_type '" + vote_type + "'");
  }

  Rational default_score = 0;
  if (vote_type == "scoring") {
    if (const auto* d = file.meta.find("default_score")) default_score = parse_decimal(*d);
    if (default_score < 0) throw Error(ErrorCode::NegativeScore, "negative default_score");
  }

  std::vector<ScoreEntry> scores;
  for (VoterIndex i = 0; i < file.votes.size(); ++i) {
    const auto& row = file.votes[i];
    const auto k = row.vote.size();
    if ((vote_type == "cumulative" || vote_type == "scoring") && k > 0) {
      if (!row.points) {
        throw Error(ErrorCode::MissingObligatoryField, "voter '" + row.voter_id + "' has no points");
      }
      if (row.points->size() != k) {
        throw Error(ErrorCode::MalformedRow, "voter '" + row.voter_id + "' points/vote length mismatch");
      }
    }
    std::vector<bool> listed(projects.size(), false);
    for (std::size_t j = 0; j < k; ++j) {
      const auto it = lookup.find(row.vote[j]);
      if (it == lookup.end()) {
        throw Error(ErrorCode::UnknownProject,
                    "voter '" + row.voter_id + "' votes for unknown project '" + row.vote[j] + "'");
      }
      listed[it->second] = true;
      Rational value;
      if (vote_type == "approval") {
        value = 1;
      } else if (vote_type == "ordinal") {
        value = static_cast<long>(k - j);
      } else {
        value = (*row.points)[j];
      }
      scores.push_back({i, it->second, value});
    }
    if (vote_type == "scoring" && default_score > 0) {
      for (ProjectIndex p = 0; p < projects.size(); ++p) {
        if (!listed[p]) scores.push_back({i, p, default_score});
      }
    }
  }
  return Election(std::move(projects), std::move(voters), file.budget(), std::move(scores));
}

// ---------------------------------------------------------------------------
// utilities

Rational project_utility(const Election& e, VoterIndex i, ProjectIndex p, UtilityModel model) {
  const Rational s = e.score(i, p);
  return model == UtilityModel::score ? s : Rational(s * e.project(p).cost);
}

Rational utility(const Election& e, VoterIndex i, std::span<const ProjectIndex> projects, UtilityModel model) {
  Rational total = 0;
  for (const auto p : projects) total += project_utility(e, i, p, model);
  return total;
}

Rational utility(const Election& e, std::string_view voter_id, std::span<const std::string> project_ids,
                 UtilityModel model) {
  const auto i = e.voter_index(voter_id);
  std::vector<ProjectIndex> projects;
  for (const auto& id : project_ids) projects.push_back(e.project_index(id));
  return utility(e, i, projects, model);
}

Election to_approval(const Election& e) {
  auto scores = e.score_entries();
  for (auto& s : scores) s.score = 1;
  return Election(e.projects(), e.voters(), e.budget(), std::move(scores), e.districts());
}

// ---------------------------------------------------------------------------
// schemes

SchemeElection assemble_scheme(std::span<const ElectionFile> files, Scheme scheme, OrdinalScoring scoring) {
  if (files.empty()) throw Error(ErrorCode::InvalidArgument, "no election files given");
  const auto unit = files.front().unit();
  const auto instance = files.front().instance();
  std::set<std::string> labels;
  for (const auto& f : files) {
    if (f.unit() != unit || f.instance() != instance) {
      throw Error(ErrorCode::MixedUnits, "files mix '" + unit + "/" + instance + "' with '" + f.unit() + "/" +
                                             f.instance() + "'");
    }
    const auto label = f.subunit().value_or("");
    if (!labels.insert(label).second) {
      throw Error(ErrorCode::DuplicateSubunit,
                  label.empty() ? "more than one file without subunit" : "duplicate subunit '" + label + "'");
    }
  }

  // Citywide-projects file (no subunit) first, then districts by name.
  std::vector<const ElectionFile*> ordered;
  for (const auto& f : files) ordered.push_back(&f);
  std::sort(ordered.begin(), ordered.end(), [](const ElectionFile* a, const ElectionFile* b) {
    return a->subunit().value_or("") < b->subunit().value_or("");
  });

  SchemeElection out;
  out.scheme = scheme;
  out.unit = unit;
  out.instance = instance;

  const bool namespaced = ordered.size() > 1;
  std::vector<Project> merged_projects;
  std::vector<std::string> merged_voters;
  std::vector<std::string> merged_districts;
  std::unordered_map<std::string, VoterIndex> voter_lookup;
  std::vector<ScoreEntry> merged_scores;
  std::int64_t merged_budget = 0;
  bool any_district = false;

  for (const auto* file : ordered) {
    const auto subunit = file->subunit();
    const std::string label = subunit.value_or("citywide");
    Election part = build_election(*file, scoring);
    if (namespaced) {
      auto projects = part.projects();
      for (auto& p : projects) p.id = label + "/" + p.id;
      part = Election(std::move(projects), part.voters(), part.budget(), part.score_entries());
    }

    SubElection sub;
    sub.label = label;
    const auto project_offset = merged_projects.size();
    for (ProjectIndex p = 0; p < part.num_projects(); ++p) {
      merged_projects.push_back(part.project(p));
      sub.merged_project.push_back(project_offset + p);
    }
    for (VoterIndex i = 0; i < part.num_voters(); ++i) {
      const auto& id = part.voter_id(i);
      auto [it, inserted] = voter_lookup.emplace(id, merged_voters.size());
      if (inserted) {
        merged_voters.push_back(id);
        merged_districts.emplace_back();
      }
      if (subunit && merged_districts[it->second].empty()) {
        merged_districts[it->second] = *subunit;
        any_district = true;
      }
      sub.merged_voter.push_back(it->second);
    }
    for (auto entry : part.score_entries()) {
      merged_scores.push_back({sub.merged_voter[entry.voter], sub.merged_project[entry.project], entry.score});
    }
    merged_budget += part.budget();
    sub.election = std::move(part);
    out.sub_elections.push_back(std::move(sub));
  }

  out.merged = Election(std::move(merged_projects), std::move(merged_voters), merged_budget,
                        std::move(merged_scores), any_district ? std::move(merged_districts) : std::vector<std::string>{});
  return out;
}

Outcome combine_outcomes(const SchemeElection& scheme, std::span<const Outcome> parts) {
  if (parts.size() != scheme.sub_elections.size()) {
    throw Error(ErrorCode::InvalidArgument, "need one outcome per sub-election");
  }
  std::vector<ProjectIndex> selected;
  std::vector<Purchase> purchases;
  bool any_ledger = false;
  bool epsilon = false;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const auto& sub = scheme.sub_elections[k];
    for (const auto p : parts[k].selected) selected.push_back(sub.merged_project.at(p));
    if (parts[k].purchases) {
      any_ledger = true;
      for (const auto& purchase : *parts[k].purchases) {
        Purchase mapped{sub.merged_project.at(purchase.project), purchase.alpha, {}};
        for (const auto& [voter, amount] : purchase.payments) {
          mapped.payments.emplace_back(sub.merged_voter.at(voter), amount);
        }
        std::sort(mapped.payments.begin(), mapped.payments.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        purchases.push_back(std::move(mapped));
      }
    }
    epsilon = epsilon || parts[k].epsilon_payments;
  }
  Outcome out = make_outcome(scheme.merged, std::move(selected));
  if (any_ledger) out.purchases = std::move(purchases);
  out.epsilon_payments = epsilon;
  return out;
}

SchemeElection to_approval(const SchemeElection& scheme) {
  SchemeElection out;
  out.scheme = scheme.scheme;
  out.unit = scheme.unit;
  out.instance = scheme.instance;
  for (const auto& sub : scheme.sub_elections) {
    out.sub_elections.push_back({sub.label, to_approval(sub.election), sub.merged_project, sub.merged_voter});
  }
  out.merged = to_approval(scheme.merged);
  return out;
}

}  // namespace pbtk
