#pragma once

#include "pbtk/model.hpp"
#include "pbtk/rational.hpp"

#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pbtk {

/// Named metric values for one outcome. Exact values go to `scalars`; values
/// that involve a square root go to `reals`.
struct MetricsReport {
  std::map<std::string, Rational> scalars;
  std::map<std::string, double> reals;
  std::map<std::string, std::vector<std::pair<std::string, Rational>>> vectors;
};

struct PairReport {
  Rational dominance_1_over_2 = 0;
  Rational dominance_2_over_1 = 0;
  Rational improvement_margin = 0;

  bool operator==(const PairReport&) const = default;
};

struct TagShares {
  std::map<std::string, Rational> vote_shares;
  std::map<std::string, Rational> spending_shares;
  Rational l2_squared = 0;
  double l2 = 0.0;
  /// Voters skipped in the vote shares because they support no project.
  std::size_t empty_ballots = 0;
};

inline constexpr std::string_view kUntaggedTag = "untagged";

/// u_i(W) for every voter.
std::vector<Rational> voter_utilities(const Election& e, std::span<const ProjectIndex> selected, UtilityModel model);

Rational average_utility(const Election& e, std::span<const ProjectIndex> selected, UtilityModel model);

/// Strict per-voter comparison of u_i(W1) against u_i(W2).
PairReport dominance_pair(const Election& e, std::span<const ProjectIndex> first,
                          std::span<const ProjectIndex> second, UtilityModel model);

/// Fraction of voters supporting none of the selected projects.
Rational exclusion_ratio(const Election& e, std::span<const ProjectIndex> selected);

/// share_i(W) = sum over p in W of s_i(p) / sum_j s_j(p) * cost(p). Throws
/// UnsupportedSelectedProject when a selected project has zero total score.
std::vector<Rational> voter_shares(const Election& e, std::span<const ProjectIndex> selected);

/// (1/n) sum_i |share_i - b/n| * n/b.
Rational power_inequality(const Election& e, std::span<const ProjectIndex> selected);

/// Mean absolute difference over twice the mean; 0 for an all-zero vector.
Rational gini(std::span<const Rational> values);

/// Mean relative deviation of district spending from voter-proportional
/// spending. Voters without a known district are left out. Throws
/// NoDistricts when no voter has one.
Rational budget_dispersion(const Election& e, std::span<const ProjectIndex> selected);

/// cost(W_appr ∩ W_card) / cost(W_card); 1 when W_card is empty.
Rational robustness_ratio(const Election& e, std::span<const ProjectIndex> cardinal,
                          std::span<const ProjectIndex> approval);
/// Runs `rule` on `e` and on its approval conversion and compares the results.
Rational robustness_ratio(const Election& e, const std::function<Outcome(const Election&)>& rule);

/// Per-tag vote shares over supported projects, per-tag spending shares of W,
/// and their Euclidean distance over the union of tags. Projects without tags
/// count under kUntaggedTag.
TagShares tag_shares(const Election& e, std::span<const ProjectIndex> selected);

Rational funds_used(const Election& e, std::span<const ProjectIndex> selected);

}  // namespace pbtk
