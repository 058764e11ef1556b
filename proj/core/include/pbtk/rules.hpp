#pragma once

#include "pbtk/model.hpp"
#include "pbtk/rational.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pbtk {

enum class RuleKind { utilitarian_greedy, equal_shares };

/// Ways of making equal shares exhaustive.
enum class Completion {
  none,
  utilitarian,       // U: greedy top-up with the leftover budget
  epsilon,           // Eps: every zero score raised to a small epsilon
  add1,              // Add1: raise the per-voter endowment one unit at a time
  add1_utilitarian,  // Add1U: Add1 followed by U
};

/// Ties in the greedy ratio and in minimal alpha go to the cheaper project,
/// then to the lexicographically smaller project id.
enum class TieBreak { lower_cost_then_id };

struct RuleSpec {
  RuleKind rule = RuleKind::utilitarian_greedy;
  UtilityModel utility = UtilityModel::cost;
  Completion completion = Completion::none;
  TieBreak tie_break = TieBreak::lower_cost_then_id;

  /// Short name such as "ug-cost" or "mes-score-add1u".
  std::string name() const;
  /// Inverse of name(). Throws pbtk::Error(InvalidArgument).
  static RuleSpec parse(std::string_view name);
  /// Throws pbtk::Error(InvalidArgument) when a completion is attached to
  /// the greedy rule.
  void check() const;

  bool operator==(const RuleSpec&) const = default;
};

std::string_view to_string(Completion completion);
Completion parse_completion(std::string_view text);

/// Remaining per-voter endowments of an equal-shares run.
class BudgetLedger {
 public:
  BudgetLedger(std::size_t voters, const Rational& endowment);

  const Rational& remaining(VoterIndex i) const { return remaining_.at(i); }
  const Rational& initial() const { return initial_; }
  std::size_t size() const { return remaining_.size(); }
  /// Throws pbtk::Error(InvalidArgument) if the payment exceeds what is left.
  void pay(VoterIndex i, const Rational& amount);

 private:
  std::vector<Rational> remaining_;
  Rational initial_;
};

/// Minimal alpha with sum_i min(b_i, alpha * u_i(p)) = cost(p), and the
/// resulting payments of every supporter (ordered by voter index).
struct Affordability {
  Rational alpha;
  std::vector<std::pair<VoterIndex, Rational>> payments;
};

/// nullopt when the supporters' remaining endowments cannot cover the cost
/// (including projects nobody supports).
std::optional<Affordability> alpha_affordability(const Election& e, ProjectIndex p, const BudgetLedger& ledger,
                                                 UtilityModel model);

/// Greedy by descending total-utility-to-cost ratio. Projects that do not fit
/// are dropped for good. `preselected` projects are kept, excluded from the
/// candidates and their cost is deducted from the working budget, which is
/// `budget_override` when given and the election budget otherwise.
Outcome utilitarian_greedy(const Election& e, UtilityModel model, std::optional<std::int64_t> budget_override = {},
                           std::span<const ProjectIndex> preselected = {});

/// Method of Equal Shares without completion. The outcome may cost more than
/// the election budget when `endowment` exceeds b/n.
Outcome equal_shares_core(const Election& e, UtilityModel model, const Rational& endowment);

Outcome complete_utilitarian(const Election& e, UtilityModel model, const Outcome& partial);

/// 1 / (1 + m * n * max score).
Rational epsilon_score(const Election& e);
/// Copy of `e` where every missing (voter, project) score is epsilon_score(e).
Election epsilon_tweak(const Election& e);
Outcome complete_eps(const Election& e, UtilityModel model);

Outcome complete_add1(const Election& e, UtilityModel model, bool with_final_ug);

/// True iff no unselected project fits in budget - cost(W).
bool is_exhaustive(const Election& e, std::span<const ProjectIndex> selected,
                   std::optional<std::int64_t> budget = {});

Outcome run_rule(const Election& e, const RuleSpec& spec);

/// Citywide runs the rule on the merged election; districtwise runs it on
/// every part and combines the outcomes.
Outcome run_rule(const SchemeElection& scheme, const RuleSpec& spec);

}  // namespace pbtk
