#include "pbtk/rules.hpp"

#include "pbtk/errors.hpp"

#include <algorithm>
#include <set>

namespace pbtk {

// ---------------------------------------------------------------------------
// RuleSpec

std::string_view to_string(Completion completion) {
  switch (completion) {
    case Completion::none: return "none";
    case Completion::utilitarian: return "u";
    case Completion::epsilon: return "eps";
    case Completion::add1: return "add1";
    case Completion::add1_utilitarian: return "add1u";
  }
  return "none";
}

Completion parse_completion(std::string_view text) {
  if (text == "none") return Completion::none;
  if (text == "u") return Completion::utilitarian;
  if (text == "eps") return Completion::epsilon;
  if (text == "add1") return Completion::add1;
  if (text == "add1u") return Completion::add1_utilitarian;
  throw Error(ErrorCode::InvalidArgument, "unknown completion '" + std::string(text) + "'");
}

std::string RuleSpec::name() const {
  std::string out = rule == RuleKind::utilitarian_greedy ? "ug" : "mes";
  out += "-";
  out += to_string(utility);
  if (completion != Completion::none) {
    out += "-";
    out += to_string(completion);
  }
  return out;
}

RuleSpec RuleSpec::parse(std::string_view name) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = name.find('-', start);
    parts.emplace_back(name.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  if (parts.size() < 2 || parts.size() > 3) {
    throw Error(ErrorCode::InvalidArgument, "malformed rule name '" + std::string(name) + "'");
  }
  RuleSpec spec;
  if (parts[0] == "ug") spec.rule = RuleKind::utilitarian_greedy;
  else if (parts[0] == "mes") spec.rule = RuleKind::equal_shares;
  else throw Error(ErrorCode::InvalidArgument, "unknown rule '" + parts[0] + "'");
  if (parts[1] == "score") spec.utility = UtilityModel::score;
  else if (parts[1] == "cost") spec.utility = UtilityModel::cost;
  else throw Error(ErrorCode::InvalidArgument, "unknown utility model '" + parts[1] + "'");
  if (parts.size() == 3) spec.completion = parse_completion(parts[2]);
  spec.check();
  return spec;
}

void RuleSpec::check() const {
  if (rule == RuleKind::utilitarian_greedy && completion != Completion::none) {
    throw Error(ErrorCode::InvalidArgument, "the greedy rule takes no completion");
  }
}

// ---------------------------------------------------------------------------
// BudgetLedger

BudgetLedger::BudgetLedger(std::size_t voters, const Rational& endowment)
    : remaining_(voters, endowment), initial_(endowment) {
  if (endowment < 0) throw Error(ErrorCode::InvalidArgument, "endowment must be non-negative");
}

void BudgetLedger::pay(VoterIndex i, const Rational& amount) {
  auto& left = remaining_.at(i);
  if (amount < 0 || amount > left) {
    throw Error(ErrorCode::InvalidArgument, "payment exceeds remaining endowment");
  }
  left -= amount;
}

// ---------------------------------------------------------------------------
// affordability

namespace {

Rational utility_of(const Election& e, ProjectIndex p, const Rational& score, UtilityModel model) {
  return model == UtilityModel::score ? score : Rational(score * e.project(p).cost);
}

}  // namespace

std::optional<Affordability> alpha_affordability(const Election& e, ProjectIndex p, const BudgetLedger& ledger,
                                                 UtilityModel model) {
  struct Candidate {
    VoterIndex voter;
    Rational utility;
    Rational budget;
    Rational ratio;
  };
  const Rational cost = e.project(p).cost;
  std::vector<Candidate> candidates;
  Rational available = 0;
  Rational total_utility = 0;
  for (const auto& s : e.supporters(p)) {
    Candidate c{s.voter, utility_of(e, p, s.score, model), ledger.remaining(s.voter), 0};
    c.ratio = c.budget / c.utility;
    available += c.budget;
    total_utility += c.utility;
    candidates.push_back(std::move(c));
  }
  if (candidates.empty() || available < cost) return std::nullopt;

  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.ratio != b.ratio) return a.ratio < b.ratio;
    return a.voter < b.voter;
  });

  // Scan breakpoints b_i / u_i: voters below the running alpha pay their whole
  // remaining endowment, everybody else pays alpha * u_i.
  Rational paid = 0;
  Rational alpha;
  for (const auto& c : candidates) {
    alpha = (cost - paid) / total_utility;
    if (alpha <= c.ratio) break;
    paid += c.budget;
    total_utility -= c.utility;
  }

  Affordability out{alpha, {}};
  out.payments.reserve(candidates.size());
  for (const auto& c : candidates) {
    Rational share = alpha * c.utility;
    out.payments.emplace_back(c.voter, share < c.budget ? share : c.budget);
  }
  std::sort(out.payments.begin(), out.payments.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

// ---------------------------------------------------------------------------
// Utilitarian Greedy

Outcome utilitarian_greedy(const Election& e, UtilityModel model, std::optional<std::int64_t> budget_override,
                           std::span<const ProjectIndex> preselected) {
  std::vector<bool> taken(e.num_projects(), false);
  for (const auto p : preselected) taken.at(p) = true;
  std::int64_t remaining = budget_override.value_or(e.budget()) - e.cost(preselected);

  struct Candidate {
    ProjectIndex project;
    Rational total_utility;
    std::int64_t cost;
  };
  std::vector<Candidate> candidates;
  for (ProjectIndex p = 0; p < e.num_projects(); ++p) {
    if (taken[p]) continue;
    const auto cost = e.project(p).cost;
    candidates.push_back({p, model == UtilityModel::score ? e.total_score(p) : Rational(e.total_score(p) * cost), cost});
  }
  std::sort(candidates.begin(), candidates.end(), [&](const Candidate& a, const Candidate& b) {
    const Rational lhs = a.total_utility * b.cost;
    const Rational rhs = b.total_utility * a.cost;
    if (lhs != rhs) return lhs > rhs;
    if (a.cost != b.cost) return a.cost < b.cost;
    return e.project(a.project).id < e.project(b.project).id;
  });

  std::vector<ProjectIndex> selected(preselected.begin(), preselected.end());
  for (const auto& c : candidates) {
    if (c.cost <= remaining) {
      selected.push_back(c.project);
      remaining -= c.cost;
    }
  }
  return make_outcome(e, std::move(selected));
}

// ---------------------------------------------------------------------------
// Method of Equal Shares

Outcome equal_shares_core(const Election& e, UtilityModel model, const Rational& endowment) {
  if (endowment < 0) throw Error(ErrorCode::InvalidArgument, "endowment must be non-negative");
  BudgetLedger ledger(e.num_voters(), endowment);

  // Affordability only gets worse as endowments shrink, so a stale alpha is a
  // lower bound on the current one. Keys are (alpha, cost, id); the smallest
  // stale key is re-evaluated until it stays ahead of every other stale key.
  struct Key {
    Rational alpha;
    std::int64_t cost;
    const std::string* id;
    ProjectIndex project;
    bool operator<(const Key& other) const {
      if (alpha != other.alpha) return alpha < other.alpha;
      if (cost != other.cost) return cost < other.cost;
      return *id < *other.id;
    }
  };
  std::set<Key> queue;
  for (ProjectIndex p = 0; p < e.num_projects(); ++p) {
    if (auto aff = alpha_affordability(e, p, ledger, model)) {
      queue.insert({std::move(aff->alpha), e.project(p).cost, &e.project(p).id, p});
    }
  }

  std::vector<ProjectIndex> selected;
  std::vector<Purchase> purchases;
  while (!queue.empty()) {
    Key top = *queue.begin();
    queue.erase(queue.begin());
    auto aff = alpha_affordability(e, top.project, ledger, model);
    if (!aff) continue;
    Key fresh{aff->alpha, top.cost, top.id, top.project};
    if (!queue.empty() && *queue.begin() < fresh) {
      queue.insert(std::move(fresh));
      continue;
    }
    for (const auto& [voter, amount] : aff->payments) ledger.pay(voter, amount);
    selected.push_back(top.project);
    purchases.push_back({top.project, std::move(aff->alpha), std::move(aff->payments)});
  }

  Outcome out = make_outcome(e, std::move(selected));
  out.purchases = std::move(purchases);
  out.endowment = endowment;
  return out;
}

Outcome complete_utilitarian(const Election& e, UtilityModel model, const Outcome& partial) {
  Outcome topped = utilitarian_greedy(e, model, std::nullopt, partial.selected);
  topped.purchases = partial.purchases;
  topped.endowment = partial.endowment;
  topped.epsilon_payments = partial.epsilon_payments;
  return topped;
}

Rational epsilon_score(const Election& e) {
  Rational denominator = e.max_score() * static_cast<long>(e.num_projects()) * static_cast<long>(e.num_voters());
  denominator += 1;
  return Rational(1) / denominator;
}

Election epsilon_tweak(const Election& e) {
  const Rational eps = epsilon_score(e);
  std::vector<ScoreEntry> scores;
  scores.reserve(e.num_projects() * e.num_voters());
  for (VoterIndex i = 0; i < e.num_voters(); ++i) {
    auto ballot = e.ballot(i);
    auto it = ballot.begin();
    for (ProjectIndex p = 0; p < e.num_projects(); ++p) {
      if (it != ballot.end() && it->project == p) {
        scores.push_back({i, p, it->score});
        ++it;
      } else {
        scores.push_back({i, p, eps});
      }
    }
  }
  return Election(e.projects(), e.voters(), e.budget(), std::move(scores), e.districts());
}

Outcome complete_eps(const Election& e, UtilityModel model) {
  if (e.num_voters() == 0) return make_outcome(e, {});
  const Election tweaked = epsilon_tweak(e);
  const Rational endowment = Rational(e.budget()) / static_cast<long>(e.num_voters());
  Outcome run = equal_shares_core(tweaked, model, endowment);

  Outcome out = make_outcome(e, run.selected);
  out.purchases = std::move(run.purchases);
  out.endowment = run.endowment;
  for (const auto& purchase : *out.purchases) {
    for (const auto& [voter, amount] : purchase.payments) {
      if (amount > 0 && e.score(voter, purchase.project) == 0) out.epsilon_payments = true;
    }
  }
  return out;
}

Outcome complete_add1(const Election& e, UtilityModel model, bool with_final_ug) {
  if (e.num_voters() == 0) return make_outcome(e, {});
  const Rational base = Rational(e.budget()) / static_cast<long>(e.num_voters());
  std::size_t supported = 0;
  for (ProjectIndex p = 0; p < e.num_projects(); ++p) {
    if (!e.supporters(p).empty()) ++supported;
  }

  std::optional<Outcome> feasible;
  for (long k = 0;; ++k) {
    Outcome run = equal_shares_core(e, model, base + k);
    if (run.total_cost > e.budget()) break;
    const bool done = is_exhaustive(e, run.selected) || run.selected.size() == supported;
    feasible = std::move(run);
    // With every supported project funded, larger endowments cannot change
    // the selected set.
    if (done) break;
  }
  // k = 0 never overspends, so at least one run was feasible.
  Outcome out = std::move(*feasible);
  if (with_final_ug) out = complete_utilitarian(e, model, out);
  return out;
}

bool is_exhaustive(const Election& e, std::span<const ProjectIndex> selected, std::optional<std::int64_t> budget) {
  std::vector<bool> taken(e.num_projects(), false);
  for (const auto p : selected) taken.at(p) = true;
  const std::int64_t remaining = budget.value_or(e.budget()) - e.cost(selected);
  for (ProjectIndex p = 0; p < e.num_projects(); ++p) {
    if (!taken[p] && e.project(p).cost <= remaining) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// dispatch

Outcome run_rule(const Election& e, const RuleSpec& spec) {
  spec.check();
  if (spec.rule == RuleKind::utilitarian_greedy) return utilitarian_greedy(e, spec.utility);
  switch (spec.completion) {
    case Completion::none:
    case Completion::utilitarian: {
      if (e.num_voters() == 0) return make_outcome(e, {});
      Outcome core = equal_shares_core(e, spec.utility, Rational(e.budget()) / static_cast<long>(e.num_voters()));
      return spec.completion == Completion::none ? core : complete_utilitarian(e, spec.utility, core);
    }
    case Completion::epsilon: return complete_eps(e, spec.utility);
    case Completion::add1: return complete_add1(e, spec.utility, false);
    case Completion::add1_utilitarian: return complete_add1(e, spec.utility, true);
  }
  return make_outcome(e, {});
}

Outcome run_rule(const SchemeElection& scheme, const RuleSpec& spec) {
  if (scheme.scheme == Scheme::citywide) return run_rule(scheme.merged, spec);
  std::vector<Outcome> parts;
  parts.reserve(scheme.sub_elections.size());
  for (const auto& sub : scheme.sub_elections) parts.push_back(run_rule(sub.election, spec));
  return combine_outcomes(scheme, parts);
}

}  // namespace pbtk
