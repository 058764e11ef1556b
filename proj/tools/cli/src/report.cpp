#include "pbtk_cli/report.hpp"

#include "pbtk/errors.hpp"

#include <cmath>
#include <cstdio>

namespace pbtk::cli {

std::string fixed(const Rational& value) { return to_fixed(value, 6); }

std::string fixed(double value) {
  if (!std::isfinite(value)) return "nan";
  // Round through an exact rational so doubles and rationals print alike.
  Rational exact(value);
  return to_fixed(exact, 6);
}

const std::vector<std::string>& scalar_metric_names() {
  static const std::vector<std::string> names{
      "average_utility_score", "average_utility_cost", "exclusion_ratio", "power_inequality", "gini_score",
      "gini_cost",             "funds_used",           "budget_dispersion", "robustness_ratio", "category_l2"};
  return names;
}

const std::vector<std::string>& vector_metric_names() {
  static const std::vector<std::string> names{"voter_shares", "tag_shares"};
  return names;
}

std::set<std::string> default_metrics() {
  return {"average_utility_score", "average_utility_cost", "exclusion_ratio", "power_inequality", "gini_score",
          "gini_cost",             "funds_used",           "budget_dispersion", "category_l2"};
}

MetricSelection parse_metric_list(const std::vector<std::string>& names) {
  if (names.empty()) return {default_metrics(), false};
  MetricSelection selection{{}, true};
  auto& out = selection.names;
  for (const auto& name : names) {
    if (name == "all") {
      out.insert(scalar_metric_names().begin(), scalar_metric_names().end());
      out.insert(vector_metric_names().begin(), vector_metric_names().end());
      continue;
    }
    if (name == "default") {
      const auto d = default_metrics();
      out.insert(d.begin(), d.end());
      continue;
    }
    const auto& s = scalar_metric_names();
    const auto& v = vector_metric_names();
    if (std::find(s.begin(), s.end(), name) == s.end() && std::find(v.begin(), v.end(), name) == v.end()) {
      throw Error(ErrorCode::InvalidArgument, "unknown metric '" + name + "'");
    }
    out.insert(name);
  }
  return selection;
}

MetricValues compute_metrics(const SchemeElection& scheme, const RuleSpec& spec, const Outcome& outcome,
                             const MetricSelection& requested) {
  MetricValues out;
  const Election& e = scheme.merged;
  const auto& w = outcome.selected;
  auto want = [&](const char* name) { return requested.contains(name); };
  auto guarded = [&](const char* name, auto&& compute) {
    if (!want(name)) return;
    try {
      compute();
    } catch (const Error& err) {
      out.failures[name] = err.what();
    }
  };

  guarded("average_utility_score",
          [&] { out.scalars["average_utility_score"] = average_utility(e, w, UtilityModel::score); });
  guarded("average_utility_cost",
          [&] { out.scalars["average_utility_cost"] = average_utility(e, w, UtilityModel::cost); });
  guarded("exclusion_ratio", [&] { out.scalars["exclusion_ratio"] = exclusion_ratio(e, w); });
  guarded("power_inequality", [&] { out.scalars["power_inequality"] = power_inequality(e, w); });
  guarded("gini_score", [&] {
    const auto u = voter_utilities(e, w, UtilityModel::score);
    out.scalars["gini_score"] = gini(u);
  });
  guarded("gini_cost", [&] {
    const auto u = voter_utilities(e, w, UtilityModel::cost);
    out.scalars["gini_cost"] = gini(u);
  });
  guarded("funds_used", [&] { out.scalars["funds_used"] = funds_used(e, w); });
  if (want("budget_dispersion") && (e.has_districts() || requested.explicit_list)) {
    guarded("budget_dispersion", [&] { out.scalars["budget_dispersion"] = budget_dispersion(e, w); });
  }
  guarded("robustness_ratio", [&] {
    const auto approval = to_approval(scheme);
    const auto other = run_rule(approval, spec);
    out.scalars["robustness_ratio"] = robustness_ratio(e, w, other.selected);
  });
  if (want("category_l2") || want("tag_shares")) {
    try {
      const auto shares = tag_shares(to_approval(e), w);
      if (want("category_l2")) out.reals["category_l2"] = shares.l2;
      if (want("tag_shares")) {
        Json table = Json::array();
        for (const auto& [tag, vote] : shares.vote_shares) {
          table.push_back({{"tag", tag}, {"vote_share", fixed(vote)},
                           {"spending_share", fixed(shares.spending_shares.at(tag))}});
        }
        out.vectors["tag_shares"] = std::move(table);
      }
    } catch (const Error& err) {
      out.failures["category_l2"] = err.what();
    }
  }
  guarded("voter_shares", [&] {
    const auto shares = voter_shares(e, w);
    Json table = Json::array();
    for (VoterIndex i = 0; i < e.num_voters(); ++i) {
      table.push_back({{"voter_id", e.voter_id(i)}, {"share", fixed(shares[i])}});
    }
    out.vectors["voter_shares"] = std::move(table);
  });
  return out;
}

Json outcome_json(const Election& e, const Outcome& outcome) {
  Json selected = Json::array();
  for (const auto& id : outcome.ids(e)) selected.push_back(id);
  Json order = Json::array();
  for (const auto p : outcome.selected) order.push_back(e.project(p).id);
  Json out = {{"selected", std::move(selected)},
              {"selection_order", std::move(order)},
              {"total_cost", outcome.total_cost},
              {"budget", e.budget()},
              {"exhaustive", is_exhaustive(e, outcome.selected)}};
  if (outcome.endowment) out["endowment"] = fixed(*outcome.endowment);
  if (outcome.epsilon_payments) out["epsilon_payments"] = true;
  return out;
}

Json metrics_json(const MetricValues& values) {
  Json out = Json::object();
  for (const auto& name : scalar_metric_names()) {
    if (const auto it = values.scalars.find(name); it != values.scalars.end()) out[name] = fixed(it->second);
    if (const auto it = values.reals.find(name); it != values.reals.end()) out[name] = fixed(it->second);
  }
  return out;
}

Json pair_json(const PairReport& pair) {
  return {{"dominance_1_over_2", fixed(pair.dominance_1_over_2)},
          {"dominance_2_over_1", fixed(pair.dominance_2_over_1)},
          {"improvement_margin", fixed(pair.improvement_margin)}};
}

}  // namespace pbtk::cli
