#pragma once

#include "pbtk/metrics.hpp"
#include "pbtk/model.hpp"
#include "pbtk/rules.hpp"

#include "json.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace pbtk::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "pbtk/1";

/// Six decimal places, rounding half away from zero.
std::string fixed(const Rational& value);
std::string fixed(double value);

/// Scalar metric names in report order.
const std::vector<std::string>& scalar_metric_names();
/// Vector metric names (voter_shares, tag_shares).
const std::vector<std::string>& vector_metric_names();

struct MetricSelection {
  std::set<std::string> names;
  /// False when the defaults were used; metrics that do not apply to an
  /// election (dispersion without districts) are then left out quietly.
  bool explicit_list = false;

  bool contains(const std::string& name) const { return names.count(name) > 0; }
};

/// Parses a metric list. "all" selects every metric, "default" and an empty
/// list the defaults. Throws pbtk::Error(InvalidArgument).
MetricSelection parse_metric_list(const std::vector<std::string>& names);
std::set<std::string> default_metrics();

struct MetricValues {
  std::map<std::string, Rational> scalars;
  std::map<std::string, double> reals;
  Json vectors = Json::object();
  /// Metrics that could not be computed on this outcome, with the reason.
  std::map<std::string, std::string> failures;
};

/// Evaluates the requested metrics of `outcome` against the merged election.
/// Robustness reruns the rule on the approval conversion of `scheme`.
MetricValues compute_metrics(const SchemeElection& scheme, const RuleSpec& spec, const Outcome& outcome,
                             const MetricSelection& requested);

Json outcome_json(const Election& e, const Outcome& outcome);
Json metrics_json(const MetricValues& values);
Json pair_json(const PairReport& pair);

}  // namespace pbtk::cli
