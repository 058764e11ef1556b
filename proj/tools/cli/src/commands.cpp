#include "pbtk_cli/commands.hpp"

#include "pbtk/errors.hpp"
#include "pbtk/geometry.hpp"
#include "pbtk_cli/app.hpp"
#include "pbtk_cli/fetch.hpp"
#include "pbtk_cli/inputs.hpp"
#include "pbtk_cli/pool.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>

namespace pbtk::cli {

namespace {

std::string render(const Json& doc) { return doc.dump(2) + "\n"; }

std::string csv_line(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k > 0) line += ',';
    line += csv_escape(cells[k]);
  }
  return line + "\n";
}

Json header(const char* command) { return {{"schema", kSchema}, {"command", command}}; }

Json file_failure_json(const FileFailure& f) {
  Json out = {{"source", f.source}, {"code", f.code}, {"message", f.message}};
  if (f.line > 0) out["line"] = f.line;
  return out;
}

Json group_failure_json(const InstanceGroup& g, const Error& e) {
  return {{"unit", g.unit}, {"instance", g.instance}, {"code", std::string(to_string(e.code()))},
          {"message", e.what()}};
}

// Groups assembled into scheme elections; assembly errors are collected.
struct Prepared {
  LoadedInputs inputs;
  std::vector<std::optional<SchemeElection>> schemes;
  Json errors = Json::array();
};

Prepared prepare(const Request& req) {
  Prepared out;
  out.inputs = load_inputs(req.inputs);
  for (const auto& f : out.inputs.failures) out.errors.push_back(file_failure_json(f));
  out.schemes.resize(out.inputs.groups.size());
  std::vector<std::optional<Json>> failures(out.inputs.groups.size());
  parallel_for(out.inputs.groups.size(), req.jobs, [&](std::size_t k) {
    const auto& g = out.inputs.groups[k];
    try {
      out.schemes[k] = assemble_scheme(g.files, req.scheme);
    } catch (const Error& e) {
      failures[k] = group_failure_json(g, e);
    }
  });
  for (auto& f : failures) {
    if (f) out.errors.push_back(std::move(*f));
  }
  return out;
}

Json instance_key(const InstanceGroup& g, Scheme scheme) {
  return {{"unit", g.unit}, {"instance", g.instance}, {"scheme", std::string(to_string(scheme))}};
}

// Specs sorted by name, duplicates removed, so reports do not depend on flag
// order.
std::vector<RuleSpec> ordered_specs(std::vector<RuleSpec> specs) {
  std::sort(specs.begin(), specs.end(), [](const RuleSpec& a, const RuleSpec& b) { return a.name() < b.name(); });
  specs.erase(std::unique(specs.begin(), specs.end()), specs.end());
  return specs;
}

struct RunCell {
  std::optional<Json> result;
  std::optional<Json> error;
  MetricValues values;
};

}  // namespace

std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\n\r") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<RuleSpec> broadcast_specs(const std::vector<std::string>& rules, const std::vector<std::string>& utilities,
                                      const std::vector<std::string>& completions) {
  const std::size_t k = std::max({rules.size(), utilities.size(), completions.size(), std::size_t{1}});
  auto check = [&](const std::vector<std::string>& list, const char* flag) {
    if (list.size() > 1 && list.size() != k) {
      throw Error(ErrorCode::InvalidArgument, std::string("--") + flag + " given " + std::to_string(list.size()) +
                                                  " times; expected 1 or " + std::to_string(k));
    }
  };
  check(rules, "rule");
  check(utilities, "utility");
  check(completions, "completion");
  auto at = [](const std::vector<std::string>& list, std::size_t i, const char* fallback) {
    if (list.empty()) return std::string(fallback);
    return list.size() == 1 ? list.front() : list[i];
  };

  const bool any_mes = rules.empty() ? false : std::find(rules.begin(), rules.end(), "mes") != rules.end();
  std::vector<RuleSpec> out;
  for (std::size_t i = 0; i < k; ++i) {
    RuleSpec spec;
    const auto rule = at(rules, i, "ug");
    if (rule == "ug") spec.rule = RuleKind::utilitarian_greedy;
    else if (rule == "mes") spec.rule = RuleKind::equal_shares;
    else throw Error(ErrorCode::InvalidArgument, "unknown rule '" + rule + "' (expected ug or mes)");
    const auto utility = at(utilities, i, "cost");
    if (utility == "cost") spec.utility = UtilityModel::cost;
    else if (utility == "score") spec.utility = UtilityModel::score;
    else throw Error(ErrorCode::InvalidArgument, "unknown utility '" + utility + "' (expected score or cost)");
    spec.completion = parse_completion(at(completions, i, "none"));
    if (spec.rule == RuleKind::utilitarian_greedy && completions.size() == 1 && any_mes) {
      spec.completion = Completion::none;
    }
    spec.check();
    out.push_back(spec);
  }
  return out;
}

MetricSummary summarize(const std::vector<Rational>& values) {
  MetricSummary out;
  out.count = values.size();
  if (values.empty()) return out;
  for (const auto& v : values) out.mean += v;
  out.mean /= static_cast<long>(values.size());
  if (values.size() >= 2) {
    Rational squares = 0;
    for (const auto& v : values) squares += (v - out.mean) * (v - out.mean);
    out.stddev = std::sqrt(to_double(squares / static_cast<long>(values.size() - 1)));
  }
  return out;
}

// ---------------------------------------------------------------------------

CommandOutput cmd_validate(const Request& req) {
  Json files = Json::array();
  std::vector<std::vector<std::string>> rows;
  bool all_valid = true;
  for (const auto& source : expand_inputs(req.inputs)) {
    const auto text = read_source(source);
    Json diagnostics = Json::array();
    bool valid = true;
    auto add = [&](const std::string& severity, const std::string& code, const std::string& location,
                   const std::string& message) {
      diagnostics.push_back({{"severity", severity}, {"code", code}, {"location", location}, {"message", message}});
      rows.push_back({source, severity, code, location, message});
    };
    try {
      const auto report = validate(parse_pb(text, source));
      valid = report.is_valid();
      for (const auto& d : report.diagnostics) {
        add(d.severity == Severity::error ? "error" : "warning", d.code, d.location, d.message);
      }
    } catch (const Error& e) {
      valid = false;
      add("error", std::string(to_string(e.code())), e.line() > 0 ? "line " + std::to_string(e.line()) : "",
          e.what());
    }
    all_valid = all_valid && valid;
    files.push_back({{"source", source}, {"valid", valid}, {"diagnostics", std::move(diagnostics)}});
  }

  CommandOutput out;
  out.exit_code = all_valid ? kSuccess : kDomainError;
  if (req.format == OutputFormat::csv) {
    out.text = csv_line({"source", "severity", "code", "location", "message"});
    for (const auto& r : rows) out.text += csv_line(r);
  } else {
    Json doc = header("validate");
    doc["valid"] = all_valid;
    doc["files"] = std::move(files);
    out.text = render(doc);
  }
  return out;
}

CommandOutput cmd_run(const Request& req) {
  if (req.specs.empty()) throw Error(ErrorCode::InvalidArgument, "run needs at least one rule");
  auto prepared = prepare(req);
  const auto specs = ordered_specs(req.specs);
  const auto& groups = prepared.inputs.groups;

  std::vector<RunCell> cells(groups.size() * specs.size());
  parallel_for(cells.size(), req.jobs, [&](std::size_t k) {
    const auto g = k / specs.size();
    const auto& spec = specs[k % specs.size()];
    if (!prepared.schemes[g]) return;
    const auto& scheme = *prepared.schemes[g];
    auto& cell = cells[k];
    try {
      const auto outcome = run_rule(scheme, spec);
      cell.values = compute_metrics(scheme, spec, outcome, req.metrics);
      Json result = instance_key(groups[g], req.scheme);
      result["rule"] = spec.name();
      result["outcome"] = outcome_json(scheme.merged, outcome);
      result["metrics"] = metrics_json(cell.values);
      if (!cell.values.vectors.empty()) result["vectors"] = cell.values.vectors;
      if (!cell.values.failures.empty()) result["metric_errors"] = cell.values.failures;
      cell.result = std::move(result);
    } catch (const Error& e) {
      Json err = group_failure_json(groups[g], e);
      err["rule"] = spec.name();
      cell.error = std::move(err);
    }
  });

  Json results = Json::array();
  for (auto& cell : cells) {
    if (cell.result) results.push_back(std::move(*cell.result));
    if (cell.error) prepared.errors.push_back(std::move(*cell.error));
  }

  // Aggregates per (unit, rule) over instances, in result order.
  Json aggregates = Json::array();
  std::map<std::pair<std::string, std::string>, std::map<std::string, std::vector<Rational>>> series;
  std::vector<std::pair<std::string, std::string>> order;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (!cells[k].result) continue;
    const std::pair<std::string, std::string> key{groups[k / specs.size()].unit, specs[k % specs.size()].name()};
    if (!series.count(key)) order.push_back(key);
    auto& metrics = series[key];
    for (const auto& [name, value] : cells[k].values.scalars) metrics[name].push_back(value);
    for (const auto& [name, value] : cells[k].values.reals) metrics[name].push_back(Rational(value));
  }
  std::sort(order.begin(), order.end());
  for (const auto& key : order) {
    Json metrics = Json::object();
    std::size_t instances = 0;
    for (const auto& name : scalar_metric_names()) {
      const auto it = series[key].find(name);
      if (it == series[key].end()) continue;
      const auto summary = summarize(it->second);
      instances = std::max(instances, summary.count);
      Json entry = {{"count", summary.count}, {"mean", fixed(summary.mean)}};
      if (summary.stddev) entry["stddev"] = fixed(*summary.stddev);
      metrics[name] = std::move(entry);
    }
    aggregates.push_back({{"unit", key.first},
                          {"scheme", std::string(to_string(req.scheme))},
                          {"rule", key.second},
                          {"instances", instances},
                          {"metrics", std::move(metrics)}});
  }

  CommandOutput out;
  out.exit_code = prepared.errors.empty() ? kSuccess : kDomainError;
  if (req.format == OutputFormat::csv) {
    out.text = csv_line({"unit", "instance", "scheme", "rule", "metric", "value"});
    for (const auto& r : results) {
      const std::vector<std::string> key{r["unit"], r["instance"], r["scheme"], r["rule"]};
      auto row = [&](const std::string& metric, const std::string& value) {
        auto cells_row = key;
        cells_row.push_back(metric);
        cells_row.push_back(value);
        out.text += csv_line(cells_row);
      };
      row("total_cost", std::to_string(r["outcome"]["total_cost"].get<std::int64_t>()));
      for (const auto& [name, value] : r["metrics"].items()) row(name, value.get<std::string>());
    }
  } else {
    Json doc = header("run");
    doc["scheme"] = std::string(to_string(req.scheme));
    doc["results"] = std::move(results);
    doc["aggregates"] = std::move(aggregates);
    doc["errors"] = std::move(prepared.errors);
    out.text = render(doc);
  }
  return out;
}

CommandOutput cmd_compare(const Request& req) {
  if (req.specs.size() != 2) throw Error(ErrorCode::InvalidArgument, "compare needs exactly two rules");
  auto prepared = prepare(req);
  const auto& groups = prepared.inputs.groups;

  std::vector<std::optional<Json>> results(groups.size());
  std::vector<std::optional<Json>> errors(groups.size());
  parallel_for(groups.size(), req.jobs, [&](std::size_t g) {
    if (!prepared.schemes[g]) return;
    const auto& scheme = *prepared.schemes[g];
    try {
      Json result = instance_key(groups[g], req.scheme);
      result["rules"] = {req.specs[0].name(), req.specs[1].name()};
      Json outcomes = Json::array();
      std::vector<Outcome> pair;
      for (const auto& spec : req.specs) {
        pair.push_back(run_rule(scheme, spec));
        const auto values = compute_metrics(scheme, spec, pair.back(), req.metrics);
        Json entry = {{"rule", spec.name()},
                      {"outcome", outcome_json(scheme.merged, pair.back())},
                      {"metrics", metrics_json(values)}};
        if (!values.vectors.empty()) entry["vectors"] = values.vectors;
        if (!values.failures.empty()) entry["metric_errors"] = values.failures;
        outcomes.push_back(std::move(entry));
      }
      result["outcomes"] = std::move(outcomes);
      Json pairs = Json::object();
      for (auto model : {UtilityModel::cost, UtilityModel::score}) {
        pairs[std::string(to_string(model))] =
            pair_json(dominance_pair(scheme.merged, pair[0].selected, pair[1].selected, model));
      }
      result["pair"] = std::move(pairs);
      results[g] = std::move(result);
    } catch (const Error& e) {
      errors[g] = group_failure_json(groups[g], e);
    }
  });

  Json list = Json::array();
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (results[g]) list.push_back(std::move(*results[g]));
    if (errors[g]) prepared.errors.push_back(std::move(*errors[g]));
  }

  CommandOutput out;
  out.exit_code = prepared.errors.empty() ? kSuccess : kDomainError;
  if (req.format == OutputFormat::csv) {
    out.text = csv_line({"unit", "instance", "scheme", "rule", "metric", "value"});
    for (const auto& r : list) {
      const std::string unit = r["unit"];
      const std::string instance = r["instance"];
      const std::string scheme = r["scheme"];
      for (const auto& o : r["outcomes"]) {
        const std::string rule = o["rule"];
        out.text += csv_line({unit, instance, scheme, rule, "total_cost",
                              std::to_string(o["outcome"]["total_cost"].get<std::int64_t>())});
        for (const auto& [name, value] : o["metrics"].items()) {
          out.text += csv_line({unit, instance, scheme, rule, name, value.get<std::string>()});
        }
      }
      const std::string pair_name = r["rules"][0].get<std::string>() + " vs " + r["rules"][1].get<std::string>();
      for (const auto& [model, values] : r["pair"].items()) {
        for (const auto& [name, value] : values.items()) {
          out.text += csv_line({unit, instance, scheme, pair_name, name + "_" + model, value.get<std::string>()});
        }
      }
    }
  } else {
    Json doc = header("compare");
    doc["scheme"] = std::string(to_string(req.scheme));
    doc["results"] = std::move(list);
    doc["errors"] = std::move(prepared.errors);
    out.text = render(doc);
  }
  return out;
}

CommandOutput cmd_fetch(const Request& req) {
  for (const auto& url : req.inputs) {
    if (!is_url(url)) throw Error(ErrorCode::InvalidArgument, "not an http(s) URL: '" + url + "'");
  }
  const auto records = fetch_all(req.inputs, req.dest_dir, req.jobs);
  bool failed = false;
  Json files = Json::array();
  std::string csv = csv_line({"url", "path", "sha256", "status", "error"});
  for (const auto& r : records) {
    failed = failed || r.status == "failed";
    Json entry = {{"url", r.url}, {"status", r.status}};
    if (!r.path.empty()) entry["path"] = r.path;
    if (!r.sha256.empty()) entry["sha256"] = r.sha256;
    if (!r.error.empty()) entry["error"] = r.error;
    files.push_back(std::move(entry));
    csv += csv_line({r.url, r.path, r.sha256, r.status, r.error});
  }
  CommandOutput out;
  out.exit_code = failed ? kDomainError : kSuccess;
  if (req.format == OutputFormat::csv) {
    out.text = csv;
  } else {
    Json doc = header("fetch");
    doc["files"] = std::move(files);
    out.text = render(doc);
  }
  return out;
}

CommandOutput cmd_embed(const Request& req) {
  std::vector<RuleSpec> specs = req.specs;
  if (specs.empty()) specs = {RuleSpec::parse("mes-cost-add1u"), RuleSpec::parse("ug-cost")};
  if (specs.size() != 2) throw Error(ErrorCode::InvalidArgument, "embed needs two rules (equal shares, greedy)");
  PositionSource source;
  if (req.source == "gps") source = PositionSource::gps;
  else if (req.source == "jaccard") source = PositionSource::embedding;
  else throw Error(ErrorCode::InvalidArgument, "unknown position source '" + req.source + "'");

  auto prepared = prepare(req);
  const auto& groups = prepared.inputs.groups;
  std::vector<std::optional<Json>> maps(groups.size());
  std::vector<std::optional<Json>> errors(groups.size());
  parallel_for(groups.size(), req.jobs, [&](std::size_t g) {
    if (!prepared.schemes[g]) return;
    const auto& scheme = *prepared.schemes[g];
    try {
      const auto es = run_rule(scheme, specs[0]);
      const auto ug = run_rule(scheme, specs[1]);
      Json map = instance_key(groups[g], req.scheme);
      map["es_rule"] = specs[0].name();
      map["ug_rule"] = specs[1].name();
      map["source"] = req.source;
      std::optional<Embedding> embedding;
      if (source == PositionSource::embedding) {
        const auto jaccard = jaccard_matrix(to_approval(scheme.merged));
        embedding = mds_embed(normalize_distances(jaccard.matrix), {.seed = req.seed});
        map["seed"] = req.seed;
        map["stress"] = fixed(embedding->stress);
        map["iterations"] = embedding->iterations;
        map["degenerate"] = embedding->degenerate;
        map["excluded"] = jaccard.excluded;
      }
      const auto exported = export_map(scheme.merged, source, es, ug, embedding ? &*embedding : nullptr);
      map["skipped"] = exported.skipped;
      Json data = Json::array();
      for (const auto& d : exported.data) {
        data.push_back({{"project_id", d.project_id},
                        {"x", fixed(d.x)},
                        {"y", fixed(d.y)},
                        {"cost_radius", fixed(d.cost_radius)},
                        {"votes_radius", fixed(d.votes_radius)},
                        {"status", std::string(to_string(d.status))}});
      }
      map["data"] = std::move(data);
      maps[g] = std::move(map);
    } catch (const Error& e) {
      errors[g] = group_failure_json(groups[g], e);
    }
  });

  Json list = Json::array();
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (maps[g]) list.push_back(std::move(*maps[g]));
    if (errors[g]) prepared.errors.push_back(std::move(*errors[g]));
  }
  CommandOutput out;
  out.exit_code = prepared.errors.empty() ? kSuccess : kDomainError;
  if (req.format == OutputFormat::csv) {
    out.text = csv_line({"unit", "instance", "project_id", "x", "y", "cost_radius", "votes_radius", "status"});
    for (const auto& m : list) {
      for (const auto& d : m["data"]) {
        out.text += csv_line({m["unit"], m["instance"], d["project_id"], d["x"], d["y"], d["cost_radius"],
                              d["votes_radius"], d["status"]});
      }
    }
  } else {
    Json doc = header("embed");
    doc["maps"] = std::move(list);
    doc["errors"] = std::move(prepared.errors);
    out.text = render(doc);
  }
  return out;
}

CommandOutput cmd_categories(const Request& req) {
  std::vector<RuleSpec> specs = req.specs.empty() ? std::vector<RuleSpec>{RuleSpec::parse("ug-cost")}
                                                  : ordered_specs(req.specs);
  auto prepared = prepare(req);
  const auto& groups = prepared.inputs.groups;
  std::vector<std::optional<Json>> tables(groups.size() * specs.size());
  std::vector<std::optional<Json>> errors(groups.size() * specs.size());
  parallel_for(tables.size(), req.jobs, [&](std::size_t k) {
    const auto g = k / specs.size();
    const auto& spec = specs[k % specs.size()];
    if (!prepared.schemes[g]) return;
    const auto& scheme = *prepared.schemes[g];
    try {
      const auto& projects = scheme.merged.projects();
      if (std::all_of(projects.begin(), projects.end(), [](const Project& p) { return p.tags.empty(); })) {
        throw Error(ErrorCode::NoTags, "no project carries a category");
      }
      const auto outcome = run_rule(scheme, spec);
      const auto shares = tag_shares(to_approval(scheme.merged), outcome.selected);
      Json table = instance_key(groups[g], req.scheme);
      table["rule"] = spec.name();
      Json rows = Json::array();
      for (const auto& [tag, vote] : shares.vote_shares) {
        rows.push_back(
            {{"tag", tag}, {"vote_share", fixed(vote)}, {"spending_share", fixed(shares.spending_shares.at(tag))}});
      }
      table["tags"] = std::move(rows);
      table["l2"] = fixed(shares.l2);
      table["empty_ballots"] = shares.empty_ballots;
      tables[k] = std::move(table);
    } catch (const Error& e) {
      Json err = group_failure_json(groups[g], e);
      err["rule"] = spec.name();
      errors[k] = std::move(err);
    }
  });

  Json list = Json::array();
  for (std::size_t k = 0; k < tables.size(); ++k) {
    if (tables[k]) list.push_back(std::move(*tables[k]));
    if (errors[k]) prepared.errors.push_back(std::move(*errors[k]));
  }
  CommandOutput out;
  out.exit_code = prepared.errors.empty() ? kSuccess : kDomainError;
  if (req.format == OutputFormat::csv) {
    out.text = csv_line({"unit", "instance", "scheme", "rule", "tag", "vote_share", "spending_share"});
    for (const auto& t : list) {
      for (const auto& row : t["tags"]) {
        out.text += csv_line({t["unit"], t["instance"], t["scheme"], t["rule"], row["tag"], row["vote_share"],
                              row["spending_share"]});
      }
    }
  } else {
    Json doc = header("categories");
    doc["results"] = std::move(list);
    doc["errors"] = std::move(prepared.errors);
    out.text = render(doc);
  }
  return out;
}

}  // namespace pbtk::cli
