#pragma once

#include "pbtk/model.hpp"
#include "pbtk/rules.hpp"
#include "pbtk_cli/report.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pbtk::cli {

enum class OutputFormat { json, csv };

struct Request {
  std::vector<std::string> inputs;
  Scheme scheme = Scheme::citywide;
  std::vector<RuleSpec> specs;
  MetricSelection metrics;
  OutputFormat format = OutputFormat::json;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  /// Position source for embed: "jaccard" or "gps".
  std::string source = "jaccard";
  /// Destination directory for fetch.
  std::string dest_dir = ".";
};

/// Result of one command: the rendered report and the exit code.
struct CommandOutput {
  std::string text;
  int exit_code = 0;
};

CommandOutput cmd_validate(const Request& req);
CommandOutput cmd_run(const Request& req);
CommandOutput cmd_compare(const Request& req);
CommandOutput cmd_fetch(const Request& req);
CommandOutput cmd_embed(const Request& req);
CommandOutput cmd_categories(const Request& req);

/// Expands repeated --rule/--utility/--completion values into specs. Lists of
/// length one are broadcast; a single completion only applies to equal
/// shares. Throws pbtk::Error(InvalidArgument).
std::vector<RuleSpec> broadcast_specs(const std::vector<std::string>& rules, const std::vector<std::string>& utilities,
                                      const std::vector<std::string>& completions);

struct MetricSummary {
  std::size_t count = 0;
  Rational mean = 0;
  /// Sample standard deviation; absent below two instances.
  std::optional<double> stddev;
};

/// Mean and sample standard deviation over instances.
MetricSummary summarize(const std::vector<Rational>& values);

std::string csv_escape(const std::string& cell);

}  // namespace pbtk::cli
