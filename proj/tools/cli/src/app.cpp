#include "pbtk_cli/app.hpp"

#include "pbtk/errors.hpp"
#include "pbtk_cli/commands.hpp"
#include "pbtk_cli/inputs.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <thread>

namespace pbtk::cli {

namespace {

struct Flags {
  std::vector<std::string> inputs;
  std::string scheme = "citywide";
  std::vector<std::string> rules;
  std::vector<std::string> utilities;
  std::vector<std::string> completions;
  std::vector<std::string> specs;
  std::vector<std::string> metrics;
  std::string format = "json";
  std::uint64_t seed = 0;
  std::size_t jobs = 0;
  std::string out;
  std::string source = "jaccard";
};

void add_common(CLI::App* cmd, Flags& f, bool rules, bool metrics) {
  cmd->add_option("inputs", f.inputs, ".pb files, directories or URLs")->required();
  cmd->add_option("--format", f.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--jobs", f.jobs, "worker threads (default: hardware concurrency)")->check(CLI::PositiveNumber);
  cmd->add_option("--out", f.out, "write the report to this path");
  if (!rules) return;
  cmd->add_option("--scheme", f.scheme, "citywide or districtwise")->check(CLI::IsMember({"citywide", "districtwise"}));
  cmd->add_option("--rule", f.rules, "ug or mes (repeatable)")->take_all();
  cmd->add_option("--utility", f.utilities, "score or cost (repeatable)")->take_all();
  cmd->add_option("--completion", f.completions, "none, u, eps, add1 or add1u (repeatable)")->take_all();
  cmd->add_option("--spec", f.specs, "full rule name such as mes-cost-add1u (repeatable)")->take_all();
  if (metrics) cmd->add_option("--metrics", f.metrics, "metric names, 'default' or 'all'")->delimiter(',');
}

Request to_request(const Flags& f) {
  Request req;
  req.inputs = f.inputs;
  req.scheme = f.scheme == "districtwise" ? Scheme::districtwise : Scheme::citywide;
  if (!f.rules.empty() || !f.utilities.empty() || !f.completions.empty()) {
    req.specs = broadcast_specs(f.rules, f.utilities, f.completions);
  }
  for (const auto& name : f.specs) {
    auto spec = RuleSpec::parse(name);
    spec.check();
    req.specs.push_back(spec);
  }
  req.metrics = parse_metric_list(f.metrics);
  req.format = f.format == "csv" ? OutputFormat::csv : OutputFormat::json;
  req.seed = f.seed;
  req.jobs = f.jobs > 0 ? f.jobs : std::max(1u, std::thread::hardware_concurrency());
  req.source = f.source;
  return req;
}

}  // namespace

int run_app(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Participatory budgeting rules, metrics and maps", "pbtk"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "pbtk 0.1.0");

  Flags f;
  auto* validate = app.add_subcommand("validate", "check .pb files against the format");
  add_common(validate, f, false, false);

  auto* run = app.add_subcommand("run", "run rules and report metrics");
  add_common(run, f, true, true);

  auto* compare = app.add_subcommand("compare", "compare the outcomes of two rules");
  add_common(compare, f, true, true);

  auto* fetch = app.add_subcommand("fetch", "download .pb files over HTTP");
  fetch->add_option("urls", f.inputs, "URLs to download")->required();
  fetch->add_option("--out", f.out, "destination directory (default: current directory)");
  fetch->add_option("--format", f.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  fetch->add_option("--jobs", f.jobs, "parallel downloads")->check(CLI::PositiveNumber);

  auto* embed = app.add_subcommand("embed", "export map data for two outcomes");
  add_common(embed, f, true, false);
  embed->add_option("--source", f.source, "jaccard or gps")->check(CLI::IsMember({"jaccard", "gps"}));
  embed->add_option("--seed", f.seed, "seed of the embedding start");

  auto* categories = app.add_subcommand("categories", "per-category vote and spending shares");
  add_common(categories, f, true, false);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kSuccess;
  } catch (const CLI::CallForVersion& e) {
    app.exit(e, out, err);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsageError;
  }

  CommandOutput result;
  std::string report_path = f.out;
  try {
    Request req = to_request(f);
    if (fetch->parsed()) {
      req.dest_dir = f.out.empty() ? "." : f.out;
      report_path.clear();
      result = cmd_fetch(req);
    } else if (validate->parsed()) {
      result = cmd_validate(req);
    } else if (run->parsed()) {
      if (req.specs.empty()) req.specs.push_back(RuleSpec{});
      result = cmd_run(req);
    } else if (compare->parsed()) {
      result = cmd_compare(req);
    } else if (embed->parsed()) {
      result = cmd_embed(req);
    } else {
      result = cmd_categories(req);
    }
  } catch (const IoError& e) {
    err << "pbtk: " << e.what() << "\n";
    return kUsageError;
  } catch (const Error& e) {
    err << "pbtk: " << e.what() << "\n";
    return e.code() == ErrorCode::InvalidArgument ? kUsageError : kDomainError;
  }

  if (report_path.empty()) {
    out << result.text;
  } else {
    std::ofstream file(report_path, std::ios::binary | std::ios::trunc);
    file << result.text;
    if (!file) {
      err << "pbtk: cannot write '" << report_path << "'\n";
      return kUsageError;
    }
  }
  return result.exit_code;
}

}  // namespace pbtk::cli
