#include "pbtk/pbformat.hpp"

#include "pbtk/errors.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace pbtk {

namespace {

constexpr std::string_view kWhitespace = " \t\r\n\f\v";

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(kWhitespace);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(kWhitespace);
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_cells(std::string_view line, char sep) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    cells.emplace_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return cells;
}

std::vector<std::string> split_list(const std::string& cell, std::size_t line) {
  if (cell.empty()) return {};
  auto items = split_cells(cell, ',');
  for (const auto& item : items) {
    if (item.empty()) throw Error(ErrorCode::MalformedRow, "empty item in list '" + cell + "'", line);
  }
  return items;
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i != 0) out += sep;
    out += items[i];
  }
  return out;
}

struct Line {
  std::size_t number;
  std::string_view text;
};

std::vector<Line> significant_lines(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto pos = text.find('\n', start);
    const auto raw = text.substr(start, pos == std::string_view::npos ? pos : pos - start);
    ++number;
    const auto trimmed = trim(raw);
    if (!trimmed.empty()) lines.push_back({number, trimmed});
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return lines;
}

const std::set<std::string, std::less<>> kProjectTyped = {"project_id", "cost", "name", "category",
                                                          "target"};
const std::set<std::string, std::less<>> kVoteTyped = {"voter_id", "vote", "points",
                                                       "age",      "sex",  "voting_method"};

const std::set<std::string, std::less<>> kKnownMetaKeys = {
    "description", "country",      "unit",           "subunit",        "instance",
    "num_projects", "num_votes",   "budget",         "vote_type",      "rule",
    "date_begin",  "date_end",     "language",       "edition",        "district",
    "comment",     "min_length",   "max_length",     "min_sum_cost",   "max_sum_cost",
    "scoring_fn",  "min_points",   "max_points",     "min_sum_points", "max_sum_points",
    "default_score"};

std::vector<std::string> parse_header(std::string_view line, std::size_t number,
                                      std::initializer_list<std::string_view> required,
                                      std::string_view section) {
  auto columns = split_cells(line, ';');
  std::unordered_set<std::string> seen;
  for (const auto& c : columns) {
    if (c.empty()) throw Error(ErrorCode::MalformedRow, "empty column name in " + std::string(section), number);
    if (!seen.insert(c).second) {
      throw Error(ErrorCode::MalformedRow, "duplicate column '" + c + "' in " + std::string(section), number);
    }
  }
  for (const auto& r : required) {
    if (!seen.contains(std::string(r))) {
      throw Error(ErrorCode::MissingObligatoryField,
                  std::string(section) + " header lacks column '" + std::string(r) + "'", number);
    }
  }
  return columns;
}

ProjectRow parse_project(const std::vector<std::string>& columns, const Line& line) {
  const auto cells = split_cells(line.text, ';');
  if (cells.size() != columns.size()) {
    throw Error(ErrorCode::MalformedRow,
                "expected " + std::to_string(columns.size()) + " cells, got " + std::to_string(cells.size()),
                line.number);
  }
  ProjectRow row;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    const auto& col = columns[c];
    const auto& cell = cells[c];
    if (col == "project_id") {
      if (cell.empty()) throw Error(ErrorCode::MalformedRow, "empty project_id", line.number);
      row.project_id = cell;
    } else if (col == "cost") {
      try {
        row.cost = parse_integer(cell);
      } catch (const Error& e) {
        throw Error(e.code(), "project cost: " + std::string(e.what()), line.number);
      }
      if (row.cost < 1) throw Error(ErrorCode::InvalidNumber, "project cost must be at least 1", line.number);
    } else if (col == "name") {
      row.name = cell;
    } else if (col == "category") {
      row.category = split_list(cell, line.number);
    } else if (col == "target") {
      row.target = split_list(cell, line.number);
    } else {
      row.extra.emplace(col, cell);
    }
  }
  return row;
}

VoteRow parse_vote(const std::vector<std::string>& columns, const Line& line) {
  const auto cells = split_cells(line.text, ';');
  if (cells.size() != columns.size()) {
    throw Error(ErrorCode::MalformedRow,
                "expected " + std::to_string(columns.size()) + " cells, got " + std::to_string(cells.size()),
                line.number);
  }
  VoteRow row;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    const auto& col = columns[c];
    const auto& cell = cells[c];
    if (col == "voter_id") {
      if (cell.empty()) throw Error(ErrorCode::MalformedRow, "empty voter_id", line.number);
      row.voter_id = cell;
    } else if (col == "vote") {
      row.vote = split_list(cell, line.number);
    } else if (col == "points") {
      std::vector<Rational> points;
      for (const auto& item : split_list(cell, line.number)) {
        try {
          points.push_back(parse_decimal(item));
        } catch (const Error& e) {
          throw Error(e.code(), "points: " + std::string(e.what()), line.number);
        }
      }
      row.points = std::move(points);
    } else if (col == "age") {
      row.age = cell;
    } else if (col == "sex") {
      row.sex = cell;
    } else if (col == "voting_method") {
      row.voting_method = cell;
    } else {
      row.extra.emplace(col, cell);
    }
  }
  return row;
}

std::int64_t meta_integer(const ElectionFile& file, std::string_view key) {
  const auto* value = file.meta.find(key);
  if (value == nullptr) {
    throw Error(ErrorCode::MissingObligatoryField, "META lacks '" + std::string(key) + "'");
  }
  try {
    return parse_integer(*value);
  } catch (const Error& e) {
    throw Error(e.code(), "META " + std::string(key) + ": " + e.what());
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// MetaMap / ElectionFile

const std::string* MetaMap::find(std::string_view key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return &v;
  }
  return nullptr;
}

void MetaMap::set(std::string key, std::string value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  entries_.emplace_back(std::move(key), std::move(value));
}

bool MetaMap::erase(std::string_view key) {
  const auto it = std::find_if(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.first == key; });
  if (it == entries_.end()) return false;
  entries_.erase(it);
  return true;
}

std::string ElectionFile::unit() const {
  const auto* v = meta.find("unit");
  return v ? *v : std::string();
}

std::string ElectionFile::instance() const {
  const auto* v = meta.find("instance");
  return v ? *v : std::string();
}

std::optional<std::string> ElectionFile::subunit() const {
  const auto* v = meta.find("subunit");
  if (v == nullptr || v->empty()) return std::nullopt;
  return *v;
}

std::string ElectionFile::vote_type() const {
  const auto* v = meta.find("vote_type");
  return v ? *v : std::string();
}

std::int64_t ElectionFile::budget() const { return meta_integer(*this, "budget"); }

bool ElectionFile::operator==(const ElectionFile& other) const {
  return meta == other.meta && project_columns == other.project_columns && projects == other.projects &&
         vote_columns == other.vote_columns && votes == other.votes;
}

bool ValidationReport::is_valid() const { return count(Severity::error) == 0; }

bool ValidationReport::has(std::string_view code) const {
  return std::any_of(diagnostics.begin(), diagnostics.end(), [&](const Diagnostic& d) { return d.code == code; });
}

std::size_t ValidationReport::count(Severity severity) const {
  return static_cast<std::size_t>(std::count_if(diagnostics.begin(), diagnostics.end(),
                                                [&](const Diagnostic& d) { return d.severity == severity; }));
}

// ---------------------------------------------------------------------------
// parse

ElectionFile parse_pb(std::string_view text, std::string source_name) {
  const auto lines = significant_lines(text);
  ElectionFile file;
  file.source_name = std::move(source_name);

  enum class Section { none, meta, projects, votes };
  Section section = Section::none;
  bool expect_header = false;
  std::size_t meta_line = 0;
  std::unordered_set<std::string> project_ids;
  std::unordered_set<std::string> voter_ids;
  std::unordered_map<std::string, std::size_t> meta_rows;
  std::size_t last_line = 0;

  for (const auto& line : lines) {
    last_line = line.number;
    if (line.text == "META" || line.text == "PROJECTS" || line.text == "VOTES") {
      const Section next = line.text == "META" ? Section::meta
                           : line.text == "PROJECTS" ? Section::projects
                                                     : Section::votes;
      if (static_cast<int>(next) != static_cast<int>(section) + 1) {
        throw Error(ErrorCode::MissingSection,
                    "section " + std::string(line.text) + " out of order (expected META, PROJECTS, VOTES)",
                    line.number);
      }
      if (expect_header) {
        throw Error(ErrorCode::MalformedRow, "section without a column header row", line.number);
      }
      section = next;
      expect_header = true;
      if (next == Section::meta) meta_line = line.number;
      continue;
    }
    switch (section) {
      case Section::none:
        throw Error(ErrorCode::MissingSection, "content before META section", line.number);
      case Section::meta: {
        if (expect_header) {
          const auto header = split_cells(line.text, ';');
          if (header.size() != 2) throw Error(ErrorCode::MalformedRow, "META header must be 'key; value'", line.number);
          expect_header = false;
          break;
        }
        const auto pos = line.text.find(';');
        if (pos == std::string_view::npos) {
          throw Error(ErrorCode::MalformedRow, "META row without ';' separator", line.number);
        }
        std::string key(trim(line.text.substr(0, pos)));
        std::string value(trim(line.text.substr(pos + 1)));
        if (key.empty()) throw Error(ErrorCode::MalformedRow, "empty META key", line.number);
        if (file.meta.contains(key)) {
          throw Error(ErrorCode::MalformedRow, "duplicate META key '" + key + "'", line.number);
        }
        meta_rows[key] = line.number;
        file.meta.set(std::move(key), std::move(value));
        break;
      }
      case Section::projects: {
        if (expect_header) {
          file.project_columns = parse_header(line.text, line.number, {"project_id", "cost"}, "PROJECTS");
          expect_header = false;
          break;
        }
        auto row = parse_project(file.project_columns, line);
        if (!project_ids.insert(row.project_id).second) {
          throw Error(ErrorCode::DuplicateId, "duplicate project_id '" + row.project_id + "'", line.number);
        }
        file.projects.push_back(std::move(row));
        break;
      }
      case Section::votes: {
        if (expect_header) {
          file.vote_columns = parse_header(line.text, line.number, {"voter_id", "vote"}, "VOTES");
          expect_header = false;
          break;
        }
        auto row = parse_vote(file.vote_columns, line);
        if (!voter_ids.insert(row.voter_id).second) {
          throw Error(ErrorCode::DuplicateId, "duplicate voter_id '" + row.voter_id + "'", line.number);
        }
        file.votes.push_back(std::move(row));
        break;
      }
    }
  }

  if (section != Section::votes) {
    const char* missing = section == Section::none ? "META" : section == Section::meta ? "PROJECTS" : "VOTES";
    throw Error(ErrorCode::MissingSection, std::string("missing ") + missing + " section", last_line);
  }
  if (expect_header) throw Error(ErrorCode::MalformedRow, "VOTES section without a column header row", last_line);

  for (const auto key : kObligatoryMetaKeys) {
    if (!file.meta.contains(key)) {
      throw Error(ErrorCode::MissingObligatoryField, "META lacks obligatory key '" + std::string(key) + "'",
                  meta_line);
    }
  }
  const auto vote_type = file.vote_type();
  if (std::find(std::begin(kVoteTypes), std::end(kVoteTypes), vote_type) == std::end(kVoteTypes)) {
    throw Error(ErrorCode::UnknownVoteType, "unknown vote_type '" + vote_type + "'", meta_rows.at("vote_type"));
  }
  for (const auto key : {"num_projects", "num_votes", "budget"}) {
    try {
      meta_integer(file, key);
    } catch (const Error& e) {
      throw Error(e.code(), e.what(), meta_rows.at(key));
    }
  }
  return file;
}

ElectionFile read_pb_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw std::runtime_error("cannot read '" + path + "'");
  return parse_pb(buffer.str(), path);
}

// ---------------------------------------------------------------------------
// constraints + validate

BallotConstraints ballot_constraints(const ElectionFile& file) {
  BallotConstraints c;
  const auto vote_type = file.vote_type();
  const auto num_projects = static_cast<std::size_t>(meta_integer(file, "num_projects"));

  auto integer_or = [&](std::string_view key, std::size_t fallback) {
    return file.meta.contains(key) ? static_cast<std::size_t>(meta_integer(file, key)) : fallback;
  };
  auto decimal = [&](std::string_view key) -> std::optional<Rational> {
    const auto* v = file.meta.find(key);
    if (v == nullptr) return std::nullopt;
    try {
      return parse_decimal(*v);
    } catch (const Error& e) {
      throw Error(e.code(), "META " + std::string(key) + ": " + e.what());
    }
  };

  c.min_length = integer_or("min_length", 1);
  c.max_length = integer_or("max_length", num_projects);

  if (vote_type == "approval") {
    c.min_sum_cost = decimal("min_sum_cost").value_or(0);
    c.max_sum_cost = decimal("max_sum_cost");
  } else if (vote_type == "ordinal") {
    if (const auto* fn = file.meta.find("scoring_fn")) c.scoring_fn = *fn;
  } else if (vote_type == "cumulative") {
    c.max_sum_points = decimal("max_sum_points");
    if (!c.max_sum_points) {
      throw Error(ErrorCode::MissingObligatoryField, "cumulative ballots require META 'max_sum_points'");
    }
    c.min_points = decimal("min_points").value_or(0);
    c.max_points = decimal("max_points").value_or(*c.max_sum_points);
    c.min_sum_points = decimal("min_sum_points").value_or(0);
  } else if (vote_type == "scoring") {
    c.min_points = decimal("min_points");
    c.max_points = decimal("max_points");
    c.default_score = decimal("default_score").value_or(0);
  }
  return c;
}

ValidationReport validate(const ElectionFile& file) {
  ValidationReport report;
  auto error = [&](std::string code, std::string location, std::string message) {
    report.diagnostics.push_back({Severity::error, std::move(code), std::move(location), std::move(message)});
  };
  auto warning = [&](std::string code, std::string location, std::string message) {
    report.diagnostics.push_back({Severity::warning, std::move(code), std::move(location), std::move(message)});
  };

  bool meta_ok = true;
  for (const auto key : kObligatoryMetaKeys) {
    if (!file.meta.contains(key)) {
      error("MissingObligatoryField", "META", "missing obligatory key '" + std::string(key) + "'");
      meta_ok = false;
    }
  }
  for (const auto& [key, value] : file.meta.entries()) {
    if (!kKnownMetaKeys.contains(key)) warning("UnknownMetaKey", "META:" + key, "non-standard META key");
  }
  const auto vote_type = file.vote_type();
  if (file.meta.contains("vote_type") &&
      std::find(std::begin(kVoteTypes), std::end(kVoteTypes), vote_type) == std::end(kVoteTypes)) {
    error("UnknownVoteType", "META:vote_type", "unknown vote_type '" + vote_type + "'");
    meta_ok = false;
  }

  auto check_count = [&](std::string_view key, std::size_t actual) {
    if (!file.meta.contains(key)) return;
    try {
      const auto declared = meta_integer(file, key);
      if (static_cast<std::size_t>(declared) != actual) {
        error("CountMismatch", "META:" + std::string(key),
              "declared " + std::to_string(declared) + ", found " + std::to_string(actual));
      }
    } catch (const Error& e) {
      error(std::string(to_string(e.code())), "META:" + std::string(key), e.what());
      meta_ok = false;
    }
  };
  check_count("num_projects", file.projects.size());
  check_count("num_votes", file.votes.size());
  if (file.meta.contains("budget")) {
    try {
      if (file.budget() < 1) error("InvalidNumber", "META:budget", "budget must be at least 1");
    } catch (const Error& e) {
      error(std::string(to_string(e.code())), "META:budget", e.what());
    }
  }

  std::map<std::string, std::int64_t, std::less<>> costs;
  for (const auto& p : file.projects) {
    const auto location = "PROJECTS:" + p.project_id;
    if (!costs.emplace(p.project_id, p.cost).second) error("DuplicateId", location, "duplicate project_id");
    if (p.cost < 1) error("InvalidNumber", location, "cost must be at least 1");
  }

  std::optional<BallotConstraints> constraints;
  if (meta_ok) {
    try {
      constraints = ballot_constraints(file);
    } catch (const Error& e) {
      error(std::string(to_string(e.code())), "META", e.what());
    }
  }
  const bool needs_points = vote_type == "cumulative" || vote_type == "scoring";
  if (needs_points &&
      std::find(file.vote_columns.begin(), file.vote_columns.end(), "points") == file.vote_columns.end() &&
      !file.votes.empty() && !file.votes.front().points) {
    error("MissingObligatoryField", "VOTES", vote_type + " ballots require a 'points' column");
  }
  if (constraints && vote_type == "ordinal") {
    std::string fn = constraints->scoring_fn;
    std::transform(fn.begin(), fn.end(), fn.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (fn != "borda") warning("UnsupportedScoringFn", "META:scoring_fn", "only Borda scoring is supported");
  }

  std::unordered_set<std::string> voter_ids;
  for (const auto& v : file.votes) {
    const auto location = "VOTES:" + v.voter_id;
    if (!voter_ids.insert(v.voter_id).second) error("DuplicateId", location, "duplicate voter_id");

    std::unordered_set<std::string> seen;
    Rational cost_sum = 0;
    for (const auto& pid : v.vote) {
      if (!seen.insert(pid).second) error("DuplicateVote", location, "project '" + pid + "' listed twice");
      const auto it = costs.find(pid);
      if (it == costs.end()) {
        error("UnknownProject", location, "vote references unknown project '" + pid + "'");
      } else {
        cost_sum += it->second;
      }
    }
    if (v.points && v.points->size() != v.vote.size()) {
      error("PointsMismatch", location, "points list length differs from vote list length");
    }
    if (needs_points && !v.points && !v.vote.empty()) {
      error("MissingObligatoryField", location, "ballot lacks points");
    }
    if (v.points) {
      for (std::size_t k = 1; k < v.points->size(); ++k) {
        if ((*v.points)[k] > (*v.points)[k - 1]) {
          error("PointsNotSorted", location, "points must be listed in decreasing order");
          break;
        }
      }
    }
    if (!constraints) continue;
    const auto& c = *constraints;
    const auto length = v.vote.size();
    if (length < c.min_length) {
      error("BallotTooShort", location,
            "ballot length " + std::to_string(length) + " below min_length " + std::to_string(c.min_length));
    }
    if (length > c.max_length) {
      error("BallotTooLong", location,
            "ballot length " + std::to_string(length) + " above max_length " + std::to_string(c.max_length));
    }
    if (vote_type == "approval") {
      if (cost_sum < c.min_sum_cost) error("BallotCostTooLow", location, "ballot cost below min_sum_cost");
      if (c.max_sum_cost && cost_sum > *c.max_sum_cost) {
        error("BallotCostTooHigh", location, "ballot cost above max_sum_cost");
      }
    }
    if (needs_points && v.points) {
      Rational sum = 0;
      for (const auto& pts : *v.points) {
        sum += pts;
        if ((c.min_points && pts < *c.min_points) || (c.max_points && pts > *c.max_points)) {
          error("PointsOutOfRange", location, "points value " + to_decimal_string(pts) + " outside bounds");
        }
      }
      if (vote_type == "cumulative") {
        if (c.max_sum_points && sum > *c.max_sum_points) {
          error("SumPointsTooHigh", location, "points sum above max_sum_points");
        }
        if (sum < c.min_sum_points) error("SumPointsTooLow", location, "points sum below min_sum_points");
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// serialize

namespace {

std::vector<std::string> effective_project_columns(const ElectionFile& file) {
  std::vector<std::string> columns = file.project_columns;
  auto ensure = [&](const std::string& c) {
    if (std::find(columns.begin(), columns.end(), c) == columns.end()) columns.push_back(c);
  };
  ensure("project_id");
  ensure("cost");
  for (const auto& p : file.projects) {
    if (p.name) ensure("name");
    if (p.category) ensure("category");
    if (p.target) ensure("target");
    for (const auto& [k, v] : p.extra) ensure(k);
  }
  return columns;
}

std::vector<std::string> effective_vote_columns(const ElectionFile& file) {
  std::vector<std::string> columns = file.vote_columns;
  auto ensure = [&](const std::string& c) {
    if (std::find(columns.begin(), columns.end(), c) == columns.end()) columns.push_back(c);
  };
  ensure("voter_id");
  for (const auto& v : file.votes) {
    if (v.age) ensure("age");
    if (v.sex) ensure("sex");
    if (v.voting_method) ensure("voting_method");
    for (const auto& [k, val] : v.extra) ensure(k);
  }
  ensure("vote");
  for (const auto& v : file.votes) {
    if (v.points) ensure("points");
  }
  return columns;
}

void append_line(std::string& out, const std::vector<std::string>& cells) {
  std::string line = join(cells, "; ");
  line.erase(line.find_last_not_of(' ') + 1);
  out += line;
  out += '\n';
}

std::string extra_cell(const std::map<std::string, std::string>& extra, const std::string& column) {
  const auto it = extra.find(column);
  return it == extra.end() ? std::string() : it->second;
}

}  // namespace

std::string serialize(const ElectionFile& file) {
  std::string out;
  out += "META\nkey; value\n";
  for (const auto& [key, value] : file.meta.entries()) append_line(out, {key, value});

  const auto project_columns = effective_project_columns(file);
  out += "PROJECTS\n" + join(project_columns, "; ") + "\n";
  for (const auto& p : file.projects) {
    std::vector<std::string> cells;
    for (const auto& c : project_columns) {
      if (c == "project_id") cells.push_back(p.project_id);
      else if (c == "cost") cells.push_back(std::to_string(p.cost));
      else if (c == "name") cells.push_back(p.name.value_or(""));
      else if (c == "category") cells.push_back(p.category ? join(*p.category, ",") : "");
      else if (c == "target") cells.push_back(p.target ? join(*p.target, ",") : "");
      else cells.push_back(extra_cell(p.extra, c));
    }
    append_line(out, cells);
  }

  const auto vote_columns = effective_vote_columns(file);
  out += "VOTES\n" + join(vote_columns, "; ") + "\n";
  for (const auto& v : file.votes) {
    std::vector<std::string> cells;
    for (const auto& c : vote_columns) {
      if (c == "voter_id") cells.push_back(v.voter_id);
      else if (c == "vote") cells.push_back(join(v.vote, ","));
      else if (c == "points") {
        std::vector<std::string> pts;
        if (v.points) {
          for (const auto& x : *v.points) pts.push_back(to_decimal_string(x));
        }
        cells.push_back(join(pts, ","));
      } else if (c == "age") cells.push_back(v.age.value_or(""));
      else if (c == "sex") cells.push_back(v.sex.value_or(""));
      else if (c == "voting_method") cells.push_back(v.voting_method.value_or(""));
      else cells.push_back(extra_cell(v.extra, c));
    }
    append_line(out, cells);
  }
  return out;
}

}  // namespace pbtk
