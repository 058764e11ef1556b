#include "pbtk_cli/inputs.hpp"

#include "pbtk/errors.hpp"
#include "pbtk_cli/fetch.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;

namespace pbtk::cli {

bool is_url(const std::string& input) { return input.starts_with("http://") || input.starts_with("https://"); }

std::vector<std::string> expand_inputs(const std::vector<std::string>& inputs) {
  std::vector<std::string> out;
  for (const auto& input : inputs) {
    if (is_url(input)) {
      out.push_back(input);
      continue;
    }
    std::error_code ec;
    const fs::path path(input);
    if (fs::is_directory(path, ec)) {
      std::vector<std::string> found;
      for (const auto& entry : fs::recursive_directory_iterator(path)) {
        if (entry.is_regular_file() && entry.path().extension() == ".pb") found.push_back(entry.path().string());
      }
      std::sort(found.begin(), found.end());
      if (found.empty()) throw IoError("no .pb files under '" + input + "'");
      out.insert(out.end(), found.begin(), found.end());
    } else if (fs::is_regular_file(path, ec)) {
      out.push_back(input);
    } else {
      throw IoError("cannot read '" + input + "'");
    }
  }
  return out;
}

std::string read_source(const std::string& source) {
  if (is_url(source)) {
    const auto response = http_get(source);
    if (!response.error.empty()) throw IoError(source + ": " + response.error);
    return response.body;
  }
  std::ifstream in(source, std::ios::binary);
  if (!in) throw IoError("cannot open '" + source + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + source + "'");
  return buffer.str();
}

LoadedInputs load_inputs(const std::vector<std::string>& inputs) {
  LoadedInputs out;
  std::map<std::pair<std::string, std::string>, std::vector<ElectionFile>> grouped;
  for (const auto& source : expand_inputs(inputs)) {
    const auto text = read_source(source);
    try {
      auto file = parse_pb(text, source);
      grouped[{file.unit(), file.instance()}].push_back(std::move(file));
    } catch (const Error& e) {
      out.failures.push_back({source, std::string(to_string(e.code())), e.line(), e.what()});
    }
  }
  for (auto& [key, files] : grouped) {
    std::stable_sort(files.begin(), files.end(), [](const ElectionFile& a, const ElectionFile& b) {
      return a.subunit().value_or("") < b.subunit().value_or("");
    });
    out.groups.push_back({key.first, key.second, std::move(files)});
  }
  return out;
}

}  // namespace pbtk::cli
