#pragma once

#include "pbtk/pbformat.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace pbtk::cli {

/// Raised for unreadable paths and failed downloads; maps to exit code 2.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool is_url(const std::string& input);

/// Files and URLs in a stable order. Directories are searched recursively
/// for `.pb` files, which are returned sorted by path.
std::vector<std::string> expand_inputs(const std::vector<std::string>& inputs);

/// Reads a local file or downloads a URL. Throws IoError.
std::string read_source(const std::string& source);

struct FileFailure {
  std::string source;
  std::string code;
  std::size_t line = 0;
  std::string message;
};

/// All files sharing a unit and instance, ordered by subunit.
struct InstanceGroup {
  std::string unit;
  std::string instance;
  std::vector<ElectionFile> files;
};

struct LoadedInputs {
  std::vector<InstanceGroup> groups;
  std::vector<FileFailure> failures;
};

/// Parses every source and groups the files by (unit, instance). Parse
/// errors are collected per file; I/O errors throw IoError.
LoadedInputs load_inputs(const std::vector<std::string>& inputs);

}  // namespace pbtk::cli
