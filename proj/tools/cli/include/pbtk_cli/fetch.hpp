#pragma once

#include <string>
#include <vector>

namespace pbtk::cli {

struct HttpResponse {
  int status = 0;
  std::string body;
  /// Empty on success (status 200).
  std::string error;
};

/// Plain GET without authentication; follows redirects.
HttpResponse http_get(const std::string& url, int timeout_seconds = 30);

std::string sha256_hex(const std::string& data);

struct FetchRecord {
  std::string url;
  std::string path;
  std::string sha256;
  /// "downloaded", "updated", "skipped (unchanged)" or "failed".
  std::string status;
  std::string error;
};

/// Downloads every URL into `dest_dir`, named after the last path segment.
/// A body must parse as an election file or the URL is reported failed.
std::vector<FetchRecord> fetch_all(const std::vector<std::string>& urls, const std::string& dest_dir,
                                   std::size_t jobs);

}  // namespace pbtk::cli
