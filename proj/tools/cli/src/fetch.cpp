#include "pbtk_cli/fetch.hpp"

#include "pbtk/errors.hpp"
#include "pbtk/pbformat.hpp"
#include "pbtk_cli/pool.hpp"

#include "httplib.h"

#include <openssl/evp.h>

#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace pbtk::cli {

namespace {

struct UrlParts {
  std::string origin;  // scheme://host[:port]
  std::string target;  // /path?query
};

bool split_url(const std::string& url, UrlParts& parts) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) return false;
  const auto path_start = url.find('/', scheme_end + 3);
  parts.origin = url.substr(0, path_start);
  parts.target = path_start == std::string::npos ? "/" : url.substr(path_start);
  return parts.origin.size() > scheme_end + 3;
}

std::string file_name_for(const std::string& url, const std::string& digest) {
  std::string path = url.substr(0, url.find_first_of("?#"));
  const auto slash = path.find_last_of('/');
  std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
  if (url.find("://") != std::string::npos && slash != std::string::npos && slash < url.find("://") + 3) name.clear();
  for (auto& c : name) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '_')) c = '_';
  }
  if (name.empty() || name == "." || name == "..") name = digest.substr(0, 16) + ".pb";
  return name;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

HttpResponse http_get(const std::string& url, int timeout_seconds) {
  HttpResponse out;
  UrlParts parts;
  if (!split_url(url, parts)) {
    out.error = "malformed URL";
    return out;
  }
  try {
    httplib::Client client(parts.origin);
    client.set_follow_location(true);
    client.set_connection_timeout(timeout_seconds, 0);
    client.set_read_timeout(timeout_seconds, 0);
    const auto result = client.Get(parts.target);
    if (!result) {
      out.error = httplib::to_string(result.error());
      return out;
    }
    out.status = result->status;
    out.body = result->body;
    if (result->status != 200) out.error = "HTTP status " + std::to_string(result->status);
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

std::vector<FetchRecord> fetch_all(const std::vector<std::string>& urls, const std::string& dest_dir,
                                   std::size_t jobs) {
  std::error_code ec;
  fs::create_directories(dest_dir, ec);
  std::vector<FetchRecord> records(urls.size());
  parallel_for(urls.size(), jobs, [&](std::size_t k) {
    auto& rec = records[k];
    rec.url = urls[k];
    const auto response = http_get(urls[k]);
    if (!response.error.empty()) {
      rec.status = "failed";
      rec.error = response.error;
      return;
    }
    try {
      parse_pb(response.body, urls[k]);
    } catch (const Error& e) {
      rec.status = "failed";
      rec.error = e.what();
      return;
    }
    rec.sha256 = sha256_hex(response.body);
    const fs::path target = fs::path(dest_dir) / file_name_for(urls[k], rec.sha256);
    rec.path = target.string();
    const bool existed = fs::exists(target);
    if (existed && sha256_hex(read_file(target)) == rec.sha256) {
      rec.status = "skipped (unchanged)";
      return;
    }
    std::ofstream out(target, std::ios::binary | std::ios::trunc);
    out << response.body;
    if (!out) {
      rec.status = "failed";
      rec.error = "cannot write '" + rec.path + "'";
      return;
    }
    rec.status = existed ? "updated" : "downloaded";
  });
  return records;
}

}  // namespace pbtk::cli
