#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "h2ion/app.hpp"

namespace h2ion::app {

#ifndef H2ION_VERSION
#define H2ION_VERSION "0.0.0"
#endif

std::string_view version() { return H2ION_VERSION; }

std::string csv_number(double v) {
  if (!std::isfinite(v)) return {};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec)
      throw OutputError("cannot create directory " + path.parent_path().string() + ": " +
                        ec.message());
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw OutputError("cannot open " + path.string() + " for writing");
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  f.close();
  if (!f) throw OutputError("write to " + path.string() + " failed");
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error("DigestError", "SHA-256 computation failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw OutputError("cannot read back " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return sha256_hex(ss.str());
}

RunManifest::RunManifest(std::string cmd, json cfg)
    : command(std::move(cmd)), config(std::move(cfg)) {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  started_utc = buf;
}

json RunManifest::finish() const {
  json files = json::array();
  for (const auto& p : outputs) {
    files.push_back({{"path", p.string()},
                     {"sha256", sha256_file(p)},
                     {"bytes", std::filesystem::file_size(p)}});
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return {{"manifest",
           {{"command", command},
            {"config", config},
            {"tool_version", std::string(version())},
            {"input_hash", sha256_hex(config.dump())},
            {"outputs", files},
            {"started_utc", started_utc},
            {"wall_time_s", wall}}}};
}

std::vector<double> read_R_list(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw InvalidConfig("--R-list: cannot read " + path.string());
  std::vector<double> out;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    double R;
    if (!(ss >> R)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw InvalidConfig("--R-list: line " + std::to_string(lineno) + " is not a number");
    }
    std::string rest;
    if (ss >> rest)
      throw InvalidConfig("--R-list: trailing text on line " + std::to_string(lineno));
    out.push_back(R);
  }
  return out;
}

}  // namespace h2ion::app
