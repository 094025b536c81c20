// SPDX-License-Identifier: Apache-2.0

#ifndef YSL_CSVIO_HPP
#define YSL_CSVIO_HPP

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace ysl {

inline constexpr const char* kVersion = "0.1.0";

/// Float serialization contract: 17 significant digits, enough to
/// round-trip any double bit-exactly.
std::string fmt17(double v);

/// CSV with a fixed version header line, RFC-style quoting for strings,
/// and fmt17 for floats. Byte-identical output for identical inputs.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);

  void row(const std::vector<double>& values);
  void raw_row(const std::vector<std::string>& cells);
  void close();

 private:
  std::ofstream out_;
};

std::string quote_csv(const std::string& cell);

/// Parse a CSV of doubles (ignoring blank and '#' lines). Returns rows.
std::vector<std::vector<double>> read_csv(const std::string& path);

/// git-style content hash: SHA-1 of "blob <len>\0<content>", hex-encoded.
std::string content_hash(const std::string& content);

/// Write text to path atomically (temp file + rename).
void atomic_write(const std::string& path, const std::string& content);

/// Run manifest: resolved config + seed + content hash of the config dump.
nlohmann::json make_manifest(const std::string& command, const nlohmann::json& config,
                             uint64_t seed);

}  // namespace ysl

#endif
