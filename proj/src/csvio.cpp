// SPDX-License-Identifier: Apache-2.0

#include "ysl/csvio.hpp"

#include <openssl/sha.h>

#include <cstdio>
#include <filesystem>
#include <sstream>
#include <stdexcept>

#include "ysl/errors.hpp"

namespace ysl {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string quote_csv(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns) {
  out_.open(path);
  if (!out_) throw std::runtime_error("cannot open '" + path + "' for writing");
  out_ << "# ysl " << kVersion << "\n";
  for (size_t i = 0; i < columns.size(); ++i) {
    if (i) out_ << ',';
    out_ << quote_csv(columns[i]);
  }
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) out_ << ',';
    out_ << fmt17(values[i]);
  }
  out_ << '\n';
}

void CsvWriter::raw_row(const std::vector<std::string>& cells) {
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << quote_csv(cells[i]);
  }
  out_ << '\n';
}

void CsvWriter::close() { out_.close(); }

std::vector<std::vector<double>> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  bool header_skipped = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string tok;
    bool numeric = true;
    while (std::getline(ss, tok, ',')) {
      try {
        size_t used = 0;
        double v = std::stod(tok, &used);
        vals.push_back(v);
        (void)used;
      } catch (const std::exception&) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (!header_skipped) {
        header_skipped = true;  // column header line
        continue;
      }
      throw std::runtime_error("non-numeric row in '" + path + "'");
    }
    if (!vals.empty()) rows.push_back(std::move(vals));
  }
  return rows;
}

std::string content_hash(const std::string& content) {
  std::string blob = "blob " + std::to_string(content.size());
  blob.push_back('\0');
  blob += content;
  unsigned char digest[SHA_DIGEST_LENGTH];
  SHA1(reinterpret_cast<const unsigned char*>(blob.data()), blob.size(), digest);
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * SHA_DIGEST_LENGTH);
  for (unsigned char b : digest) {
    out.push_back(hex[b >> 4]);
    out.push_back(hex[b & 0xf]);
  }
  return out;
}

void atomic_write(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot open '" + tmp + "' for writing");
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

nlohmann::json make_manifest(const std::string& command, const nlohmann::json& config,
                             uint64_t seed) {
  std::string dump = config.dump();
  return nlohmann::json{{"tool", "ysl"},
                        {"version", kVersion},
                        {"command", command},
                        {"seed", seed},
                        {"config", config},
                        {"content_hash", content_hash(dump)}};
}

}  // namespace ysl
