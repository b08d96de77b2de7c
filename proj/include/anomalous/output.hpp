#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace anomalous {

/// %.17g rendering; round-trips doubles exactly.
std::string format_g17(double v);

/// FNV-1a over the canonical "k=v;..." provenance string; stable across
/// runs and platforms.
std::uint64_t config_hash(const std::map<std::string, std::string>& kv);

/// Deterministic CSV with a single leading provenance comment:
///   # key=value key=value ...
/// followed by a header row and %.17g data rows.
class CsvWriter {
 public:
  CsvWriter(std::ostream& os, const std::map<std::string, std::string>& prov,
            const std::vector<std::string>& columns);
  void row(const std::vector<std::string>& cells);
  void row_numeric(const std::vector<double>& cells);

 private:
  std::ostream& os_;
  std::size_t width_;
};

/// Provenance string used both in CSV comments and JSON envelopes.
std::string provenance_line(const std::map<std::string, std::string>& kv);

}  // namespace anomalous
