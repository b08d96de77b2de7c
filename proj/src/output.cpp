#include "anomalous/output.hpp"

#include <cstdio>
#include <stdexcept>

namespace anomalous {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string provenance_line(const std::map<std::string, std::string>& kv) {
  std::string line;
  for (const auto& [k, v] : kv) {
    if (!line.empty()) line += ' ';
    line += k + '=' + v;
  }
  return line;
}

std::uint64_t config_hash(const std::map<std::string, std::string>& kv) {
  const std::string s = provenance_line(kv);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

CsvWriter::CsvWriter(std::ostream& os,
                     const std::map<std::string, std::string>& prov,
                     const std::vector<std::string>& columns)
    : os_(os), width_(columns.size()) {
  os_ << "# " << provenance_line(prov) << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i)
    os_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw std::logic_error("csv row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i)
    os_ << cells[i] << (i + 1 < cells.size() ? "," : "\n");
}

void CsvWriter::row_numeric(const std::vector<double>& cells) {
  std::vector<std::string> s;
  s.reserve(cells.size());
  for (double c : cells) s.push_back(format_g17(c));
  row(s);
}

}  // namespace anomalous
