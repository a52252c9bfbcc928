#include "vorbo/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <stdexcept>

namespace vorbo::csv {

std::string format(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return {buf, res.ptr};
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

namespace {

bool parse_row(const std::vector<std::string>& fields, std::vector<double>& out) {
  out.clear();
  for (const auto& f : fields) {
    std::string_view s = f;
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return false;
    out.push_back(v);
  }
  return true;
}

}  // namespace

Matrix read_matrix(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::vector<double> values;
  bool first = true;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const bool ok = parse_row(split(line), values);
    if (!ok) {
      if (first) {
        first = false;
        continue;
      }
      throw std::runtime_error("unparsable value on line " + std::to_string(line_no));
    }
    first = false;
    if (!rows.empty() && values.size() != rows.front().size()) {
      throw std::runtime_error("ragged row on line " + std::to_string(line_no));
    }
    rows.push_back(values);
  }
  if (rows.empty()) throw std::runtime_error("no data rows");
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

}  // namespace vorbo::csv
