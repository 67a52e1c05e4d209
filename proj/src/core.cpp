#include "exi/core.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

namespace exi {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool parse_number(const std::string& cell, double& out) {
  const std::string t = trim(cell);
  if (t.empty()) return false;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace

Series load_csv(const std::string& path, const ColumnSpec& column) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");

  std::string line;
  long line_no = 0;
  bool saw_data_line = false;
  int col = column.index;
  std::vector<double> values;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line[0] == '#') continue;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);

    if (!saw_data_line) {
      // First non-comment line: resolve the column and detect a header.
      if (column.name) {
        int found = -1;
        for (std::size_t i = 0; i < fields.size(); ++i)
          if (trim(fields[i]) == *column.name) found = static_cast<int>(i);
        if (found < 0)
          throw DataError(path + ": no column named '" + *column.name +
                          "' in header (line " + std::to_string(line_no) + ")");
        col = found;
        saw_data_line = true;
        continue;  // header row consumed
      }
      if (col < 0 || col >= static_cast<int>(fields.size()))
        throw DataError(path + ": line " + std::to_string(line_no) + " has " +
                        std::to_string(fields.size()) +
                        " column(s), need column " + std::to_string(col + 1));
      double v;
      saw_data_line = true;
      if (!parse_number(fields[col], v)) continue;  // single header row
      if (!std::isfinite(v))
        throw DataError(path + ": line " + std::to_string(line_no) +
                        ", column " + std::to_string(col + 1) +
                        ": cannot parse '" + trim(fields[col]) +
                        "' as a finite number");
      values.push_back(v);
      continue;
    }

    if (col >= static_cast<int>(fields.size()))
      throw DataError(path + ": line " + std::to_string(line_no) + " has " +
                      std::to_string(fields.size()) +
                      " column(s), need column " + std::to_string(col + 1));
    double v;
    if (!parse_number(fields[col], v) || !std::isfinite(v))
      throw DataError(path + ": line " + std::to_string(line_no) + ", column " +
                      std::to_string(col + 1) + ": cannot parse '" +
                      trim(fields[col]) + "' as a finite number");
    values.push_back(v);
  }

  if (values.empty()) throw DataError(path + ": no numeric data rows");
  Series x(static_cast<Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i)
    x[static_cast<Index>(i)] = values[i];
  return x;
}

void write_csv(const std::string& path, const Series& x,
               const std::string& header, const std::string& comment) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  if (!comment.empty()) out << "# " << comment << "\n";
  if (!header.empty()) out << header << "\n";
  for (Index i = 0; i < x.size(); ++i) out << num_str(x[i]) << "\n";
  if (!out) throw DataError("write failed for '" + path + "'");
}

Series log_returns(const Series& x) {
  if (x.size() < 2)
    throw DataError("log_returns: need at least 2 observations");
  if (!(x > 0.0).all())
    throw DataError("log_returns: values must be strictly positive");
  return (x.tail(x.size() - 1) / x.head(x.size() - 1)).log();
}

Series extract_tail(const Series& x, TailSide side, TailMode mode) {
  const Series oriented = (side == TailSide::upper) ? x : Series(-x);
  if (mode == TailMode::clamp) return oriented.max(0.0);
  std::vector<double> kept;
  kept.reserve(static_cast<std::size_t>(oriented.size()));
  for (Index i = 0; i < oriented.size(); ++i)
    if (oriented[i] > 0.0) kept.push_back(oriented[i]);
  Series out(static_cast<Index>(kept.size()));
  for (std::size_t i = 0; i < kept.size(); ++i)
    out[static_cast<Index>(i)] = kept[i];
  return out;
}

void require_finite(const Series& x, const std::string& what) {
  for (Index i = 0; i < x.size(); ++i)
    if (!std::isfinite(x[i]))
      throw DataError(what + ": non-finite value at position " +
                      std::to_string(i + 1));
}

std::string num_str(double v) {
  char buf[48];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace exi
