#pragma once

#include "exi/types.hpp"

#include <optional>
#include <string>

namespace exi {

/// Which column of a CSV file to read: by 0-based index, or by header name
/// (requires a header row). Default: column 0.
struct ColumnSpec {
  int index = 0;
  std::optional<std::string> name;
};

/// Reads one numeric column from a CSV file.
///
/// Dialect: comma separators, decimal point, UTF-8, at most one header row,
/// lines starting with '#' skipped (simulate output uses them for metadata).
/// A header is assumed when the selected cell of the first data line does not
/// parse as a number; selecting a column by name requires a header containing
/// that name. Non-numeric or missing cells are errors (never skipped), and
/// every DataError names the 1-based physical line and column involved.
Series load_csv(const std::string& path, const ColumnSpec& column = {});

/// Writes a series as CSV, one value per row, shortest round-trip formatting.
/// header: optional column-name line; comment: optional '#' metadata line.
void write_csv(const std::string& path, const Series& x,
               const std::string& header = "",
               const std::string& comment = "");

/// log(x[t+1] / x[t]); requires strictly positive values and size >= 2.
Series log_returns(const Series& x);

enum class TailSide { upper, lower };
enum class TailMode { clamp, drop };

/// Extracts one tail of a series for exceedance analysis. upper keeps the
/// series oriented as-is, lower negates it first. clamp zeroes the values
/// below the retained tail (preserving positions, the default used by the
/// estimation pipeline); drop removes them (order kept, positions lost).
Series extract_tail(const Series& x, TailSide side,
                    TailMode mode = TailMode::clamp);

/// Rejects NaN / infinities; `what` names the series in the error message.
void require_finite(const Series& x, const std::string& what);

/// Shortest decimal string that round-trips to the same double.
std::string num_str(double v);

}  // namespace exi
