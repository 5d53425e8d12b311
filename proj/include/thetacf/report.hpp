#pragma once

#include "thetacf/real.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace thetacf {

using Cell = std::variant<std::int64_t, Real, std::string>;
using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// Table with ordered metadata and summary entries.
///
/// CSV: `# key=value` lines for metadata, then `# summary.key=value`, then
/// a header row and data rows. JSON: {"meta": {...}, "summary": {...},
/// "columns": [...], "rows": [[...], ...]}.
struct ExperimentReport {
  KeyValues metadata;
  KeyValues summary;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_meta(std::string key, std::string value) { metadata.emplace_back(std::move(key), std::move(value)); }
  void add_summary(std::string key, std::string value) { summary.emplace_back(std::move(key), std::move(value)); }
  void add_summary(std::string key, const Real& value);

  void write_csv(std::ostream& out) const;
  void write_json(std::ostream& out) const;
  std::string to_csv() const;
  std::string to_json() const;
};

/// Significant digits used for Real cells.
inline constexpr int kReportDigits = 20;

std::string format_cell(const Cell& cell);

/// `# key=value` lines of a CSV report, in order, excluding summary lines.
KeyValues read_csv_metadata(std::istream& in);
KeyValues read_json_metadata(std::istream& in);

}  // namespace thetacf
