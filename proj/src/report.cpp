#include "thetacf/report.hpp"

#include "thetacf/errors.hpp"

#include "json.hpp"

#include <istream>
#include <ostream>
#include <sstream>

namespace thetacf {

namespace {

const std::string kSummaryPrefix = "summary.";

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

nlohmann::ordered_json cell_json(const Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return *i;
  if (const auto* r = std::get_if<Real>(&cell)) {
    if (!isfinite(*r)) return format_real(*r, kReportDigits);
    return r->convert_to<double>();
  }
  return std::get<std::string>(cell);
}

}  // namespace

void ExperimentReport::add_summary(std::string key, const Real& value) {
  add_summary(std::move(key), format_real(value, kReportDigits));
}

std::string format_cell(const Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  if (const auto* r = std::get_if<Real>(&cell)) return format_real(*r, kReportDigits);
  return std::get<std::string>(cell);
}

void ExperimentReport::write_csv(std::ostream& out) const {
  for (const auto& [k, v] : metadata) out << "# " << k << '=' << v << '\n';
  for (const auto& [k, v] : summary) out << "# " << kSummaryPrefix << k << '=' << v << '\n';
  for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << csv_escape(columns[c]);
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_escape(format_cell(row[c]));
    out << '\n';
  }
}

void ExperimentReport::write_json(std::ostream& out) const {
  nlohmann::ordered_json doc;
  doc["meta"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : metadata) doc["meta"][k] = v;
  doc["summary"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : summary) doc["summary"][k] = v;
  doc["columns"] = columns;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::array();
    for (const auto& cell : row) r.push_back(cell_json(cell));
    doc["rows"].push_back(std::move(r));
  }
  out << doc.dump(2) << '\n';
}

std::string ExperimentReport::to_csv() const {
  std::ostringstream s;
  write_csv(s);
  return s.str();
}

std::string ExperimentReport::to_json() const {
  std::ostringstream s;
  write_json(s);
  return s.str();
}

KeyValues read_csv_metadata(std::istream& in) {
  KeyValues out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) != 0) break;
    const std::string body = line.substr(2);
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ValidationError("malformed metadata line '" + line + "'");
    std::string key = body.substr(0, eq);
    if (key.rfind(kSummaryPrefix, 0) == 0) continue;
    out.emplace_back(std::move(key), body.substr(eq + 1));
  }
  return out;
}

KeyValues read_json_metadata(std::istream& in) {
  const auto doc = nlohmann::ordered_json::parse(in);
  KeyValues out;
  for (const auto& [k, v] : doc.at("meta").items()) out.emplace_back(k, v.get<std::string>());
  return out;
}

}  // namespace thetacf
