#pragma once

#include "thetacf/context.hpp"
#include "thetacf/report.hpp"
#include "thetacf/surd.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace thetacf {

enum ExitCode : int { kExitOk = 0, kExitUsage = 2, kExitDomain = 3, kExitNumeric = 4 };

/// Every setting of one CLI run. Numeric tolerances and exact inputs stay
/// as the text the user gave so that metadata round-trips exactly.
struct RunConfig {
  std::string command;
  std::int64_t m = 1;
  std::string x = "0";
  std::size_t n = 0;
  std::size_t n_max = 0;
  std::size_t samples = 0;
  std::size_t grid = 0;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string out;
  std::string format = "csv";
  std::string tail_eps = "1e-12";
  std::string measure = "lebesgue";
  std::string norm = "sup";
  std::string start = "0";
  std::size_t steps = 20;
  std::string force_digit;
  bool fixed_point_check = false;
  std::size_t depth = 3;
  std::int64_t max_offset = 5;
  std::string checkpoints = "10,100,1000";

  /// Settings a bare `thetacf <command>` runs with.
  static RunConfig defaults_for(const std::string& command);
  void validate() const;

  KeyValues to_metadata() const;
  static RunConfig from_metadata(const KeyValues& meta);

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// `A`, `A/B`, `A/B±C/D*sqrt(M)` or `C/D*sqrt(M)`, with M equal to m.
SurdNumber parse_surd(const std::string& text, std::int64_t m);

/// Builds the report a validated config asks for.
ExperimentReport run_command(const RunConfig& cfg, std::ostream& diagnostics);

/// Full command line entry point; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace thetacf
