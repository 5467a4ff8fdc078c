#pragma once

#include <ostream>
#include <string>

namespace sprayer {

struct RunOptions {
  std::string script_path;
  std::string config_path;  // empty: built-in defaults
  std::string field = "5x5";
  double cell = 0.05;
  double dt = 0.05;
  std::string out_dir;
  int telemetry_divisor = 4;  // one frame every N ticks
};

// Exit codes shared by the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Runs a scripted mission and writes into out_dir:
//   report.json          mission report
//   telemetry.jsonl      one frame per line
//   coverage_dose.pgm    spray dose graymap
//   coverage_mowed.pgm   mowed mask graymap
//   coverage.csv         per-cell table
// Inputs are fully validated before anything is written; on failure nothing
// is created and a diagnostic (with file:line where known) goes to err.
int run_mission_files(const RunOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace sprayer
