#include "sprayer/mission_files.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "sprayer/config.hpp"
#include "sprayer/coverage_export.hpp"
#include "sprayer/script.hpp"
#include "sprayer/sim.hpp"
#include "sprayer/telemetry.hpp"

namespace sprayer {

namespace {

bool read_file(const std::string& path, std::string& text) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  text = ss.str();
  return true;
}

bool write_file(const std::filesystem::path& path, const std::string& text, std::ostream& err) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) {
    err << "error: cannot write " << path.string() << "\n";
    return false;
  }
  return true;
}

}  // namespace

int run_mission_files(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  if (opts.script_path.empty()) {
    err << "error: --script is required\n";
    return kExitUsage;
  }
  if (opts.out_dir.empty()) {
    err << "error: --out is required\n";
    return kExitUsage;
  }
  if (opts.telemetry_divisor <= 0) {
    err << "error: telemetry divisor must be > 0\n";
    return kExitUsage;
  }
  if (!(opts.dt > 0.0)) {
    err << "error: --dt must be > 0\n";
    return kExitUsage;
  }

  std::string script_text;
  if (!read_file(opts.script_path, script_text)) {
    err << "error: cannot read script '" << opts.script_path << "'\n";
    return kExitUsage;
  }

  RobotConfig cfg;
  if (!opts.config_path.empty()) {
    try {
      cfg = load_config(opts.config_path);
    } catch (const ConfigError& e) {
      err << "error: " << e.what() << "\n";
      return kExitUsage;
    }
  }

  FieldSpec field;
  try {
    field = parse_field_spec(opts.field, opts.cell);
    FieldGrid probe(field.width, field.height, field.cell);
  } catch (const std::exception& e) {
    err << "error: --field: " << e.what() << "\n";
    return kExitUsage;
  }

  MissionScript script;
  try {
    script = parse_script(script_text);
    validate_script(script, cfg);
  } catch (const ScriptError& e) {
    err << opts.script_path << ":" << e.line() << ": error: ";
    std::string msg = e.what();
    const std::string prefix = "line " + std::to_string(e.line()) + ": ";
    if (msg.rfind(prefix, 0) == 0) msg = msg.substr(prefix.size());
    err << msg << "\n";
    return kExitUsage;
  }

  std::string telemetry;
  int divisor = opts.telemetry_divisor;
  auto observer = [&](const Simulation& sim) {
    if (sim.tick() % divisor == 0) {
      telemetry += frame_to_json(make_frame(sim));
      telemetry += '\n';
    }
  };

  std::optional<Simulation> sim;
  try {
    sim.emplace(run_mission(script, cfg, field, opts.dt, observer));
  } catch (const ScriptError& e) {
    err << opts.script_path << ":" << e.line() << ": error: " << e.what() << "\n";
    return kExitUsage;
  }

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(opts.out_dir, ec);
  if (ec) {
    err << "error: cannot create output directory '" << opts.out_dir << "': " << ec.message() << "\n";
    return kExitFailure;
  }
  const fs::path dir(opts.out_dir);
  const MissionReport report = sim->report();
  const std::string report_json = report_to_json(report);
  const FieldGrid& grid = sim->state().grid;
  bool ok = write_file(dir / "report.json", report_json, err) && write_file(dir / "telemetry.jsonl", telemetry, err) &&
            write_file(dir / "coverage_dose.pgm", dose_pgm(grid), err) &&
            write_file(dir / "coverage_mowed.pgm", mowed_pgm(grid), err) &&
            write_file(dir / "coverage.csv", coverage_table(grid), err);
  if (!ok) return kExitFailure;
  out << report_json;
  return kExitOk;
}

}  // namespace sprayer
