// Command-line station: scripted missions, closed-form calculators and the
// live teleoperation service.

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "sprayer/calc.hpp"
#include "sprayer/config.hpp"
#include "sprayer/mission_files.hpp"
#include "sprayer/sim.hpp"
#include "sprayer/station_server.hpp"

namespace {

volatile std::sig_atomic_t g_stop = 0;

void on_signal(int) { g_stop = 1; }

int default_port() {
  if (const char* env = std::getenv("SPRAYER_PORT")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v > 0 && v < 65536) return static_cast<int>(v);
  }
  return 7878;
}

int serve(const std::string& config_path, const std::string& field_text, double cell, double dt, int port,
          double pace, const std::string& out_dir) {
  using namespace sprayer;
  ServeOptions opts;
  try {
    if (!config_path.empty()) opts.config = load_config(config_path);
    opts.field = parse_field_spec(field_text, cell);
    FieldGrid probe(opts.field.width, opts.field.height, opts.field.cell);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  opts.dt = dt;
  opts.pace = pace;
  opts.port = port;
  opts.bind_address = "0.0.0.0";

  std::unique_ptr<StationServer> server;
  int bound = 0;
  try {
    server = std::make_unique<StationServer>(opts);
    bound = server->start();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  std::cerr << "serving on port " << bound << " (pace " << pace << "x); Ctrl-C to stop\n";
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  server->stop();

  const std::string report = report_to_json(server->report());
  if (!out_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    std::ofstream(std::filesystem::path(out_dir) / "report.json") << report;
    std::ofstream(std::filesystem::path(out_dir) / "session.script") << server->recorded_script();
    std::cerr << "wrote " << out_dir << "/report.json and session.script\n";
  }
  std::cout << report;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sprayer/mower robot simulator and teleoperation station"};
  app.require_subcommand(1);

  sprayer::RunOptions run_opts;
  auto* run = app.add_subcommand("run", "Run a mission script and write report, telemetry and coverage");
  run->add_option("--script", run_opts.script_path, "Mission script")->required();
  run->add_option("--config", run_opts.config_path, "Robot config file (key = value)");
  run->add_option("--field", run_opts.field, "Field size WxH in metres")->capture_default_str();
  run->add_option("--cell", run_opts.cell, "Grid cell size, m")->capture_default_str();
  run->add_option("--dt", run_opts.dt, "Fixed time step, s")->capture_default_str();
  run->add_option("--out", run_opts.out_dir, "Output directory")->required();
  run->add_option("--telemetry-every", run_opts.telemetry_divisor, "Ticks per telemetry frame")
      ->capture_default_str();

  std::string calc_kind;
  std::vector<std::string> calc_params;
  auto* calc = app.add_subcommand("calc", "Closed-form calculators: backup, charge, workspace, pitch, cone, mower, panel");
  calc->add_option("kind", calc_kind, "Calculation")->required();
  calc->add_option("params", calc_params, "Numeric parameters");

  std::string serve_config;
  std::string serve_field = "5x5";
  double serve_cell = 0.05;
  double serve_dt = 0.05;
  int serve_port = default_port();
  double serve_pace = 1.0;
  std::string serve_out;
  auto* srv = app.add_subcommand("serve", "Live teleoperation service (control, directives, telemetry)");
  srv->add_option("--config", serve_config, "Robot config file");
  srv->add_option("--field", serve_field, "Field size WxH in metres")->capture_default_str();
  srv->add_option("--cell", serve_cell, "Grid cell size, m")->capture_default_str();
  srv->add_option("--dt", serve_dt, "Fixed time step, s")->capture_default_str();
  srv->add_option("--port", serve_port, "TCP port (default $SPRAYER_PORT or 7878)")->capture_default_str();
  srv->add_option("--pace", serve_pace, "Simulated seconds per wall-clock second")->capture_default_str();
  srv->add_option("--out", serve_out, "Directory for the session report and replayable log on exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : sprayer::kExitUsage;
  }

  if (*run) return sprayer::run_mission_files(run_opts, std::cout, std::cerr);

  if (*calc) {
    try {
      std::cout << sprayer::format_calc(sprayer::calculate(calc_kind, calc_params));
      return sprayer::kExitOk;
    } catch (const sprayer::UsageError& e) {
      std::cerr << "usage error: " << e.what() << "\n";
      return sprayer::kExitUsage;
    }
  }

  if (*srv) {
    if (!(serve_pace > 0.0)) {
      std::cerr << "error: --pace must be > 0\n";
      return sprayer::kExitUsage;
    }
    return serve(serve_config, serve_field, serve_cell, serve_dt, serve_port, serve_pace, serve_out);
  }
  return sprayer::kExitUsage;
}
