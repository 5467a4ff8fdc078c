#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sprayer/boom.hpp"
#include "sprayer/config.hpp"
#include "sprayer/controller.hpp"
#include "sprayer/drive.hpp"
#include "sprayer/field_grid.hpp"
#include "sprayer/power.hpp"
#include "sprayer/script.hpp"
#include "sprayer/spray.hpp"

namespace sprayer {

struct FieldSpec {
  double width = 5.0;   // m
  double height = 5.0;  // m
  double cell = 0.05;   // m
};

// Parses "WxH" in metres, e.g. "5x5" or "10.5x3". Throws std::invalid_argument.
FieldSpec parse_field_spec(std::string_view text, double cell = 0.05);

struct SimFlags {
  bool battery_dead = false;
  bool pump_dry = false;
  bool boom_clamped = false;

  friend bool operator==(const SimFlags&, const SimFlags&) = default;
};

struct SimState {
  std::int64_t tick = 0;
  double t = 0.0;  // tick * dt
  Pose2D pose;
  Twist twist;          // applied during the last tick
  BoomState boom;       // actual axis positions
  BoomState boom_target;
  NozzleSetting nozzle;
  ControllerState controller;
  DriveState drive;
  BatteryState battery;
  TankState tank;
  FieldGrid grid;
  bool solar_on = false;
  bool power_on = true;  // main switch
  SimFlags flags;
  double draw = 0.0;  // A, last tick
};

// Running totals behind the mission report.
struct Tallies {
  double distance = 0.0;
  double liquid_used = 0.0;
  double liquid_on_grid = 0.0;
  double liquid_discarded = 0.0;
  double load_ah = 0.0;       // sum of draw * dt / 3600 delivered to devices
  double charge_used = 0.0;   // net soc decrease
  double solar_ah = 0.0;      // panel charge accepted by the battery or the load
  std::optional<double> battery_dead_at;
  std::optional<double> battery_full_at;
  std::uint64_t bytes_received = 0;
  std::uint64_t bytes_dropped = 0;  // arrived with the main switch off
  std::uint64_t actions = 0;
  std::uint64_t boom_clamps = 0;
};

struct MissionReport {
  double duration = 0.0;
  std::int64_t ticks = 0;
  double dt = 0.0;
  double distance = 0.0;
  double area_sprayed = 0.0;
  double area_mowed = 0.0;
  double field_area = 0.0;
  double liquid_used = 0.0;
  double liquid_on_grid = 0.0;
  double liquid_discarded = 0.0;
  double load_charge = 0.0;
  double solar_charge = 0.0;
  double charge_used = 0.0;
  double initial_soc = 0.0;
  double final_soc = 0.0;
  double final_tank = 0.0;
  std::optional<double> battery_dead_at;
  std::optional<double> battery_full_at;
  std::uint64_t bytes_received = 0;
  std::uint64_t bytes_dropped = 0;
  std::uint64_t actions = 0;
  std::uint64_t boom_clamps = 0;
  Pose2D final_pose;
  SimFlags final_flags;
  std::string event_digest;  // FNV-1a 64 over the applied-action log
};

// Structured text form; identical reports serialize to identical bytes.
std::string report_to_json(const MissionReport& r);

// One simulated robot on one field. Drivers (the script runner and the live
// station) call apply() for everything due at the current tick, then step().
class Simulation {
 public:
  Simulation(RobotConfig cfg, FieldSpec field, double dt = 0.05);

  // Delivers an action at the current tick. Bytes go through the emulated
  // controller in order. Throws ModeError for Speed in faithful mode and
  // std::out_of_range for a bad nozzle setting; state is unchanged then.
  void apply(const Action& action);

  // Advances one fixed step: kinematics, mowing, spraying, power, clock.
  void step();

  const SimState& state() const { return state_; }
  const Tallies& tallies() const { return tallies_; }
  const RobotConfig& config() const { return cfg_; }
  double dt() const { return dt_; }
  std::int64_t tick() const { return state_.tick; }

  MissionReport report() const;

 private:
  void process_byte(std::uint8_t b);
  void log_action(const std::string& line);
  double move_actuator(double& pos, double target, bool powered) const;

  RobotConfig cfg_;
  double dt_;
  SimState state_;
  Tallies tallies_;
  double initial_soc_ = 0.0;
  std::uint64_t digest_ = 0xcbf29ce484222325ULL;
};

// Checks script-level validity against a config (e.g. SPEED needs corrected
// mode). Throws ScriptError naming the line.
void validate_script(const MissionScript& script, const RobotConfig& cfg);

// Called after every tick; used for telemetry and for invariant checks.
using TickObserver = std::function<void(const Simulation&)>;

// Runs the script to its END and returns the report. Events due at a tick
// are applied before that tick is stepped; events at the END tick are
// applied but not stepped.
Simulation run_mission(const MissionScript& script, const RobotConfig& cfg, const FieldSpec& field,
                       double dt = 0.05, const TickObserver& observer = {});

MissionReport run_script(const MissionScript& script, const RobotConfig& cfg, const FieldSpec& field,
                         double dt = 0.05, const TickObserver& observer = {});

}  // namespace sprayer
