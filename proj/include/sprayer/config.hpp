#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sprayer/units.hpp"

namespace sprayer {

enum class ControllerMode { Faithful, Corrected };
enum class BoomActuation { Manual, Electric };

// Per-device current draws, amps.
struct CurrentDraws {
  double drive_motor = 0.06;  // each of four
  double mower = 0.06;
  double pump = 0.3;
  double controller = 0.02;
  double h_actuator = 0.3;  // each of two
  double v_actuator = 0.5;
};

// Every physical parameter of the robot. All values are SI (m, s, rad, A,
// Ah, L, W, V); the text format converts from the per-key units listed in
// docs/config.md.
struct RobotConfig {
  // chassis & drive
  double chassis_length = in_to_m(22.9);
  double chassis_width = in_to_m(14.2);
  double chassis_height = in_to_m(9.5);
  double wheel_diameter = in_to_m(15.0);
  double wheel_width = in_to_m(4.5);
  double track_width = 0.475;       // chassis width + wheel width, rounded
  double v_max = 1.43;              // m/s, loaded
  double drive_motor_rpm = 250.0;
  bool swap_drive_sides = false;

  // mower
  double mower_rpm = 1000.0;
  double blade_sweep_radius = 0.31;
  double mower_clearance = in_to_m(3.0);

  // boom
  double nozzle_height_min = in_to_m(46.8);
  double nozzle_height_max = in_to_m(56.8);
  double nozzle_reach_min = in_to_m(12.5);
  double nozzle_reach_max = in_to_m(32.6);
  double boom_yaw_limit = deg_to_rad(90.0);
  double nozzle_pitch_limit = deg_to_rad(40.0);
  BoomActuation boom_actuation = BoomActuation::Manual;
  double actuator_speed = 0.012;  // m/s, no load
  double boom_initial_pitch = deg_to_rad(-40.0);

  // spray
  double pump_flow_lpm = 1.5;
  double tank_capacity = 1.0;  // L
  double tank_initial_fraction = 1.0;
  double spray_half_angle = std::atan(5.0 / 20.0);  // measured cone
  double spray_plane_height = 0.75;               // m, crop canopy
  int nozzle_initial_turns = 7;

  // power
  double battery_capacity = 4.5;  // Ah
  double battery_voltage = 12.0;
  double battery_initial_fraction = 1.0;
  double panel_power = 100.0;
  double panel_voltage = 21.0;
  double panel_current = 4.5;
  CurrentDraws draws;

  // controller
  ControllerMode controller_mode = ControllerMode::Faithful;
  double corrected_turn_ratio = 0.5;

  double vertical_travel() const { return nozzle_height_max - nozzle_height_min; }
  double horizontal_travel() const { return nozzle_reach_max - nozzle_reach_min; }

  // Throws ConfigError listing the first violated invariant.
  void validate() const;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& msg)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct ConfigKeyInfo {
  std::string key;
  std::string unit;
  std::string description;
};

// Named alternates for parameters with two plausible values. measured,
// blade_radius, pump_measured, battery_4p5ah and prototype restore defaults.
//   nominal          120 deg catalogue cone (half angle 60 deg)
//   blade_diameter   31 cm read as tip-to-tip, sweep radius 0.155 m
//   pump_catalogue   350-700 L/h catalogue flow, midpoint 8.75 L/min
//   battery_1p3ah    single 12 V 1.3 Ah battery
//   conceptual       electric horizontal/vertical actuators
void apply_preset(RobotConfig& cfg, std::string_view name);
std::vector<std::string> preset_names();

// Parses `key = value` lines; `#` starts a comment. A `preset` key applies
// the named presets before the remaining keys regardless of position.
// Unknown keys, malformed values and invariant violations throw ConfigError.
RobotConfig parse_config(std::string_view text);
RobotConfig load_config(const std::string& path);

// Writes every key in config-file units; parse_config(to_config_text(c))
// reproduces c to within one ulp per field.
std::string to_config_text(const RobotConfig& cfg);

const std::vector<ConfigKeyInfo>& config_schema();

}  // namespace sprayer
