#pragma once

#include <stdexcept>

#include "sprayer/config.hpp"

namespace sprayer {

struct DeviceActivity {
  int drive_motors_active = 0;  // 0-4
  bool mower_on = false;
  bool pump_on = false;
  bool controller_on = false;
  int h_actuators_active = 0;  // 0-2
  bool v_actuator_active = false;

  // Everything the prototype can run at once.
  static DeviceActivity prototype_max() { return {4, true, true, true, 0, false}; }
  static DeviceActivity conceptual_max() { return {4, true, true, true, 2, true}; }
};

// Sum of the draws of the active devices, amps. Counts are clamped to their
// physical ranges.
double instantaneous_draw(const DeviceActivity& a, const RobotConfig& cfg);

struct BatteryState {
  double soc = 0.0;  // Ah, [0, capacity]
  double capacity = 4.5;
};

struct BatteryStep {
  BatteryState battery;
  double delta_ah = 0.0;  // soc change actually applied
  bool dead = false;      // empty and the load exceeds the panel
  bool full = false;
};

// Integrates net current (solar minus draw) over dt and clamps to
// [0, capacity]. Negative solar current is treated as zero: the panel diode
// blocks back-feed. Throws std::invalid_argument if dt <= 0 or draw < 0.
BatteryStep step_battery(const BatteryState& b, double draw, double solar_current, double dt);

class InfiniteBackup : public std::domain_error {
 public:
  InfiniteBackup() : std::domain_error("zero current draw: backup time is unbounded") {}
};

// capacity / draw, hours. Throws InfiniteBackup for draw == 0 and
// std::invalid_argument for negative inputs.
double backup_hours(double capacity_ah, double draw_a);

// capacity / charging current, hours; same error rules as backup_hours.
double charge_hours(double capacity_ah, double current_a);

// power / voltage. Throws std::invalid_argument for voltage <= 0.
double panel_current(double power_w, double voltage_v);

}  // namespace sprayer
