#include "sprayer/power.hpp"

#include <algorithm>
#include <stdexcept>

namespace sprayer {

double instantaneous_draw(const DeviceActivity& a, const RobotConfig& cfg) {
  const auto& d = cfg.draws;
  double total = 0.0;
  total += std::clamp(a.drive_motors_active, 0, 4) * d.drive_motor;
  if (a.mower_on) total += d.mower;
  if (a.pump_on) total += d.pump;
  if (a.controller_on) total += d.controller;
  total += std::clamp(a.h_actuators_active, 0, 2) * d.h_actuator;
  if (a.v_actuator_active) total += d.v_actuator;
  return total;
}

BatteryStep step_battery(const BatteryState& b, double draw, double solar_current, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_battery: dt must be > 0");
  if (!(draw >= 0.0)) throw std::invalid_argument("step_battery: draw must be >= 0");
  const double solar = std::max(0.0, solar_current);
  const double net = solar - draw;

  BatteryStep r;
  r.battery = b;
  const double before = b.soc;
  r.battery.soc = std::clamp(b.soc + net * dt / 3600.0, 0.0, b.capacity);
  r.delta_ah = r.battery.soc - before;
  r.dead = r.battery.soc <= 0.0 && draw > solar;
  r.full = r.battery.soc >= b.capacity;
  return r;
}

double backup_hours(double capacity_ah, double draw_a) {
  if (!(capacity_ah >= 0.0) || !(draw_a >= 0.0)) throw std::invalid_argument("backup_hours: inputs must be >= 0");
  if (draw_a == 0.0) throw InfiniteBackup();
  return capacity_ah / draw_a;
}

double charge_hours(double capacity_ah, double current_a) { return backup_hours(capacity_ah, current_a); }

double panel_current(double power_w, double voltage_v) {
  if (!(voltage_v > 0.0)) throw std::invalid_argument("panel_current: voltage must be > 0");
  return power_w / voltage_v;
}

}  // namespace sprayer
