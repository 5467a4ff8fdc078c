#include "sprayer/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "json.hpp"

#include "sprayer/text_util.hpp"

namespace sprayer {

namespace {

std::uint64_t fnv1a(std::uint64_t h, std::string_view s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string action_log_line(const Action& a) {
  switch (a.kind) {
    case ActionKind::Boom:
      return "BOOM " + std::string(axis_name(a.axis)) + " " + exact(a.value);
    default:
      return format_action(a);
  }
}

}  // namespace

FieldSpec parse_field_spec(std::string_view text, double cell) {
  auto x = text.find_first_of("xX");
  if (x == std::string_view::npos) throw std::invalid_argument("field must be WxH in metres, got '" + std::string(text) + "'");
  auto w = parse_double(text.substr(0, x));
  auto h = parse_double(text.substr(x + 1));
  if (!w || !h) throw std::invalid_argument("field must be WxH in metres, got '" + std::string(text) + "'");
  if (!(*w > 0.0) || !(*h > 0.0)) throw std::invalid_argument("field width and height must be > 0");
  if (!(cell > 0.0)) throw std::invalid_argument("cell size must be > 0");
  return {*w, *h, cell};
}

Simulation::Simulation(RobotConfig cfg, FieldSpec field, double dt) : cfg_(std::move(cfg)), dt_(dt) {
  cfg_.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be > 0");
  state_.grid = FieldGrid(field.width, field.height, field.cell);
  state_.pose = make_pose(field.width / 2, field.height / 2, 0.0);
  state_.boom.pitch = cfg_.boom_initial_pitch;
  state_.boom_target = state_.boom;
  state_.nozzle = setting_from_turns(cfg_.nozzle_initial_turns, cfg_.spray_half_angle, cfg_.pump_flow_lpm);
  state_.controller = ControllerState::power_on(cfg_);
  state_.drive = DriveState::released();
  state_.battery = {cfg_.battery_capacity * cfg_.battery_initial_fraction, cfg_.battery_capacity};
  state_.tank = {cfg_.tank_capacity * cfg_.tank_initial_fraction, cfg_.tank_capacity};
  initial_soc_ = state_.battery.soc;
}

void Simulation::log_action(const std::string& line) {
  digest_ = fnv1a(digest_, std::to_string(state_.tick));
  digest_ = fnv1a(digest_, " ");
  digest_ = fnv1a(digest_, line);
  digest_ = fnv1a(digest_, "\n");
  ++tallies_.actions;
}

void Simulation::process_byte(std::uint8_t b) {
  ++tallies_.bytes_received;
  if (!state_.power_on) {
    ++tallies_.bytes_dropped;
    return;
  }
  auto step = step_controller(state_.controller, b);
  state_.controller = step.state;
  state_.drive = step.drive;
}

void Simulation::apply(const Action& a) {
  switch (a.kind) {
    case ActionKind::Send:
      for (unsigned char c : a.bytes) process_byte(c);
      break;
    case ActionKind::Boom: {
      BoomState target = state_.boom_target;
      set_axis(target, a.axis, a.value);
      auto [clamped_target, clamped] = clamp_boom(target, cfg_);
      state_.boom_target = clamped_target;
      state_.flags.boom_clamped = clamped;
      if (clamped) ++tallies_.boom_clamps;
      const bool rate_limited = cfg_.boom_actuation == BoomActuation::Electric &&
                                (a.axis == BoomAxis::Vertical || a.axis == BoomAxis::Horizontal);
      if (!rate_limited) set_axis(state_.boom, a.axis, axis_value(clamped_target, a.axis));
      break;
    }
    case ActionKind::Nozzle:
      state_.nozzle = setting_from_turns(a.number, cfg_.spray_half_angle, cfg_.pump_flow_lpm);
      break;
    case ActionKind::Solar:
      state_.solar_on = a.on;
      break;
    case ActionKind::Speed:
      state_.controller = set_speed(state_.controller, a.number);
      break;
    case ActionKind::Switch:
      if (state_.power_on != a.on) {
        state_.power_on = a.on;
        // The board restarts from scratch on every power cycle.
        state_.controller = ControllerState::power_on(cfg_);
        state_.drive = DriveState::released();
      }
      break;
  }
  log_action(action_log_line(a));
}

double Simulation::move_actuator(double& pos, double target, bool powered) const {
  if (pos == target) return 0.0;
  if (!powered) return 0.0;
  const double max_step = cfg_.actuator_speed * dt_;
  const double delta = target - pos;
  if (std::abs(delta) <= max_step) {
    pos = target;
    return std::abs(delta);
  }
  pos += delta > 0 ? max_step : -max_step;
  return max_step;
}

void Simulation::step() {
  SimState& s = state_;
  const bool powered = s.power_on && !s.flags.battery_dead;

  // Kinematics.
  const Pose2D before = s.pose;
  const BoomState boom_before = s.boom;
  s.twist = powered ? body_twist(s.drive, cfg_) : Twist{};
  s.pose = integrate_pose(s.pose, s.twist.v, s.twist.omega, dt_);
  tallies_.distance += std::abs(s.twist.v) * dt_;

  // Linear actuators (electric boom only; the manual boom moves in apply()).
  bool h_moving = false;
  bool v_moving = false;
  bool h_wants = false;
  bool v_wants = false;
  if (cfg_.boom_actuation == BoomActuation::Electric && s.power_on) {
    h_wants = s.boom.horizontal_ext != s.boom_target.horizontal_ext;
    v_wants = s.boom.vertical_ext != s.boom_target.vertical_ext;
    h_moving = move_actuator(s.boom.horizontal_ext, s.boom_target.horizontal_ext, powered) > 0.0;
    v_moving = move_actuator(s.boom.vertical_ext, s.boom_target.vertical_ext, powered) > 0.0;
  }

  // Mowing.
  if (powered && s.controller.mower_pin)
    s.grid.paint_mow_swath(before.position(), s.pose.position(), cfg_.blade_sweep_radius);

  // Spraying: the pump output splits evenly over both nozzles.
  s.flags.pump_dry = false;
  if (powered && s.controller.pump_pin) {
    for (NozzleSide side : {NozzleSide::Left, NozzleSide::Right}) {
      auto from = spray_footprint(nozzle_pose(before, boom_before, side, cfg_), s.nozzle, cfg_.spray_plane_height);
      auto to = spray_footprint(nozzle_pose(s.pose, s.boom, side, cfg_), s.nozzle, cfg_.spray_plane_height);
      const double flow = s.nozzle.closed() ? 0.0 : cfg_.pump_flow_lpm / 2.0;
      SprayResult r = apply_spray_path(s.grid, from, to, flow, dt_, s.tank);
      tallies_.liquid_used += r.dispensed;
      tallies_.liquid_on_grid += r.on_grid;
      tallies_.liquid_discarded += r.discarded;
      if (r.dry) s.flags.pump_dry = true;
    }
  }

  // Power. `nominal` is what the devices would pull if the battery could
  // supply it; a dead battery delivers nothing.
  DeviceActivity want;
  if (s.power_on) {
    want.controller_on = true;
    want.drive_motors_active = running_motors(s.drive);
    want.mower_on = s.controller.mower_pin;
    want.pump_on = s.controller.pump_pin;
    want.h_actuators_active = (powered ? h_moving : h_wants) ? 2 : 0;
    want.v_actuator_active = powered ? v_moving : v_wants;
  }
  const double nominal = instantaneous_draw(want, cfg_);
  const double draw = powered ? nominal : 0.0;
  const double solar = s.solar_on ? cfg_.panel_current : 0.0;
  const bool was_full = s.battery.soc >= s.battery.capacity;
  const double before_soc = s.battery.soc;
  BatteryStep bs = step_battery(s.battery, draw, solar, dt_);
  s.battery = bs.battery;
  s.draw = draw;
  // Load actually served: an emptying battery cannot cover the whole tick.
  const double load_ah = std::min(draw * dt_ / 3600.0, before_soc + solar * dt_ / 3600.0);
  tallies_.load_ah += load_ah;
  tallies_.charge_used -= bs.delta_ah;
  if (solar > 0.0) tallies_.solar_ah += std::max(0.0, bs.delta_ah + load_ah);

  ++s.tick;
  s.t = static_cast<double>(s.tick) * dt_;

  const bool dead = s.battery.soc <= 0.0 && nominal > solar;
  if (dead && !s.flags.battery_dead && !tallies_.battery_dead_at) tallies_.battery_dead_at = s.t;
  s.flags.battery_dead = dead;
  if (bs.full && !was_full && !tallies_.battery_full_at) tallies_.battery_full_at = s.t;
}

MissionReport Simulation::report() const {
  const SimState& s = state_;
  MissionReport r;
  r.ticks = s.tick;
  r.dt = dt_;
  r.duration = s.t;
  r.distance = tallies_.distance;
  r.area_sprayed = s.grid.area_sprayed();
  r.area_mowed = s.grid.area_mowed();
  r.field_area = s.grid.field_area();
  r.liquid_used = tallies_.liquid_used;
  r.liquid_on_grid = tallies_.liquid_on_grid;
  r.liquid_discarded = tallies_.liquid_discarded;
  r.load_charge = tallies_.load_ah;
  r.charge_used = tallies_.charge_used;
  r.solar_charge = tallies_.solar_ah;
  r.initial_soc = initial_soc_;
  r.final_soc = s.battery.soc;
  r.final_tank = s.tank.level;
  r.battery_dead_at = tallies_.battery_dead_at;
  r.battery_full_at = tallies_.battery_full_at;
  r.bytes_received = tallies_.bytes_received;
  r.bytes_dropped = tallies_.bytes_dropped;
  r.actions = tallies_.actions;
  r.boom_clamps = tallies_.boom_clamps;
  r.final_pose = s.pose;
  r.final_flags = s.flags;
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest_));
  r.event_digest = buf;
  return r;
}

std::string report_to_json(const MissionReport& r) {
  nlohmann::ordered_json j;
  j["schema"] = "sprayer.report/1";
  j["duration_s"] = r.duration;
  j["ticks"] = r.ticks;
  j["dt_s"] = r.dt;
  j["distance_m"] = r.distance;
  j["area_sprayed_m2"] = r.area_sprayed;
  j["area_mowed_m2"] = r.area_mowed;
  j["field_area_m2"] = r.field_area;
  j["liquid_used_l"] = r.liquid_used;
  j["liquid_on_grid_l"] = r.liquid_on_grid;
  j["liquid_discarded_l"] = r.liquid_discarded;
  j["load_charge_ah"] = r.load_charge;
  j["solar_charge_ah"] = r.solar_charge;
  j["charge_used_ah"] = r.charge_used;
  j["initial_soc_ah"] = r.initial_soc;
  j["final_soc_ah"] = r.final_soc;
  j["final_tank_l"] = r.final_tank;
  j["battery_dead_at_s"] = r.battery_dead_at ? nlohmann::ordered_json(*r.battery_dead_at) : nullptr;
  j["battery_full_at_s"] = r.battery_full_at ? nlohmann::ordered_json(*r.battery_full_at) : nullptr;
  j["bytes_received"] = r.bytes_received;
  j["bytes_dropped"] = r.bytes_dropped;
  j["actions"] = r.actions;
  j["boom_clamps"] = r.boom_clamps;
  j["final_pose"] = {{"x", r.final_pose.x}, {"y", r.final_pose.y}, {"heading", r.final_pose.heading}};
  j["final_flags"] = {{"battery_dead", r.final_flags.battery_dead},
                      {"pump_dry", r.final_flags.pump_dry},
                      {"boom_clamped", r.final_flags.boom_clamped}};
  j["event_digest"] = r.event_digest;
  return j.dump(2) + "\n";
}

void validate_script(const MissionScript& script, const RobotConfig& cfg) {
  for (const auto& e : script.events) {
    if (e.action.kind == ActionKind::Speed && cfg.controller_mode == ControllerMode::Faithful)
      throw ScriptError(e.line, "SPEED requires controller_mode = corrected");
  }
}

Simulation run_mission(const MissionScript& script, const RobotConfig& cfg, const FieldSpec& field, double dt,
                       const TickObserver& observer) {
  validate_script(script, cfg);
  Simulation sim(cfg, field, dt);
  const std::int64_t end_tick = std::max<std::int64_t>(0, quantize_time(script.end_at, dt));
  std::size_t next = 0;
  const auto& ev = script.events;
  for (;;) {
    while (next < ev.size() && std::max<std::int64_t>(0, quantize_time(ev[next].at, dt)) <= sim.tick()) {
      try {
        sim.apply(ev[next].action);
      } catch (const std::exception& e) {
        throw ScriptError(ev[next].line, e.what());
      }
      ++next;
    }
    if (sim.tick() >= end_tick) break;
    sim.step();
    if (observer) observer(sim);
  }
  return sim;
}

MissionReport run_script(const MissionScript& script, const RobotConfig& cfg, const FieldSpec& field, double dt,
                         const TickObserver& observer) {
  return run_mission(script, cfg, field, dt, observer).report();
}

}  // namespace sprayer
