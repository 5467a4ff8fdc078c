#include "sprayer/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <set>
#include <sstream>

#include "sprayer/text_util.hpp"

namespace sprayer {

namespace {

enum class Kind { Real, Integer, Flag, Choice };

struct KeyDef {
  std::string key;
  std::string unit;
  std::string description;
  Kind kind;
  double scale;  // SI value = file value * scale (Real only)
  std::function<double&(RobotConfig&)> real;
  std::function<int&(RobotConfig&)> integer;
  std::function<bool&(RobotConfig&)> flag;
  std::vector<std::string> choices;
  std::function<void(RobotConfig&, std::size_t)> set_choice;
  std::function<std::size_t(const RobotConfig&)> get_choice;
};

KeyDef real_key(std::string key, std::string unit, std::string desc, double scale,
                std::function<double&(RobotConfig&)> f) {
  KeyDef d;
  d.key = std::move(key);
  d.unit = std::move(unit);
  d.description = std::move(desc);
  d.kind = Kind::Real;
  d.scale = scale;
  d.real = std::move(f);
  return d;
}

#define SPRAYER_REAL(name, unit, desc, scale, member) \
  real_key(name, unit, desc, scale, [](RobotConfig& c) -> double& { return c.member; })

const std::vector<KeyDef>& key_defs() {
  static const std::vector<KeyDef> defs = [] {
    constexpr double in = kInchM;
    constexpr double deg = kPi / 180.0;
    std::vector<KeyDef> v;
    v.push_back(SPRAYER_REAL("chassis_length_in", "in", "chassis length", in, chassis_length));
    v.push_back(SPRAYER_REAL("chassis_width_in", "in", "chassis width", in, chassis_width));
    v.push_back(SPRAYER_REAL("chassis_height_in", "in", "chassis height", in, chassis_height));
    v.push_back(SPRAYER_REAL("wheel_diameter_in", "in", "drive wheel diameter", in, wheel_diameter));
    v.push_back(SPRAYER_REAL("wheel_width_in", "in", "drive wheel width", in, wheel_width));
    v.push_back(SPRAYER_REAL("track_width_m", "m", "lateral distance between wheel pair centres", 1.0,
                             track_width));
    v.push_back(SPRAYER_REAL("v_max_mps", "m/s", "forward speed at pwm 255, loaded", 1.0, v_max));
    v.push_back(SPRAYER_REAL("drive_motor_rpm", "rpm", "drive motor rated speed (informational)", 1.0,
                             drive_motor_rpm));
    {
      KeyDef d;
      d.key = "swap_drive_sides";
      d.unit = "bool";
      d.description = "true puts M1,M2 on the right side instead of the left";
      d.kind = Kind::Flag;
      d.flag = [](RobotConfig& c) -> bool& { return c.swap_drive_sides; };
      v.push_back(std::move(d));
    }
    v.push_back(SPRAYER_REAL("mower_rpm", "rpm", "mower motor rated speed (informational)", 1.0, mower_rpm));
    v.push_back(SPRAYER_REAL("blade_sweep_radius_m", "m", "radius swept by the mower blade", 1.0,
                             blade_sweep_radius));
    v.push_back(SPRAYER_REAL("mower_clearance_in", "in", "blade ground clearance", in, mower_clearance));
    v.push_back(SPRAYER_REAL("nozzle_height_min_in", "in", "nozzle height at zero vertical extension", in,
                             nozzle_height_min));
    v.push_back(SPRAYER_REAL("nozzle_height_max_in", "in", "nozzle height at full vertical extension", in,
                             nozzle_height_max));
    v.push_back(SPRAYER_REAL("nozzle_reach_min_in", "in", "nozzle distance from chassis centre at zero slide",
                             in, nozzle_reach_min));
    v.push_back(SPRAYER_REAL("nozzle_reach_max_in", "in", "nozzle distance from chassis centre at full slide",
                             in, nozzle_reach_max));
    v.push_back(SPRAYER_REAL("boom_yaw_limit_deg", "deg", "symmetric boom yaw limit", deg, boom_yaw_limit));
    v.push_back(SPRAYER_REAL("nozzle_pitch_limit_deg", "deg", "symmetric nozzle pitch limit", deg,
                             nozzle_pitch_limit));
    {
      KeyDef d;
      d.key = "boom_actuation";
      d.unit = "manual|electric";
      d.description = "manual: set-points apply instantly, no actuator draw; electric: rate limited, actuators draw while moving";
      d.kind = Kind::Choice;
      d.choices = {"manual", "electric"};
      d.set_choice = [](RobotConfig& c, std::size_t i) {
        c.boom_actuation = i == 0 ? BoomActuation::Manual : BoomActuation::Electric;
      };
      d.get_choice = [](const RobotConfig& c) -> std::size_t {
        return c.boom_actuation == BoomActuation::Manual ? 0 : 1;
      };
      v.push_back(std::move(d));
    }
    v.push_back(SPRAYER_REAL("actuator_speed_mmps", "mm/s", "linear actuator no-load speed", 1e-3,
                             actuator_speed));
    v.push_back(SPRAYER_REAL("boom_initial_pitch_deg", "deg", "nozzle pitch at mission start (negative = down)",
                             deg, boom_initial_pitch));
    v.push_back(SPRAYER_REAL("pump_flow_lpm", "L/min", "pump flow, split evenly over both nozzles", 1.0,
                             pump_flow_lpm));
    v.push_back(SPRAYER_REAL("tank_capacity_l", "L", "liquid tank capacity", 1.0, tank_capacity));
    v.push_back(SPRAYER_REAL("tank_initial_fraction", "1", "tank level at mission start, fraction of capacity",
                             1.0, tank_initial_fraction));
    v.push_back(SPRAYER_REAL("spray_half_angle_deg", "deg", "spray cone half angle", deg, spray_half_angle));
    v.push_back(SPRAYER_REAL("spray_plane_height_m", "m", "height of the plane that intercepts the spray", 1.0,
                             spray_plane_height));
    {
      KeyDef d;
      d.key = "nozzle_initial_turns";
      d.unit = "turns";
      d.description = "nozzle cap turns at mission start (0-7)";
      d.kind = Kind::Integer;
      d.integer = [](RobotConfig& c) -> int& { return c.nozzle_initial_turns; };
      v.push_back(std::move(d));
    }
    v.push_back(SPRAYER_REAL("battery_capacity_ah", "Ah", "battery capacity", 1.0, battery_capacity));
    v.push_back(SPRAYER_REAL("battery_voltage_v", "V", "battery nominal voltage", 1.0, battery_voltage));
    v.push_back(SPRAYER_REAL("battery_initial_fraction", "1", "state of charge at mission start, fraction", 1.0,
                             battery_initial_fraction));
    v.push_back(SPRAYER_REAL("panel_power_w", "W", "solar panel rated power", 1.0, panel_power));
    v.push_back(SPRAYER_REAL("panel_voltage_v", "V", "solar panel output voltage", 1.0, panel_voltage));
    v.push_back(SPRAYER_REAL("panel_current_a", "A", "charging current while solar is on", 1.0, panel_current));
    v.push_back(SPRAYER_REAL("draw_drive_motor_a", "A", "current per running drive motor", 1.0,
                             draws.drive_motor));
    v.push_back(SPRAYER_REAL("draw_mower_a", "A", "mower motor current", 1.0, draws.mower));
    v.push_back(SPRAYER_REAL("draw_pump_a", "A", "pump current", 1.0, draws.pump));
    v.push_back(SPRAYER_REAL("draw_controller_a", "A", "controller board current", 1.0, draws.controller));
    v.push_back(SPRAYER_REAL("draw_h_actuator_a", "A", "current per moving horizontal actuator", 1.0,
                             draws.h_actuator));
    v.push_back(SPRAYER_REAL("draw_v_actuator_a", "A", "vertical actuator current while moving", 1.0,
                             draws.v_actuator));
    {
      KeyDef d;
      d.key = "controller_mode";
      d.unit = "faithful|corrected";
      d.description = "faithful replays the on-board program exactly; corrected removes the pin latency and enables speed control";
      d.kind = Kind::Choice;
      d.choices = {"faithful", "corrected"};
      d.set_choice = [](RobotConfig& c, std::size_t i) {
        c.controller_mode = i == 0 ? ControllerMode::Faithful : ControllerMode::Corrected;
      };
      d.get_choice = [](const RobotConfig& c) -> std::size_t {
        return c.controller_mode == ControllerMode::Faithful ? 0 : 1;
      };
      v.push_back(std::move(d));
    }
    v.push_back(SPRAYER_REAL("corrected_turn_ratio", "1",
                             "corrected mode: inner-side speed as a fraction of outer-side speed in turns", 1.0,
                             corrected_turn_ratio));
    return v;
  }();
  return defs;
}

#undef SPRAYER_REAL

const KeyDef* find_key(std::string_view key) {
  for (const auto& d : key_defs())
    if (d.key == key) return &d;
  return nullptr;
}

void set_value(RobotConfig& cfg, const KeyDef& d, std::string_view value, int line) {
  switch (d.kind) {
    case Kind::Real: {
      auto v = parse_double(value);
      if (!v) throw ConfigError(line, "'" + d.key + "': expected a number, got '" + std::string(value) + "'");
      d.real(cfg) = *v * d.scale;
      break;
    }
    case Kind::Integer: {
      auto v = parse_int(value);
      if (!v) throw ConfigError(line, "'" + d.key + "': expected an integer, got '" + std::string(value) + "'");
      d.integer(cfg) = *v;
      break;
    }
    case Kind::Flag: {
      if (value == "true" || value == "1" || value == "on")
        d.flag(cfg) = true;
      else if (value == "false" || value == "0" || value == "off")
        d.flag(cfg) = false;
      else
        throw ConfigError(line, "'" + d.key + "': expected true/false, got '" + std::string(value) + "'");
      break;
    }
    case Kind::Choice: {
      for (std::size_t i = 0; i < d.choices.size(); ++i) {
        if (d.choices[i] == value) {
          d.set_choice(cfg, i);
          return;
        }
      }
      throw ConfigError(line, "'" + d.key + "': expected " + d.unit + ", got '" + std::string(value) + "'");
    }
  }
}

}  // namespace

void RobotConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(0, std::string(name) + " must be > 0");
  };
  auto non_negative = [](double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError(0, std::string(name) + " must be >= 0");
  };
  auto fraction = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(0, std::string(name) + " must lie in [0, 1]");
  };
  positive(chassis_length, "chassis_length");
  positive(chassis_width, "chassis_width");
  positive(chassis_height, "chassis_height");
  positive(wheel_diameter, "wheel_diameter");
  positive(wheel_width, "wheel_width");
  positive(track_width, "track_width");
  positive(v_max, "v_max");
  positive(drive_motor_rpm, "drive_motor_rpm");
  positive(mower_rpm, "mower_rpm");
  positive(blade_sweep_radius, "blade_sweep_radius");
  positive(mower_clearance, "mower_clearance");
  positive(nozzle_height_min, "nozzle_height_min");
  positive(nozzle_reach_min, "nozzle_reach_min");
  if (!(nozzle_height_min < nozzle_height_max))
    throw ConfigError(0, "nozzle_height_min must be < nozzle_height_max");
  if (!(nozzle_reach_min < nozzle_reach_max)) throw ConfigError(0, "nozzle_reach_min must be < nozzle_reach_max");
  positive(boom_yaw_limit, "boom_yaw_limit");
  positive(nozzle_pitch_limit, "nozzle_pitch_limit");
  if (std::abs(boom_initial_pitch) > nozzle_pitch_limit)
    throw ConfigError(0, "boom_initial_pitch exceeds nozzle_pitch_limit");
  positive(actuator_speed, "actuator_speed");
  non_negative(pump_flow_lpm, "pump_flow_lpm");
  positive(tank_capacity, "tank_capacity");
  fraction(tank_initial_fraction, "tank_initial_fraction");
  if (!(spray_half_angle > 0.0 && spray_half_angle < kPi / 2))
    throw ConfigError(0, "spray_half_angle must lie in (0, 90) deg");
  non_negative(spray_plane_height, "spray_plane_height");
  if (spray_plane_height >= nozzle_height_min)
    throw ConfigError(0, "spray_plane_height must be below nozzle_height_min");
  if (nozzle_initial_turns < 0 || nozzle_initial_turns > 7)
    throw ConfigError(0, "nozzle_initial_turns must lie in [0, 7]");
  positive(battery_capacity, "battery_capacity");
  positive(battery_voltage, "battery_voltage");
  fraction(battery_initial_fraction, "battery_initial_fraction");
  non_negative(panel_power, "panel_power");
  positive(panel_voltage, "panel_voltage");
  non_negative(panel_current, "panel_current");
  non_negative(draws.drive_motor, "draw_drive_motor");
  non_negative(draws.mower, "draw_mower");
  non_negative(draws.pump, "draw_pump");
  non_negative(draws.controller, "draw_controller");
  non_negative(draws.h_actuator, "draw_h_actuator");
  non_negative(draws.v_actuator, "draw_v_actuator");
  if (!(corrected_turn_ratio >= 0.0 && corrected_turn_ratio <= 1.0))
    throw ConfigError(0, "corrected_turn_ratio must lie in [0, 1]");
}

std::vector<std::string> preset_names() {
  return {"measured", "nominal", "blade_radius", "blade_diameter", "pump_measured", "pump_catalogue",
          "battery_4p5ah", "battery_1p3ah", "prototype", "conceptual"};
}

void apply_preset(RobotConfig& cfg, std::string_view name) {
  if (name == "measured")
    cfg.spray_half_angle = std::atan(5.0 / 20.0);
  else if (name == "nominal")
    cfg.spray_half_angle = deg_to_rad(60.0);
  else if (name == "blade_radius")
    cfg.blade_sweep_radius = 0.31;
  else if (name == "blade_diameter")
    cfg.blade_sweep_radius = 0.155;
  else if (name == "pump_measured")
    cfg.pump_flow_lpm = 1.5;
  else if (name == "pump_catalogue")
    cfg.pump_flow_lpm = 525.0 / 60.0;
  else if (name == "battery_4p5ah")
    cfg.battery_capacity = 4.5;
  else if (name == "battery_1p3ah")
    cfg.battery_capacity = 1.3;
  else if (name == "prototype")
    cfg.boom_actuation = BoomActuation::Manual;
  else if (name == "conceptual")
    cfg.boom_actuation = BoomActuation::Electric;
  else
    throw ConfigError(0, "unknown preset '" + std::string(name) + "'");
}

RobotConfig parse_config(std::string_view text) {
  struct Entry {
    int line;
    std::string key;
    std::string value;
  };
  std::vector<Entry> entries;
  int line_no = 0;
  for (std::string_view raw : split_lines(text)) {
    ++line_no;
    std::string_view line = trim(strip_comment(raw));
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line_no, "expected 'key = value'");
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError(line_no, "missing key");
    if (value.empty()) throw ConfigError(line_no, "missing value for '" + key + "'");
    entries.push_back({line_no, std::move(key), std::move(value)});
  }

  RobotConfig cfg;
  std::set<std::string> seen;
  for (const auto& e : entries) {
    if (e.key != "preset") continue;
    for (std::string_view p : split_ws(e.value, ',')) {
      try {
        apply_preset(cfg, p);
      } catch (const ConfigError& err) {
        throw ConfigError(e.line, err.what());
      }
    }
  }
  for (const auto& e : entries) {
    if (e.key == "preset") continue;
    const KeyDef* d = find_key(e.key);
    if (!d) throw ConfigError(e.line, "unknown key '" + e.key + "'");
    if (!seen.insert(e.key).second) throw ConfigError(e.line, "duplicate key '" + e.key + "'");
    set_value(cfg, *d, e.value, e.line);
  }
  cfg.validate();
  return cfg;
}

RobotConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(0, "cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(e.line(), path + ": " + e.what());
  }
}

std::string to_config_text(const RobotConfig& cfg_in) {
  RobotConfig cfg = cfg_in;
  std::ostringstream out;
  out << std::setprecision(17);
  for (const auto& d : key_defs()) {
    out << d.key << " = ";
    switch (d.kind) {
      case Kind::Real:
        out << d.real(cfg) / d.scale;
        break;
      case Kind::Integer:
        out << d.integer(cfg);
        break;
      case Kind::Flag:
        out << (d.flag(cfg) ? "true" : "false");
        break;
      case Kind::Choice:
        out << d.choices[d.get_choice(cfg)];
        break;
    }
    out << "  # " << d.unit << '\n';
  }
  return out.str();
}

const std::vector<ConfigKeyInfo>& config_schema() {
  static const std::vector<ConfigKeyInfo> schema = [] {
    std::vector<ConfigKeyInfo> s;
    s.push_back({"preset", "name[,name...]", "apply named presets before other keys"});
    for (const auto& d : key_defs()) s.push_back({d.key, d.unit, d.description});
    return s;
  }();
  return schema;
}

}  // namespace sprayer
