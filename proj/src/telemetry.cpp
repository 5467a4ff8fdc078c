#include "sprayer/telemetry.hpp"

#include "json.hpp"

namespace sprayer {

using nlohmann::ordered_json;

TelemetryFrame make_frame(const Simulation& sim, const LinkStatus& link) {
  const SimState& s = sim.state();
  TelemetryFrame f;
  f.t = s.t;
  f.tick = s.tick;
  f.pose = s.pose;
  f.v = s.twist.v;
  f.omega = s.twist.omega;
  f.soc_pct = s.battery.capacity > 0 ? 100.0 * s.battery.soc / s.battery.capacity : 0.0;
  f.tank_l = s.tank.level;
  f.draw_a = s.draw;
  f.mower_pin = s.controller.mower_pin;
  f.pump_pin = s.controller.pump_pin;
  f.mower_flag = s.controller.mower_flag;
  f.pump_flag = s.controller.pump_flag;
  f.motion = s.controller.motion;
  f.mode = s.controller.mode;
  f.speed_pwm = s.controller.speed_pwm;
  f.boom = s.boom;
  f.nozzle_turns = s.nozzle.cap_turns;
  f.solar_on = s.solar_on;
  f.power_on = s.power_on;
  f.area_sprayed = s.grid.area_sprayed();
  f.area_mowed = s.grid.area_mowed();
  f.liquid_used = sim.tallies().liquid_used;
  f.distance = sim.tallies().distance;
  f.flags = s.flags;
  f.control_connected = link.control_connected;
  f.runaway = !link.control_connected && s.power_on && !s.flags.battery_dead && s.controller.motion != Motion::Stopped;
  return f;
}

std::string frame_to_json(const TelemetryFrame& f) {
  ordered_json j;
  j["schema"] = kTelemetrySchema;
  j["type"] = "frame";
  j["t"] = f.t;
  j["tick"] = f.tick;
  j["pose"] = {{"x", f.pose.x}, {"y", f.pose.y}, {"heading", f.pose.heading}};
  j["v"] = f.v;
  j["omega"] = f.omega;
  j["soc_pct"] = f.soc_pct;
  j["tank_l"] = f.tank_l;
  j["draw_a"] = f.draw_a;
  j["mower_pin"] = f.mower_pin;
  j["pump_pin"] = f.pump_pin;
  j["mower_flag"] = f.mower_flag;
  j["pump_flag"] = f.pump_flag;
  j["motion"] = motion_name(f.motion);
  j["mode"] = f.mode == ControllerMode::Faithful ? "faithful" : "corrected";
  j["speed_pwm"] = f.speed_pwm;
  j["boom"] = {{"vertical_in", m_to_in(f.boom.vertical_ext)},
               {"horizontal_in", m_to_in(f.boom.horizontal_ext)},
               {"yaw_deg", rad_to_deg(f.boom.yaw)},
               {"pitch_deg", rad_to_deg(f.boom.pitch)}};
  j["nozzle_turns"] = f.nozzle_turns;
  j["solar_on"] = f.solar_on;
  j["power_on"] = f.power_on;
  j["counters"] = {{"area_sprayed_m2", f.area_sprayed},
                   {"area_mowed_m2", f.area_mowed},
                   {"liquid_l", f.liquid_used},
                   {"distance_m", f.distance}};
  j["flags"] = {{"battery_dead", f.flags.battery_dead}, {"pump_dry", f.flags.pump_dry},
                {"boom_clamped", f.flags.boom_clamped}, {"runaway", f.runaway},
                {"control_connected", f.control_connected}};
  return j.dump();
}

namespace {

enum class T { Num, Int, Bool, Str, Obj };

bool has_type(const ordered_json& v, T t) {
  switch (t) {
    case T::Num:
      return v.is_number();
    case T::Int:
      return v.is_number_integer();
    case T::Bool:
      return v.is_boolean();
    case T::Str:
      return v.is_string();
    case T::Obj:
      return v.is_object();
  }
  return false;
}

}  // namespace

std::string validate_frame_json(std::string_view line) {
  ordered_json j;
  try {
    j = ordered_json::parse(line);
  } catch (const std::exception& e) {
    return std::string("not valid JSON: ") + e.what();
  }
  if (!j.is_object()) return "frame is not an object";

  struct Field {
    const char* key;
    T type;
  };
  static const Field top[] = {
      {"schema", T::Str},     {"type", T::Str},      {"t", T::Num},          {"tick", T::Int},
      {"pose", T::Obj},       {"v", T::Num},         {"omega", T::Num},      {"soc_pct", T::Num},
      {"tank_l", T::Num},     {"draw_a", T::Num},    {"mower_pin", T::Bool}, {"pump_pin", T::Bool},
      {"mower_flag", T::Bool}, {"pump_flag", T::Bool}, {"motion", T::Str},   {"mode", T::Str},
      {"speed_pwm", T::Int},  {"boom", T::Obj},      {"nozzle_turns", T::Int}, {"solar_on", T::Bool},
      {"power_on", T::Bool},  {"counters", T::Obj},  {"flags", T::Obj},
  };
  for (const auto& f : top) {
    if (!j.contains(f.key)) return std::string("missing key '") + f.key + "'";
    if (!has_type(j[f.key], f.type)) return std::string("wrong type for '") + f.key + "'";
  }
  if (j["schema"] != kTelemetrySchema) return "unknown schema '" + j["schema"].get<std::string>() + "'";
  if (j["type"] != "frame") return "type must be 'frame'";

  auto check_obj = [&](const char* obj, std::initializer_list<Field> fields) -> std::string {
    const auto& o = j[obj];
    for (const auto& f : fields) {
      if (!o.contains(f.key)) return std::string("missing key '") + obj + "." + f.key + "'";
      if (!has_type(o[f.key], f.type)) return std::string("wrong type for '") + obj + "." + f.key + "'";
    }
    return {};
  };
  std::string err;
  if (!(err = check_obj("pose", {{"x", T::Num}, {"y", T::Num}, {"heading", T::Num}})).empty()) return err;
  if (!(err = check_obj("boom", {{"vertical_in", T::Num},
                                 {"horizontal_in", T::Num},
                                 {"yaw_deg", T::Num},
                                 {"pitch_deg", T::Num}}))
           .empty())
    return err;
  if (!(err = check_obj("counters", {{"area_sprayed_m2", T::Num},
                                     {"area_mowed_m2", T::Num},
                                     {"liquid_l", T::Num},
                                     {"distance_m", T::Num}}))
           .empty())
    return err;
  if (!(err = check_obj("flags", {{"battery_dead", T::Bool},
                                  {"pump_dry", T::Bool},
                                  {"boom_clamped", T::Bool},
                                  {"runaway", T::Bool},
                                  {"control_connected", T::Bool}}))
           .empty())
    return err;

  const std::string motion = j["motion"];
  if (motion != "STOPPED" && motion != "FORWARD" && motion != "BACKWARD" && motion != "LEFT" && motion != "RIGHT")
    return "unknown motion '" + motion + "'";
  const std::string mode = j["mode"];
  if (mode != "faithful" && mode != "corrected") return "unknown mode '" + mode + "'";
  const double soc = j["soc_pct"];
  if (soc < 0.0 || soc > 100.0) return "soc_pct out of [0, 100]";
  if (j["tank_l"].get<double>() < 0.0) return "tank_l negative";
  const auto pwm = j["speed_pwm"].get<long long>();
  if (pwm < 0 || pwm > 255) return "speed_pwm out of [0, 255]";
  const auto turns = j["nozzle_turns"].get<long long>();
  if (turns < 0 || turns > 7) return "nozzle_turns out of [0, 7]";
  const double h = j["pose"]["heading"];
  if (!(h > -kPi - 1e-12 && h <= kPi + 1e-12)) return "heading not normalized";
  for (const char* k : {"area_sprayed_m2", "area_mowed_m2", "liquid_l", "distance_m"})
    if (j["counters"][k].get<double>() < 0.0) return std::string("negative counter '") + k + "'";
  return {};
}

}  // namespace sprayer
