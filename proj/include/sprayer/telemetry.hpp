#pragma once

#include <string>
#include <string_view>

#include "sprayer/sim.hpp"

namespace sprayer {

inline constexpr std::string_view kTelemetrySchema = "sprayer.telemetry/1";

// Station-side annotations that are not simulation state.
struct LinkStatus {
  bool control_connected = true;
};

struct TelemetryFrame {
  double t = 0.0;
  std::int64_t tick = 0;
  Pose2D pose;
  double v = 0.0;
  double omega = 0.0;
  double soc_pct = 0.0;
  double tank_l = 0.0;
  double draw_a = 0.0;
  bool mower_pin = false;
  bool pump_pin = false;
  bool mower_flag = false;
  bool pump_flag = false;
  Motion motion = Motion::Stopped;
  ControllerMode mode = ControllerMode::Faithful;
  int speed_pwm = 255;
  BoomState boom;
  int nozzle_turns = 0;
  bool solar_on = false;
  bool power_on = true;
  double area_sprayed = 0.0;
  double area_mowed = 0.0;
  double liquid_used = 0.0;
  double distance = 0.0;
  SimFlags flags;
  bool control_connected = true;
  bool runaway = false;  // moving with no control link to stop it
};

TelemetryFrame make_frame(const Simulation& sim, const LinkStatus& link = {});

// Single-line structured text (no embedded newlines).
std::string frame_to_json(const TelemetryFrame& f);

// Returns an empty string when the line is a valid frame, otherwise the
// first problem found.
std::string validate_frame_json(std::string_view line);

}  // namespace sprayer
