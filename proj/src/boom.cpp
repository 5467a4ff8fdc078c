#include "sprayer/boom.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sprayer {

namespace {

double clamp_value(double v, double lo, double hi, bool& clamped) {
  if (std::isnan(v)) {
    clamped = true;
    return std::clamp(0.0, lo, hi);
  }
  if (v < lo || v > hi) {
    clamped = true;
    return std::clamp(v, lo, hi);
  }
  return v;
}

}  // namespace

ClampResult clamp_boom(const BoomState& b, const RobotConfig& cfg) {
  ClampResult r;
  r.boom.vertical_ext = clamp_value(b.vertical_ext, 0.0, cfg.vertical_travel(), r.clamped);
  r.boom.horizontal_ext = clamp_value(b.horizontal_ext, 0.0, cfg.horizontal_travel(), r.clamped);
  r.boom.yaw = clamp_value(b.yaw, -cfg.boom_yaw_limit, cfg.boom_yaw_limit, r.clamped);
  r.boom.pitch = clamp_value(b.pitch, -cfg.nozzle_pitch_limit, cfg.nozzle_pitch_limit, r.clamped);
  return r;
}

double axis_value(const BoomState& b, BoomAxis axis) {
  switch (axis) {
    case BoomAxis::Vertical:
      return b.vertical_ext;
    case BoomAxis::Horizontal:
      return b.horizontal_ext;
    case BoomAxis::Yaw:
      return b.yaw;
    case BoomAxis::Pitch:
      return b.pitch;
  }
  return 0.0;
}

void set_axis(BoomState& b, BoomAxis axis, double value) {
  switch (axis) {
    case BoomAxis::Vertical:
      b.vertical_ext = value;
      break;
    case BoomAxis::Horizontal:
      b.horizontal_ext = value;
      break;
    case BoomAxis::Yaw:
      b.yaw = value;
      break;
    case BoomAxis::Pitch:
      b.pitch = value;
      break;
  }
}

bool parse_axis(std::string_view name, BoomAxis& out) {
  if (name == "vertical") {
    out = BoomAxis::Vertical;
  } else if (name == "horizontal") {
    out = BoomAxis::Horizontal;
  } else if (name == "yaw") {
    out = BoomAxis::Yaw;
  } else if (name == "pitch") {
    out = BoomAxis::Pitch;
  } else {
    return false;
  }
  return true;
}

std::string_view axis_name(BoomAxis axis) {
  switch (axis) {
    case BoomAxis::Vertical:
      return "vertical";
    case BoomAxis::Horizontal:
      return "horizontal";
    case BoomAxis::Yaw:
      return "yaw";
    case BoomAxis::Pitch:
      return "pitch";
  }
  return "?";
}

NozzlePose nozzle_pose(const Pose2D& robot, const BoomState& boom_in, NozzleSide side, const RobotConfig& cfg) {
  auto [boom, clamped] = clamp_boom(boom_in, cfg);
  const double reach = cfg.nozzle_reach_min + boom.horizontal_ext;
  const double side_angle = side == NozzleSide::Left ? kPi / 2 : -kPi / 2;
  const double arm = robot.heading + side_angle - boom.yaw;
  const double cx = std::cos(arm);
  const double cy = std::sin(arm);

  NozzlePose n;
  n.position = {robot.x + reach * cx, robot.y + reach * cy, cfg.nozzle_height_min + boom.vertical_ext};
  const double cp = std::cos(boom.pitch);
  n.axis = {cp * cx, cp * cy, std::sin(boom.pitch)};
  n.clamped = clamped;
  return n;
}

double annulus_area(double r_min, double r_max) {
  if (!(r_min >= 0.0) || !(r_min <= r_max)) throw std::invalid_argument("annulus_area: need 0 <= r_min <= r_max");
  return kPi * (r_max * r_max - r_min * r_min);
}

double pitch_height_gain(double offset, double arm, double angle_deg) {
  if (!(offset >= 0.0) || !(arm >= 0.0)) throw std::invalid_argument("pitch_height_gain: lengths must be >= 0");
  return std::hypot(offset, arm) * std::sin(deg_to_rad(angle_deg));
}

}  // namespace sprayer
