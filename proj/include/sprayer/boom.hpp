#pragma once

#include <string_view>

#include "sprayer/config.hpp"
#include "sprayer/units.hpp"

namespace sprayer {

enum class NozzleSide { Left, Right };
enum class BoomAxis { Vertical, Horizontal, Yaw, Pitch };

// Four-axis spray boom: vertical lift, horizontal slide, yaw of the
// horizontal T about the vertical axis and nozzle pitch. SI units; both
// nozzles share every axis.
struct BoomState {
  double vertical_ext = 0.0;    // m, [0, cfg.vertical_travel()]
  double horizontal_ext = 0.0;  // m, [0, cfg.horizontal_travel()]
  double yaw = 0.0;             // rad, |yaw| <= cfg.boom_yaw_limit, clockwise from above
  double pitch = 0.0;           // rad, |pitch| <= cfg.nozzle_pitch_limit, up positive
};

struct ClampResult {
  BoomState boom;
  bool clamped = false;
};

ClampResult clamp_boom(const BoomState& b, const RobotConfig& cfg);

double axis_value(const BoomState& b, BoomAxis axis);
void set_axis(BoomState& b, BoomAxis axis, double value);
bool parse_axis(std::string_view name, BoomAxis& out);
std::string_view axis_name(BoomAxis axis);

struct NozzlePose {
  Vec3 position;  // field frame, z above ground
  Vec3 axis;      // unit spray direction
  bool clamped = false;
};

// Nozzle position and spray axis for one side. The horizontal arm points at
// heading + 90 deg - yaw for the left nozzle and heading - 90 deg - yaw for
// the right one (one rigid T). Out-of-range boom values are clamped and
// reported through NozzlePose::clamped.
NozzlePose nozzle_pose(const Pose2D& robot, const BoomState& boom, NozzleSide side, const RobotConfig& cfg);

// Ring swept by the nozzle when the boom yaws a full turn: pi (r_max^2 - r_min^2).
// Throws std::invalid_argument unless 0 <= r_min <= r_max.
double annulus_area(double r_min, double r_max);

// Height gained by pitching an arm of length sqrt(offset^2 + arm^2) by angle_deg.
double pitch_height_gain(double offset, double arm, double angle_deg);

}  // namespace sprayer
