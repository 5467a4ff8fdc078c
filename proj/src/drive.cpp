#include "sprayer/drive.hpp"

#include <cmath>
#include <stdexcept>

namespace sprayer {

double channel_speed(const MotorChannelState& ch, double v_max) {
  const double magnitude = v_max * static_cast<double>(ch.pwm) / 255.0;
  switch (ch.direction) {
    case Direction::Forward:
      return magnitude;
    case Direction::Backward:
      return -magnitude;
    case Direction::Release:
      break;
  }
  return 0.0;
}

Twist body_twist(const DriveState& drive, const RobotConfig& cfg) {
  const auto& c = drive.channels;
  double left = 0.5 * (channel_speed(c[0], cfg.v_max) + channel_speed(c[1], cfg.v_max));
  double right = 0.5 * (channel_speed(c[2], cfg.v_max) + channel_speed(c[3], cfg.v_max));
  if (cfg.swap_drive_sides) std::swap(left, right);
  return {0.5 * (left + right), (right - left) / cfg.track_width};
}

int running_motors(const DriveState& drive) {
  int n = 0;
  for (const auto& ch : drive.channels)
    if (ch.direction != Direction::Release && ch.pwm > 0) ++n;
  return n;
}

Pose2D integrate_pose(const Pose2D& p, double v, double omega, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("integrate_pose: dt must be > 0");
  if (std::abs(omega) < 1e-9) {
    const double d = v * dt;
    return make_pose(p.x + d * std::cos(p.heading), p.y + d * std::sin(p.heading), p.heading);
  }
  const double th1 = p.heading + omega * dt;
  const double r = v / omega;
  return make_pose(p.x + r * (std::sin(th1) - std::sin(p.heading)),
                   p.y - r * (std::cos(th1) - std::cos(p.heading)), th1);
}

}  // namespace sprayer
