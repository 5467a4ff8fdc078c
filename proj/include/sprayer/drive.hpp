#pragma once

#include <array>
#include <cstdint>

#include "sprayer/config.hpp"
#include "sprayer/units.hpp"

namespace sprayer {

// Motor shield channel command, as the shield library exposes it.
enum class Direction : std::uint8_t { Forward, Backward, Release };

struct MotorChannelState {
  Direction direction = Direction::Release;
  std::uint8_t pwm = 0;

  friend bool operator==(const MotorChannelState&, const MotorChannelState&) = default;
};

// Channels in shield terminal order M1..M4.
struct DriveState {
  std::array<MotorChannelState, 4> channels{};

  static DriveState released() { return {}; }
  friend bool operator==(const DriveState&, const DriveState&) = default;
};

struct Twist {
  double v = 0.0;      // m/s, forward
  double omega = 0.0;  // rad/s, CCW positive
};

// Signed channel speed in m/s; zero when released.
double channel_speed(const MotorChannelState& ch, double v_max);

// Left side is M1,M2 and right side M3,M4 unless cfg.swap_drive_sides.
Twist body_twist(const DriveState& drive, const RobotConfig& cfg);

// Number of channels currently turning their motor.
int running_motors(const DriveState& drive);

// Exact constant-twist arc integration; straight-line limit below 1e-9 rad/s.
// Throws std::invalid_argument if dt <= 0.
Pose2D integrate_pose(const Pose2D& p, double v, double omega, double dt);

}  // namespace sprayer
