#include "sprayer/controller.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sprayer {

namespace {

DriveState pattern(Direction left, Direction right, std::uint8_t left_pwm, std::uint8_t right_pwm) {
  DriveState d;
  d.channels[0] = {left, left_pwm};
  d.channels[1] = {left, left_pwm};
  d.channels[2] = {right, right_pwm};
  d.channels[3] = {right, right_pwm};
  return d;
}

}  // namespace

Command decode_command(std::uint8_t raw) {
  switch (raw) {
    case 'F':
      return Command::Forward;
    case 'B':
      return Command::Back;
    case 'L':
      return Command::Left;
    case 'R':
      return Command::Right;
    case 'W':
      return Command::MowerOn;
    case 'w':
      return Command::MowerOff;
    case 'U':
      return Command::PumpOn;
    case 'u':
      return Command::PumpOff;
    default:
      return Command::Other;
  }
}

std::string_view motion_name(Motion m) {
  switch (m) {
    case Motion::Stopped:
      return "STOPPED";
    case Motion::Forward:
      return "FORWARD";
    case Motion::Backward:
      return "BACKWARD";
    case Motion::Left:
      return "LEFT";
    case Motion::Right:
      return "RIGHT";
  }
  return "?";
}

ControllerState ControllerState::power_on(const RobotConfig& cfg) {
  ControllerState s;
  s.mode = cfg.controller_mode;
  s.turn_ratio = cfg.corrected_turn_ratio;
  return s;
}

DriveState idle_hold(const ControllerState& s) {
  constexpr auto F = Direction::Forward;
  constexpr auto B = Direction::Backward;
  if (s.mode == ControllerMode::Faithful) {
    switch (s.motion) {
      case Motion::Stopped:
        return DriveState::released();
      case Motion::Forward:
        return pattern(F, F, 255, 255);
      case Motion::Backward:
        return pattern(B, B, 255, 255);
      case Motion::Left:
        return pattern(B, F, 255, 255);
      case Motion::Right:
        return pattern(F, B, 255, 255);
    }
    return DriveState::released();
  }

  const std::uint8_t fast = s.speed_pwm;
  const auto slow = static_cast<std::uint8_t>(std::floor(fast * std::clamp(s.turn_ratio, 0.0, 1.0)));
  switch (s.motion) {
    case Motion::Stopped:
      return DriveState::released();
    case Motion::Forward:
      return pattern(F, F, fast, fast);
    case Motion::Backward:
      return pattern(B, B, fast, fast);
    case Motion::Left:
      return pattern(F, F, slow, fast);
    case Motion::Right:
      return pattern(F, F, fast, slow);
  }
  return DriveState::released();
}

ControllerStep step_controller(const ControllerState& s, std::uint8_t byte) {
  ControllerState n = s;
  n.motion = Motion::Stopped;

  auto write_pins = [&n] {
    n.mower_pin = n.mower_flag;
    n.pump_pin = n.pump_flag;
  };

  if (n.mode == ControllerMode::Faithful) {
    n.speed_pwm = 255;
    write_pins();
  }

  switch (decode_command(byte)) {
    case Command::Forward:
      n.motion = Motion::Forward;
      break;
    case Command::Back:
      n.motion = Motion::Backward;
      break;
    case Command::Left:
      n.motion = Motion::Left;
      break;
    case Command::Right:
      n.motion = Motion::Right;
      break;
    case Command::MowerOn:
      n.mower_flag = true;
      break;
    case Command::MowerOff:
      n.mower_flag = false;
      break;
    case Command::PumpOn:
      n.pump_flag = true;
      break;
    case Command::PumpOff:
      n.pump_flag = false;
      break;
    case Command::Other:
      break;
  }

  if (n.mode == ControllerMode::Corrected) write_pins();
  return {n, idle_hold(n)};
}

ControllerState set_speed(const ControllerState& s, int pwm) {
  if (s.mode == ControllerMode::Faithful)
    throw ModeError("speed control requires corrected controller mode; the faithful program always drives at 255");
  if (pwm < 0 || pwm > 255) throw std::out_of_range("pwm must lie in [0, 255], got " + std::to_string(pwm));
  ControllerState n = s;
  n.speed_pwm = static_cast<std::uint8_t>(pwm);
  return n;
}

}  // namespace sprayer
