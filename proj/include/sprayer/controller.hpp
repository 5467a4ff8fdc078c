#pragma once

#include <cstdint>
#include <stdexcept>
#include <string_view>

#include "sprayer/config.hpp"
#include "sprayer/drive.hpp"

namespace sprayer {

// Meaning of one received byte: exactly the case labels of the on-board
// program's command switch. Every other byte is Other and only stops.
enum class Command : std::uint8_t { Forward, Back, Left, Right, MowerOn, MowerOff, PumpOn, PumpOff, Other };

Command decode_command(std::uint8_t raw);

enum class Motion : std::uint8_t { Stopped, Forward, Backward, Left, Right };

std::string_view motion_name(Motion m);

// State of the emulated on-board program. The *_flag fields are the
// program's variables; the *_pin fields are the digital outputs that
// actually switch the mower and pump relays.
struct ControllerState {
  Motion motion = Motion::Stopped;
  bool mower_flag = false;
  bool pump_flag = false;
  bool mower_pin = false;
  bool pump_pin = false;
  std::uint8_t speed_pwm = 255;
  ControllerMode mode = ControllerMode::Faithful;
  double turn_ratio = 0.5;  // corrected mode: inner-side fraction in turns

  static ControllerState power_on(const RobotConfig& cfg);

  friend bool operator==(const ControllerState&, const ControllerState&) = default;
};

struct ControllerStep {
  ControllerState state;
  DriveState drive;
};

// Processes one received byte.
//
// Faithful order, as the program runs it: stop all four channels, write the
// relay pins from the current flags, then dispatch on the byte. A flag
// command therefore reaches its pin only when the next byte arrives.
// Corrected order: dispatch first, then write the pins, and drive at
// speed_pwm with differential (not spin) turns.
ControllerStep step_controller(const ControllerState& s, std::uint8_t byte);

// Channel pattern the state commands; persists while no byte arrives.
DriveState idle_hold(const ControllerState& s);

class ModeError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Speed applies from the next motion byte. Throws ModeError in faithful
// mode, where the program always drives at 255.
ControllerState set_speed(const ControllerState& s, int pwm);

}  // namespace sprayer
