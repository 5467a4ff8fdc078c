#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sprayer/boom.hpp"

namespace sprayer {

// Something the operator does to the robot. Bytes travel over the emulated
// serial link; everything else is a hand adjustment on the robot itself
// (boom, nozzle cap, panel exposure, main switch) or, for Speed, a
// corrected-mode station setting.
enum class ActionKind : std::uint8_t { Send, Boom, Nozzle, Solar, Speed, Switch };

struct Action {
  ActionKind kind = ActionKind::Send;
  std::string bytes;              // Send
  BoomAxis axis = BoomAxis::Vertical;  // Boom
  double value = 0.0;             // Boom, SI (m or rad)
  int number = 0;                 // Nozzle turns, Speed pwm
  bool on = false;                // Solar, Switch

  static Action send(std::string b) {
    Action a;
    a.kind = ActionKind::Send;
    a.bytes = std::move(b);
    return a;
  }
  static Action boom(BoomAxis axis, double value_si) {
    Action a;
    a.kind = ActionKind::Boom;
    a.axis = axis;
    a.value = value_si;
    return a;
  }
  static Action nozzle(int turns) {
    Action a;
    a.kind = ActionKind::Nozzle;
    a.number = turns;
    return a;
  }
  static Action solar(bool on) {
    Action a;
    a.kind = ActionKind::Solar;
    a.on = on;
    return a;
  }
  static Action speed(int pwm) {
    Action a;
    a.kind = ActionKind::Speed;
    a.number = pwm;
    return a;
  }
  static Action power_switch(bool on) {
    Action a;
    a.kind = ActionKind::Switch;
    a.on = on;
    return a;
  }
};

class ScriptError : public std::runtime_error {
 public:
  ScriptError(int line, const std::string& msg)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct ScriptEvent {
  double at = 0.0;  // s
  int line = 0;
  Action action;
};

struct MissionScript {
  std::vector<ScriptEvent> events;  // non-decreasing time, file order kept
  double end_at = 0.0;
  int end_line = 0;
};

// Grammar, one event per line, `#` to end of line is a comment:
//   <t> SEND <token>...        each token is 0xNN (one byte) or literal chars
//   <t> BOOM <axis> <value>    vertical|horizontal in inches, yaw|pitch in degrees
//   <t> NOZZLE <turns>         0-7
//   <t> SOLAR on|off
//   <t> SPEED <pwm>            0-255, corrected mode only
//   <t> SWITCH on|off          main power switch
//   <t> END                    exactly once, last
// Throws ScriptError with the offending line number.
MissionScript parse_script(std::string_view text);

// Parses one directive line without a leading time (`BOOM pitch -20`).
// Throws ScriptError(0, ...) on malformed input. END is not a directive.
Action parse_action(std::string_view text);

// Canonical one-line form, the inverse of parse_action.
std::string format_action(const Action& a);

std::string format_script(const MissionScript& s);

// Tick index an event time falls on: nearest tick, ties toward the earlier.
std::int64_t quantize_time(double at, double dt);

}  // namespace sprayer
