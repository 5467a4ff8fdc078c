#pragma once

// Differential check of the faithful controller against the transcribed
// program, shared by the unit and acceptance suites.

#include <cstdint>
#include <random>
#include <string>

#include "reference_sketch.hpp"
#include "sprayer/controller.hpp"

namespace conformance {

inline sprayer::Motion reference_motion(const refsketch::Sketch& s) {
  using refsketch::BACKWARD;
  using refsketch::FORWARD;
  using refsketch::RELEASE;
  auto m = s.motors();
  auto all = [&](refsketch::Dir a, refsketch::Dir b) {
    return m[0].dir == a && m[1].dir == a && m[2].dir == b && m[3].dir == b;
  };
  if (all(RELEASE, RELEASE)) return sprayer::Motion::Stopped;
  if (all(FORWARD, FORWARD)) return sprayer::Motion::Forward;
  if (all(BACKWARD, BACKWARD)) return sprayer::Motion::Backward;
  if (all(BACKWARD, FORWARD)) return sprayer::Motion::Left;
  if (all(FORWARD, BACKWARD)) return sprayer::Motion::Right;
  return static_cast<sprayer::Motion>(255);  // a pattern the emulation can never produce
}

// Empty string when the emulation agrees with the reference on everything
// observable after a byte; otherwise a description of the first mismatch.
inline std::string compare(const refsketch::Sketch& ref, const sprayer::ControllerStep& got) {
  if (got.state.motion != reference_motion(ref)) return "motion";
  if (got.state.mower_flag != ref.mower) return "mower flag";
  if (got.state.pump_flag != ref.pump) return "pump flag";
  if (got.state.mower_pin != ref.mower_FR) return "mower pin";
  if (got.state.pump_pin != ref.pump_RE) return "pump pin";
  auto m = ref.motors();
  for (int k = 0; k < 4; ++k) {
    const auto& ch = got.drive.channels[static_cast<std::size_t>(k)];
    const sprayer::Direction want = m[k].dir == refsketch::FORWARD    ? sprayer::Direction::Forward
                                    : m[k].dir == refsketch::BACKWARD ? sprayer::Direction::Backward
                                                                      : sprayer::Direction::Release;
    if (ch.direction != want || ch.pwm != m[k].speed) return "channel M" + std::to_string(k + 1);
  }
  return {};
}

struct Outcome {
  long streams = 0;
  long bytes = 0;
  long mismatches = 0;
  std::string first_failure;
};

// Random streams mix the command alphabet with arbitrary bytes so that flag
// toggles, repeats and the default case all occur often.
inline Outcome run_random_streams(long streams, std::uint64_t seed, int max_len = 64) {
  static const char kAlphabet[] = "FBLRWwUuS";
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> len(1, max_len), pick(0, 11), any(0, 255);
  Outcome out;
  sprayer::RobotConfig cfg;
  cfg.controller_mode = sprayer::ControllerMode::Faithful;
  for (long s = 0; s < streams; ++s) {
    refsketch::Sketch ref;
    auto state = sprayer::ControllerState::power_on(cfg);
    const int n = len(rng);
    for (int k = 0; k < n; ++k) {
      const int p = pick(rng);
      const auto byte = static_cast<std::uint8_t>(p < 9 ? kAlphabet[p] : any(rng));
      ref.receive(byte);
      auto step = sprayer::step_controller(state, byte);
      state = step.state;
      ++out.bytes;
      std::string why = compare(ref, step);
      if (!why.empty()) {
        if (out.mismatches == 0)
          out.first_failure = "stream " + std::to_string(s) + " byte " + std::to_string(k) + ": " + why;
        ++out.mismatches;
        break;
      }
    }
    ++out.streams;
  }
  return out;
}

}  // namespace conformance
