#include <cmath>
#include <random>

#include "doctest.h"
#include "sprayer/drive.hpp"

using namespace sprayer;

namespace {

DriveState sides(Direction left, Direction right, std::uint8_t pwm = 255) {
  DriveState d;
  d.channels[0] = d.channels[1] = {left, pwm};
  d.channels[2] = d.channels[3] = {right, pwm};
  return d;
}

Direction flip(Direction d) {
  if (d == Direction::Forward) return Direction::Backward;
  if (d == Direction::Backward) return Direction::Forward;
  return d;
}

}  // namespace

TEST_CASE("body twist examples") {
  RobotConfig cfg;
  auto t = body_twist(sides(Direction::Forward, Direction::Forward), cfg);
  CHECK(t.v == doctest::Approx(1.43));
  CHECK(t.omega == 0.0);

  t = body_twist(DriveState::released(), cfg);
  CHECK(t.v == 0.0);
  CHECK(t.omega == 0.0);

  t = body_twist(sides(Direction::Backward, Direction::Forward), cfg);
  CHECK(t.v == doctest::Approx(0.0));
  CHECK(t.omega == doctest::Approx((1.43 - (-1.43)) / 0.475));
  CHECK(t.omega == doctest::Approx(6.021).epsilon(1e-4));
}

TEST_CASE("release ignores pwm") {
  RobotConfig cfg;
  MotorChannelState ch{Direction::Release, 200};
  CHECK(channel_speed(ch, cfg.v_max) == 0.0);
}

TEST_CASE("swapped sides mirror the turn") {
  RobotConfig cfg;
  cfg.swap_drive_sides = true;
  auto t = body_twist(sides(Direction::Backward, Direction::Forward), cfg);
  CHECK(t.omega == doctest::Approx(-6.0210526).epsilon(1e-6));
}

TEST_CASE("twist is odd under reversal and linear in pwm") {
  RobotConfig cfg;
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> dir(0, 2), pwm(0, 127);
  for (int k = 0; k < 2000; ++k) {
    DriveState d;
    for (auto& ch : d.channels) ch = {static_cast<Direction>(dir(rng)), static_cast<std::uint8_t>(pwm(rng) * 2)};
    DriveState r = d, h = d;
    for (auto& ch : r.channels) ch.direction = flip(ch.direction);
    for (auto& ch : h.channels) ch.pwm = static_cast<std::uint8_t>(ch.pwm / 2);
    auto t = body_twist(d, cfg), tr = body_twist(r, cfg), th = body_twist(h, cfg);
    CHECK(tr.v == -t.v);
    CHECK(tr.omega == -t.omega);
    CHECK(th.v == doctest::Approx(t.v / 2).epsilon(1e-14));
    CHECK(th.omega == doctest::Approx(t.omega / 2).epsilon(1e-14));
  }
}

TEST_CASE("running motor count") {
  CHECK(running_motors(DriveState::released()) == 0);
  CHECK(running_motors(sides(Direction::Forward, Direction::Backward)) == 4);
  CHECK(running_motors(sides(Direction::Forward, Direction::Forward, 0)) == 0);
}

TEST_CASE("integrate_pose examples") {
  auto p = integrate_pose({0, 0, 0}, 1.43, 0.0, 1.0);
  CHECK(p.x == doctest::Approx(1.43));
  CHECK(p.y == doctest::Approx(0.0));
  CHECK(p.heading == 0.0);

  Pose2D q = make_pose(1.2, -0.4, 2.0);
  auto same = integrate_pose(q, 0.0, 0.0, 3.0);
  CHECK(same.x == q.x);
  CHECK(same.y == q.y);
  CHECK(same.heading == q.heading);

  auto spin = integrate_pose({0, 0, 0}, 0.0, kPi, 1.0);
  CHECK(spin.x == doctest::Approx(0.0));
  CHECK(spin.y == doctest::Approx(0.0));
  CHECK(spin.heading == doctest::Approx(kPi));

  // quarter circle of radius 1: (0,0,0) -> (1,1,pi/2)
  auto arc = integrate_pose({0, 0, 0}, kPi / 2, kPi / 2, 1.0);
  CHECK(arc.x == doctest::Approx(1.0));
  CHECK(arc.y == doctest::Approx(1.0));
  CHECK(arc.heading == doctest::Approx(kPi / 2));

  CHECK_THROWS_AS(integrate_pose({0, 0, 0}, 1, 0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(integrate_pose({0, 0, 0}, 1, 0, -1.0), std::invalid_argument);
}

TEST_CASE("n steps equal one long step") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> v(-1.5, 1.5), w(-6.1, 6.1), pos(-3, 3), hd(-3.1, 3.1);
  for (int k = 0; k < 500; ++k) {
    Pose2D p0 = make_pose(pos(rng), pos(rng), hd(rng));
    const double vv = v(rng), ww = k % 10 == 0 ? 0.0 : w(rng);
    const int n = 40;
    const double dt = 0.05;
    Pose2D p = p0;
    for (int i = 0; i < n; ++i) p = integrate_pose(p, vv, ww, dt);
    Pose2D one = integrate_pose(p0, vv, ww, n * dt);
    CHECK(std::hypot(p.x - one.x, p.y - one.y) <= 1e-9);
    CHECK(std::abs(normalize_angle(p.heading - one.heading)) <= 1e-9);
    CHECK(p.heading > -kPi);
    CHECK(p.heading <= kPi);
  }
}
