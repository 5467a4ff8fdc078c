#include <cmath>
#include <random>

#include "doctest.h"
#include "sprayer/power.hpp"

using namespace sprayer;

TEST_CASE("instantaneous draw") {
  RobotConfig cfg;
  CHECK(instantaneous_draw(DeviceActivity::prototype_max(), cfg) == doctest::Approx(0.06 * 5 + 0.3 + 0.02));
  CHECK(instantaneous_draw(DeviceActivity::prototype_max(), cfg) == doctest::Approx(0.62));
  CHECK(instantaneous_draw(DeviceActivity{}, cfg) == 0.0);
  CHECK(instantaneous_draw(DeviceActivity::conceptual_max(), cfg) == doctest::Approx(0.62 + 0.6 + 0.5));
  CHECK(instantaneous_draw(DeviceActivity::conceptual_max(), cfg) == doctest::Approx(1.72));
  DeviceActivity silly{9, false, false, false, -3, false};
  CHECK(instantaneous_draw(silly, cfg) == doctest::Approx(4 * 0.06));
}

TEST_CASE("battery step") {
  SUBCASE("equilibrium") {
    auto r = step_battery({2.0, 4.5}, 1.2, 1.2, 10.0);
    CHECK(r.battery.soc == 2.0);
    CHECK(r.delta_ah == 0.0);
  }
  SUBCASE("clamps at both ends") {
    auto r = step_battery({0.001, 4.5}, 10.0, 0.0, 3600.0);
    CHECK(r.battery.soc == 0.0);
    CHECK(r.dead);
    CHECK(r.delta_ah == doctest::Approx(-0.001));
    r = step_battery({4.499, 4.5}, 0.0, 4.5, 3600.0);
    CHECK(r.battery.soc == 4.5);
    CHECK(r.full);
  }
  SUBCASE("empty but the panel covers the load is not dead") {
    auto r = step_battery({0.0, 4.5}, 0.5, 0.6, 1.0);
    CHECK(!r.dead);
  }
  SUBCASE("diode blocks back-feed") {
    auto a = step_battery({2.0, 4.5}, 0.5, -3.0, 60.0);
    auto b = step_battery({2.0, 4.5}, 0.5, 0.0, 60.0);
    CHECK(a.battery.soc == b.battery.soc);
  }
  SUBCASE("bad inputs") {
    CHECK_THROWS_AS(step_battery({1, 4.5}, 0.1, 0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(step_battery({1, 4.5}, -0.1, 0, 1.0), std::invalid_argument);
  }
}

TEST_CASE("discharge and charge by integration") {
  // prototype load drains a full 4.5 Ah battery in 4.5 / 0.62 h
  BatteryState b{4.5, 4.5};
  const double dt = 0.05;
  long ticks = 0;
  while (b.soc > 0.0 && ticks < 10'000'000) {
    b = step_battery(b, 0.62, 0.0, dt).battery;
    ++ticks;
  }
  CHECK(ticks * dt / 3600.0 == doctest::Approx(4.5 / 0.62).epsilon(1e-3));

  b = {0.0, 4.5};
  ticks = 0;
  while (b.soc < b.capacity && ticks < 10'000'000) {
    b = step_battery(b, 0.0, 4.5, dt).battery;
    ++ticks;
  }
  CHECK(ticks * dt / 3600.0 == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("sub-steps equal one step away from the clamps") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> cur(0, 2), soc(1.5, 3.0);
  for (int k = 0; k < 1000; ++k) {
    BatteryState b{soc(rng), 4.5};
    double draw = cur(rng), solar = cur(rng);
    BatteryState many = b;
    for (int i = 0; i < 100; ++i) many = step_battery(many, draw, solar, 0.5).battery;
    BatteryState one = step_battery(b, draw, solar, 50.0).battery;
    CHECK(many.soc == doctest::Approx(one.soc).epsilon(1e-12));
  }
}

TEST_CASE("closed-form calculators") {
  CHECK(backup_hours(4.5, 0.62) == doctest::Approx(7.258).epsilon(1e-4));
  CHECK(backup_hours(4.5, 1.72) == doctest::Approx(2.616).epsilon(1e-4));
  CHECK(backup_hours(3.3, 3.3) == 1.0);
  CHECK_THROWS_AS(backup_hours(4.5, 0.0), InfiniteBackup);
  CHECK_THROWS_AS(backup_hours(-1, 1), std::invalid_argument);
  CHECK(charge_hours(4.5, 4.5) == 1.0);
  CHECK(panel_current(100, 21) == doctest::Approx(4.762).epsilon(1e-4));
  CHECK(panel_current(0, 12) == 0.0);
  CHECK(panel_current(12, 12) == 1.0);
  CHECK_THROWS_AS(panel_current(100, 0), std::invalid_argument);
}
