#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "sprayer/script.hpp"
#include "sprayer/sim.hpp"

using namespace sprayer;

namespace {

MissionReport run(const std::string& text, const RobotConfig& cfg = {}, FieldSpec field = {}, double dt = 0.05) {
  return run_script(parse_script(text), cfg, field, dt);
}

int error_line(const std::string& text) {
  try {
    parse_script(text);
  } catch (const ScriptError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("script grammar") {
  auto s = parse_script(
      "# a comment\n"
      "0 SEND W U F     # inline\n"
      "0.5 SEND 0x53\n"
      "1 BOOM vertical 5\n"
      "1 BOOM yaw -30\n"
      "2 NOZZLE 3\n"
      "2 SOLAR on\n"
      "2.5 SWITCH off\n"
      "3 END\n");
  REQUIRE(s.events.size() == 7);
  CHECK(s.events[0].action.bytes == "WUF");
  CHECK(s.events[0].line == 2);
  CHECK(s.events[1].action.bytes == "S");
  CHECK(s.events[2].action.value == doctest::Approx(in_to_m(5)));
  CHECK(s.events[3].action.value == doctest::Approx(deg_to_rad(-30)));
  CHECK(s.events[4].action.number == 3);
  CHECK(s.events[5].action.on);
  CHECK(s.events[6].action.kind == ActionKind::Switch);
  CHECK(!s.events[6].action.on);
  CHECK(s.end_at == 3.0);
  CHECK(s.end_line == 9);

  // format and parse again
  auto again = parse_script(format_script(s));
  REQUIRE(again.events.size() == s.events.size());
  for (std::size_t k = 0; k < s.events.size(); ++k) {
    CHECK(again.events[k].at == s.events[k].at);
    CHECK(again.events[k].action.kind == s.events[k].action.kind);
    CHECK(again.events[k].action.bytes == s.events[k].action.bytes);
    CHECK(again.events[k].action.value == doctest::Approx(s.events[k].action.value).epsilon(1e-15));
  }
}

TEST_CASE("script errors carry line numbers") {
  CHECK(error_line("0 SEND F\n") == 1);                       // no END
  CHECK(error_line("0 SEND F\n1 END\n2 SEND F\n") == 3);      // after END
  CHECK(error_line("0 END\n0 END\n") == 2);
  CHECK(error_line("1 SEND F\n0.5 SEND B\n2 END\n") == 2);    // time order
  CHECK(error_line("\n\nabc SEND F\n1 END\n") == 3);
  CHECK(error_line("-1 SEND F\n1 END\n") == 1);
  CHECK(error_line("0 JUMP\n1 END\n") == 1);
  CHECK(error_line("0 SEND\n1 END\n") == 1);
  CHECK(error_line("0 BOOM roll 3\n1 END\n") == 1);
  CHECK(error_line("0 BOOM pitch\n1 END\n") == 1);
  CHECK(error_line("0 NOZZLE 8\n1 END\n") == 1);
  CHECK(error_line("0 SOLAR maybe\n1 END\n") == 1);
  CHECK(error_line("0 SPEED 300\n1 END\n") == 1);
  CHECK(error_line("1 END extra\n") == 1);
  CHECK_THROWS_AS(parse_action("END"), ScriptError);
}

TEST_CASE("speed needs corrected mode") {
  auto s = parse_script("0 SPEED 100\n0 SEND F\n1 END\n");
  RobotConfig cfg;
  CHECK_THROWS_AS(validate_script(s, cfg), ScriptError);
  cfg.controller_mode = ControllerMode::Corrected;
  auto r = run_script(s, cfg, {});
  CHECK(r.distance == doctest::Approx(1.43 * 100 / 255));
}

TEST_CASE("time quantisation") {
  CHECK(quantize_time(0.0, 0.05) == 0);
  CHECK(quantize_time(1.0, 0.05) == 20);
  CHECK(quantize_time(0.025, 0.05) == 0);   // tie goes to the earlier tick
  CHECK(quantize_time(0.026, 0.05) == 1);
  CHECK(quantize_time(0.074, 0.05) == 1);
  CHECK(quantize_time(0.075, 0.05) == 1);
  CHECK(quantize_time(7.3, 0.1) == 73);
}

TEST_CASE("idle mission") {
  Simulation sim(RobotConfig{}, FieldSpec{});
  const auto pose = sim.state().pose;
  const double tank = sim.state().tank.level;
  for (int k = 0; k < 100; ++k) sim.step();
  CHECK(sim.state().t == doctest::Approx(5.0));
  CHECK(sim.state().pose.x == pose.x);
  CHECK(sim.state().pose.y == pose.y);
  CHECK(sim.state().pose.heading == pose.heading);
  CHECK(sim.state().tank.level == tank);
  CHECK(sim.state().grid.mowed_cells() == 0);
  CHECK(sim.state().grid.sprayed_cells() == 0);
  // only the controller board draws
  CHECK(sim.tallies().load_ah == doctest::Approx(0.02 * 5.0 / 3600));
}

TEST_CASE("END at zero gives an empty report") {
  auto r = run("0 END\n");
  CHECK(r.ticks == 0);
  CHECK(r.duration == 0.0);
  CHECK(r.distance == 0.0);
  CHECK(r.area_mowed == 0.0);
  CHECK(r.area_sprayed == 0.0);
  CHECK(r.liquid_used == 0.0);
  CHECK(r.charge_used == 0.0);
}

TEST_CASE("one second forward") {
  auto sim = run_mission(parse_script("0 SEND F\n1 END\n"), {}, {});
  CHECK(sim.tick() == 20);
  CHECK(sim.state().pose.x - 2.5 == doctest::Approx(1.43).epsilon(1e-12));
  CHECK(sim.state().pose.y == doctest::Approx(2.5));
  CHECK(sim.report().distance == doctest::Approx(1.43));
}

TEST_CASE("spin turn rate") {
  auto sim = run_mission(parse_script("0 SEND L\n0.5 SEND S\n1 END\n"), {}, {});
  CHECK(sim.state().pose.heading == doctest::Approx(normalize_angle(2 * 1.43 / 0.475 * 0.5)));
  CHECK(sim.state().pose.x == doctest::Approx(2.5));
}

TEST_CASE("pitched nozzle paints at the ray-plane intersection") {
  RobotConfig cfg;  // pitch -40, cap 7, plane 0.75 m
  FieldSpec field{5, 5, 0.025};
  auto sim = run_mission(parse_script("0 SEND U S\n1 END\n"), cfg, field);
  const auto& g = sim.state().grid;
  REQUIRE(g.sprayed_cells() > 0);

  const double z0 = in_to_m(46.8);
  const double d = (z0 - 0.75) / std::sin(deg_to_rad(40));
  const double off = in_to_m(12.5) + d * std::cos(deg_to_rad(40));
  const double radius = d * 5.0 / 20.0;
  // both nozzles: left at +y, right at -y, robot at the field centre heading +x
  double sx[2] = {0, 0}, sy[2] = {0, 0}, n[2] = {0, 0};
  for (std::size_t j = 0; j < g.ny(); ++j)
    for (std::size_t i = 0; i < g.nx(); ++i) {
      if (g.dose(i, j) <= 0) continue;
      auto c = g.cell_center(i, j);
      int side = c.y > 2.5 ? 0 : 1;
      sx[side] += c.x;
      sy[side] += c.y;
      n[side] += 1;
      const double cy = side == 0 ? 2.5 + off : 2.5 - off;
      CHECK(std::hypot(c.x - 2.5, c.y - cy) <= radius + 1e-9);
    }
  CHECK(sx[0] / n[0] == doctest::Approx(2.5).epsilon(1e-3));
  CHECK(sy[0] / n[0] == doctest::Approx(2.5 + off).epsilon(1e-3));
  CHECK(sy[1] / n[1] == doctest::Approx(2.5 - off).epsilon(1e-3));
  CHECK(n[0] * g.cell_area() == doctest::Approx(kPi * radius * radius).epsilon(0.05));
  // the pump reached its pin after the second byte: 20 ticks of 1.5 L/min
  CHECK(sim.report().liquid_used == doctest::Approx(1.5 / 60.0));
}

TEST_CASE("mow lap matches the union of per-tick capsules") {
  const std::string text = "0 SEND W S\n0.05 SEND F\n1 SEND L\n1.2 SEND F\n2 SEND R\n2.3 SEND B\n3 END\n";
  FieldSpec field{5, 5, 0.05};
  std::vector<Pose2D> poses;
  Simulation sim = run_mission(parse_script(text), {}, field, 0.05, [&](const Simulation& s) {
    poses.push_back(s.state().pose);
  });
  FieldGrid oracle(5, 5, 0.05);
  Pose2D prev{2.5, 2.5, 0};
  for (const auto& p : poses) {
    for (std::size_t j = 0; j < oracle.ny(); ++j)
      for (std::size_t i = 0; i < oracle.nx(); ++i) {
        auto c = oracle.cell_center(i, j);
        // brute capsule test via sampling the end points and the segment interior
        const double ex = p.x - prev.x, ey = p.y - prev.y, len = std::hypot(ex, ey);
        bool in = std::hypot(c.x - prev.x, c.y - prev.y) <= 0.31 || std::hypot(c.x - p.x, c.y - p.y) <= 0.31;
        if (!in && len > 0) {
          double along = ((c.x - prev.x) * ex + (c.y - prev.y) * ey) / len;
          double across = std::abs((c.x - prev.x) * ey - (c.y - prev.y) * ex) / len;
          in = along >= 0 && along <= len && across <= 0.31;
        }
        if (in && !oracle.mowed(i, j)) oracle.paint_mow_swath(c, c, 1e-6);
      }
    prev = p;
  }
  CHECK(sim.report().area_mowed == doctest::Approx(oracle.area_mowed()).epsilon(1e-12));
  CHECK(sim.report().area_mowed > 0.5);
}

TEST_CASE("determinism") {
  const std::string text = "0 SEND W U F\n2 SEND L\n2.4 SEND F\n3 BOOM pitch -30\n5 SEND u w S\n6 END\n";
  const auto a = report_to_json(run(text));
  const auto b = report_to_json(run(text));
  CHECK(a == b);
  CHECK(a.find("\"event_digest\"") != std::string::npos);
  const auto c = report_to_json(run("0 SEND W U F\n2 SEND L\n2.4 SEND F\n3 BOOM pitch -31\n5 SEND u w S\n6 END\n"));
  CHECK(a != c);
}

TEST_CASE("main switch") {
  auto r = run("0 SWITCH off\n0 SEND F\n1 END\n");
  CHECK(r.distance == 0.0);
  CHECK(r.bytes_dropped == 1);
  CHECK(r.load_charge == 0.0);
  r = run("0 SEND F\n0.5 SWITCH off\n0.6 SWITCH on\n1 END\n");
  CHECK(r.distance == doctest::Approx(1.43 * 0.5));
}

TEST_CASE("dead battery stops everything") {
  RobotConfig cfg;
  cfg.battery_capacity = 0.001;
  auto sim = run_mission(parse_script("0 SEND W U F\n30 END\n"), cfg, {10, 10, 0.05});
  auto r = sim.report();
  REQUIRE(r.battery_dead_at);
  CHECK(r.final_soc == 0.0);
  CHECK(r.final_flags.battery_dead);
  // 0.001 Ah at 0.62 A lasts 5.806 s; nothing moves afterwards
  CHECK(*r.battery_dead_at == doctest::Approx(0.001 / 0.62 * 3600).epsilon(0.01));
  CHECK(r.distance <= 1.43 * (*r.battery_dead_at) + 1e-9);
  CHECK(sim.state().draw == 0.0);
}

TEST_CASE("electric boom moves at the actuator speed and draws while moving") {
  RobotConfig cfg;
  cfg.boom_actuation = BoomActuation::Electric;
  Simulation sim(cfg, {});
  sim.apply(Action::boom(BoomAxis::Vertical, in_to_m(10)));
  sim.step();
  CHECK(sim.state().boom.vertical_ext == doctest::Approx(0.012 * 0.05));
  CHECK(sim.state().draw == doctest::Approx(0.02 + 0.5));
  for (int k = 0; k < 1000; ++k) sim.step();
  CHECK(sim.state().boom.vertical_ext == doctest::Approx(in_to_m(10)));
  CHECK(sim.state().draw == doctest::Approx(0.02));
  // manual mode jumps and draws nothing extra
  Simulation manual(RobotConfig{}, {});
  manual.apply(Action::boom(BoomAxis::Horizontal, 5.0));
  CHECK(manual.state().boom.horizontal_ext == doctest::Approx(RobotConfig{}.horizontal_travel()));
  CHECK(manual.state().flags.boom_clamped);
  manual.step();
  CHECK(manual.state().draw == doctest::Approx(0.02));
}

TEST_CASE("energy accounting") {
  RobotConfig cfg;
  cfg.battery_initial_fraction = 0.5;
  auto r = run("0 SEND W U F\n5 SOLAR on\n20 SEND S\n40 SOLAR off\n60 END\n", cfg, {20, 20, 0.1});
  CHECK(r.charge_used == doctest::Approx(r.initial_soc - r.final_soc).epsilon(1e-12));
  CHECK(std::abs(r.charge_used - (r.load_charge - r.solar_charge)) <= 1e-6);
  CHECK(r.solar_charge > 0);
  CHECK(r.solar_charge == doctest::Approx(4.5 * 35 / 3600).epsilon(1e-9));
}

TEST_CASE("liquid conservation and metric sanity under fuzzed scripts") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> nev(1, 25), kind(0, 9), byte(0, 12), turns(0, 7), axis(0, 3);
  std::uniform_real_distribution<double> gap(0.0, 3.0), val(-60, 60);
  static const char kBytes[] = "FBLRWwUuSX";
  for (int run_no = 0; run_no < 300; ++run_no) {
    std::ostringstream s;
    double t = 0;
    int n = nev(rng);
    for (int k = 0; k < n; ++k) {
      t += gap(rng);
      s << t << ' ';
      switch (kind(rng)) {
        case 0:
          s << "BOOM " << (const char*[]){"vertical", "horizontal", "yaw", "pitch"}[axis(rng)] << ' ' << val(rng);
          break;
        case 1:
          s << "NOZZLE " << turns(rng);
          break;
        case 2:
          s << "SOLAR " << (byte(rng) % 2 ? "on" : "off");
          break;
        case 3:
          s << "SWITCH " << (byte(rng) % 4 ? "on" : "off");
          break;
        default: {
          int b = byte(rng);
          if (b < 10)
            s << "SEND " << kBytes[b];
          else
            s << "SEND 0x" << std::hex << (b * 37) << std::dec;
        }
      }
      s << '\n';
    }
    s << t + gap(rng) << " END\n";
    RobotConfig cfg;
    cfg.battery_capacity = 0.002;  // small enough that some runs die
    cfg.tank_capacity = 0.05;
    double tank0 = cfg.tank_capacity;
    auto sim = run_mission(parse_script(s.str()), cfg, {3, 3, 0.05}, 0.05, [&](const Simulation& sm) {
      const auto& st = sm.state();
      CHECK(st.battery.soc >= 0.0);
      CHECK(st.battery.soc <= st.battery.capacity);
      CHECK(st.tank.level >= 0.0);
      CHECK(std::isfinite(st.pose.x));
      CHECK(std::isfinite(st.pose.y));
    });
    auto r = sim.report();
    const auto& tl = sim.tallies();
    CHECK(std::abs((tank0 - r.final_tank) - tl.liquid_used) <= 1e-9);
    CHECK(std::abs(tl.liquid_used - (sim.state().grid.total_dose() + tl.liquid_discarded)) <= 1e-9);
    for (double m : {r.duration, r.distance, r.area_mowed, r.area_sprayed, r.liquid_used, r.load_charge,
                     r.solar_charge, r.final_soc, r.final_tank}) {
      CHECK(std::isfinite(m));
      CHECK(m >= 0.0);
    }
    CHECK(r.area_mowed <= r.field_area + 1e-12);
    CHECK(r.area_sprayed <= r.field_area + 1e-12);
  }
}

TEST_CASE("field spec parsing") {
  auto f = parse_field_spec("10.5x3", 0.1);
  CHECK(f.width == 10.5);
  CHECK(f.height == 3.0);
  CHECK(f.cell == 0.1);
  CHECK_THROWS_AS(parse_field_spec("0x0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_field_spec("5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_field_spec("ax3"), std::invalid_argument);
}
