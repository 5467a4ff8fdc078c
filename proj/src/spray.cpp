#include "sprayer/spray.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace sprayer {

namespace {

struct TurnsRow {
  int turns;
  double droplet_um;
  double range_in;
};

constexpr std::array<TurnsRow, 4> kTurnsTable{{
    {1, 100.0, 9.0},
    {3, 150.0, 16.0},
    {5, 200.0, 26.0},
    {7, 1000.0, 35.0},
}};

}  // namespace

NozzleSetting setting_from_turns(int turns, double half_angle, double flow_lpm) {
  if (turns < 0 || turns > 7) throw std::out_of_range("cap turns must lie in [0, 7]");
  NozzleSetting s;
  s.cap_turns = turns;
  s.half_angle = half_angle;
  s.flow_lpm = flow_lpm;
  if (turns == 0) return s;
  for (std::size_t k = 0; k < kTurnsTable.size(); ++k) {
    const auto& row = kTurnsTable[k];
    if (row.turns == turns) {
      s.droplet_um = row.droplet_um;
      s.range_in = row.range_in;
      return s;
    }
    if (row.turns > turns) {
      const auto& prev = kTurnsTable[k - 1];
      const double f = static_cast<double>(turns - prev.turns) / static_cast<double>(row.turns - prev.turns);
      s.droplet_um = prev.droplet_um + f * (row.droplet_um - prev.droplet_um);
      s.range_in = prev.range_in + f * (row.range_in - prev.range_in);
      return s;
    }
  }
  return s;
}

std::optional<SprayFootprint> spray_footprint(const NozzlePose& nozzle, const NozzleSetting& setting,
                                              double plane_height) {
  if (setting.closed()) return std::nullopt;
  const double drop = nozzle.position.z - plane_height;
  if (!(drop > 0.0)) return std::nullopt;
  // The axis must point downward to meet a plane below the nozzle.
  if (!(nozzle.axis.z < 0.0)) return std::nullopt;
  const double distance = drop / -nozzle.axis.z;
  if (distance > in_to_m(setting.range_in) * (1.0 + 1e-12)) return std::nullopt;
  SprayFootprint f;
  f.center = {nozzle.position.x + distance * nozzle.axis.x, nozzle.position.y + distance * nozzle.axis.y};
  f.radius = distance * std::tan(setting.half_angle);
  f.distance = distance;
  return f;
}

double cone_tsa(double radius, double slant) {
  if (!(radius >= 0.0) || !(slant >= 0.0)) throw std::invalid_argument("cone_tsa: lengths must be >= 0");
  return kPi * radius * slant + kPi * radius * radius;
}

SprayResult apply_spray(FieldGrid& grid, const std::optional<SprayFootprint>& footprint, double flow_lpm,
                        double dt, TankState& tank) {
  if (!(dt > 0.0)) throw std::invalid_argument("apply_spray: dt must be > 0");
  SprayResult r;
  const double wanted = std::max(0.0, flow_lpm) * dt / 60.0;
  if (tank.level <= 0.0) {
    tank.level = 0.0;
    r.dry = wanted > 0.0;
    return r;
  }
  // A residue below 1e-12 L is rounding left over from summing flow steps.
  r.dispensed = tank.level - wanted <= 1e-12 ? tank.level : wanted;
  tank.level -= r.dispensed;
  if (footprint) {
    PaintResult p = grid.paint_disc(footprint->center, footprint->radius, r.dispensed);
    r.on_grid = p.dose_applied;
    r.discarded = p.dose_discarded;
  } else {
    r.discarded = r.dispensed;
  }
  return r;
}

SprayResult apply_spray_path(FieldGrid& grid, const std::optional<SprayFootprint>& from,
                             const std::optional<SprayFootprint>& to, double flow_lpm, double dt, TankState& tank) {
  if (!from || !to) return apply_spray(grid, to, flow_lpm, dt, tank);
  const double dx = to->center.x - from->center.x;
  const double dy = to->center.y - from->center.y;
  const double spacing = 0.5 * grid.cell_size();
  const double n_real = std::ceil(std::hypot(dx, dy) / spacing);
  const int n = static_cast<int>(std::clamp(n_real, 1.0, 256.0));
  if (n == 1) return apply_spray(grid, to, flow_lpm, dt, tank);

  SprayResult total = apply_spray(grid, std::nullopt, flow_lpm, dt, tank);
  // Re-land the liquid just drawn over the interpolated discs.
  total.discarded = 0.0;
  const double share = total.dispensed / n;
  for (int k = 1; k <= n; ++k) {
    const double f = static_cast<double>(k) / n;
    const Vec2 c{from->center.x + f * dx, from->center.y + f * dy};
    const double r = from->radius + f * (to->radius - from->radius);
    PaintResult p = grid.paint_disc(c, r, share);
    total.on_grid += p.dose_applied;
    total.discarded += p.dose_discarded;
  }
  return total;
}

double mower_active_area(double blade_sweep_radius) {
  if (!(blade_sweep_radius >= 0.0)) throw std::invalid_argument("mower_active_area: radius must be >= 0");
  return kPi * blade_sweep_radius * blade_sweep_radius;
}

}  // namespace sprayer
