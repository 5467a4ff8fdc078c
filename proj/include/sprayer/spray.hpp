#pragma once

#include <optional>

#include "sprayer/boom.hpp"
#include "sprayer/field_grid.hpp"

namespace sprayer {

// Nozzle cap opening. Droplet size is carried as metadata only; the
// simulator spreads dose uniformly over the footprint.
struct NozzleSetting {
  int cap_turns = 0;
  double droplet_um = 0.0;
  double range_in = 0.0;  // throw distance along the spray axis
  double half_angle = 0.0;  // rad
  double flow_lpm = 0.0;

  bool closed() const { return cap_turns == 0 || range_in <= 0.0; }
};

// Cap turns -> droplet size and throw distance. Measured rows at 1, 3, 5 and
// 7 turns; even turns interpolate linearly; 0 is closed. half_angle and
// flow are filled from the arguments. Throws std::out_of_range outside [0, 7].
NozzleSetting setting_from_turns(int turns, double half_angle = 0.0, double flow_lpm = 0.0);

struct SprayFootprint {
  Vec2 center;
  double radius = 0.0;    // m
  double distance = 0.0;  // m along the axis from nozzle to plane
};

// Ground disc hit by the spray cone on the horizontal plane at plane_height.
// nullopt if the nozzle is closed, sits at or below the plane, or the axis
// does not reach the plane within the throw distance.
std::optional<SprayFootprint> spray_footprint(const NozzlePose& nozzle, const NozzleSetting& setting,
                                              double plane_height = 0.0);

// Total surface area of a right cone, pi R L + pi R^2.
double cone_tsa(double radius, double slant);

struct TankState {
  double level = 0.0;  // L
  double capacity = 1.0;
};

struct SprayResult {
  double dispensed = 0.0;  // L drawn from the tank
  double on_grid = 0.0;    // L landed on field cells
  double discarded = 0.0;  // L off-field or off-target
  bool dry = false;        // pump ran with an empty tank
};

// Dispenses min(flow * dt / 60, tank level) and paints it over the
// footprint; without a footprint the liquid is dispensed but lands nowhere.
// Throws std::invalid_argument if dt <= 0.
SprayResult apply_spray(FieldGrid& grid, const std::optional<SprayFootprint>& footprint, double flow_lpm,
                        double dt, TankState& tank);

// Same, for a footprint that moved during the step: the dose is split over
// discs interpolated from `from` to `to` (centre and radius), spaced at most
// half a cell apart, so a moving spray paints a continuous band whatever the
// step size. Without `from` this is apply_spray(grid, to, ...).
SprayResult apply_spray_path(FieldGrid& grid, const std::optional<SprayFootprint>& from,
                             const std::optional<SprayFootprint>& to, double flow_lpm, double dt, TankState& tank);

// Area cut by the blade when stationary, pi r^2.
double mower_active_area(double blade_sweep_radius);

}  // namespace sprayer
