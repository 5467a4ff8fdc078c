#pragma once

#include <cmath>
#include <numbers>

namespace sprayer {

// Exact conversion constants. Everything inside the simulator is SI; inches
// and degrees only appear at config and directive boundaries.
inline constexpr double kInchM = 0.0254;
inline constexpr double kSqInSqM = 0.00064516;
inline constexpr double kPi = std::numbers::pi;

constexpr double in_to_m(double inches) { return inches * kInchM; }
constexpr double m_to_in(double meters) { return meters / kInchM; }
constexpr double sqin_to_sqm(double sq_inches) { return sq_inches * kSqInSqM; }
constexpr double sqm_to_sqin(double sq_meters) { return sq_meters / kSqInSqM; }

constexpr double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
constexpr double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

// Maps any angle into (-pi, pi].
inline double normalize_angle(double a) {
  if (a > -kPi && a <= kPi) return a;
  double r = std::remainder(a, 2.0 * kPi);  // [-pi, pi]
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

struct Pose2D {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;  // radians, (-pi, pi]

  Vec2 position() const { return {x, y}; }
};

inline Pose2D make_pose(double x, double y, double heading) {
  return {x, y, normalize_angle(heading)};
}

}  // namespace sprayer
