#include "sprayer/field_grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sprayer {

namespace {

// Lattice index range [lo, hi] of cell centres within [a, b] along one axis.
std::pair<long long, long long> index_range(double a, double b, double cell) {
  auto lo = static_cast<long long>(std::ceil(a / cell - 0.5));
  auto hi = static_cast<long long>(std::floor(b / cell - 0.5));
  return {lo, hi};
}

}  // namespace

FieldGrid::FieldGrid(double width, double height, double cell_size)
    : width_(width), height_(height), cell_(cell_size) {
  if (!(width > 0.0) || !(height > 0.0) || !std::isfinite(width) || !std::isfinite(height))
    throw std::invalid_argument("field width and height must be > 0");
  if (!(cell_size > 0.0) || !std::isfinite(cell_size)) throw std::invalid_argument("cell size must be > 0");
  nx_ = static_cast<std::size_t>(std::floor(width / cell_size + 1e-9));
  ny_ = static_cast<std::size_t>(std::floor(height / cell_size + 1e-9));
  if (nx_ == 0 || ny_ == 0) throw std::invalid_argument("field is smaller than one cell");
  if (nx_ * ny_ > 200'000'000) throw std::invalid_argument("field grid too large");
  dose_.assign(nx_ * ny_, 0.0);
  mowed_.assign(nx_ * ny_, 0);
}

PaintResult FieldGrid::paint_disc(Vec2 center, double radius, double dose) {
  PaintResult r;
  if (!(radius > 0.0) || nx_ == 0) {
    r.dose_discarded = dose;
    return r;
  }
  const double r2 = radius * radius;
  auto [i0, i1] = index_range(center.x - radius, center.x + radius, cell_);
  auto [j0, j1] = index_range(center.y - radius, center.y + radius, cell_);

  auto inside = [&](long long i, long long j) {
    double dx = (static_cast<double>(i) + 0.5) * cell_ - center.x;
    double dy = (static_cast<double>(j) + 0.5) * cell_ - center.y;
    return dx * dx + dy * dy <= r2;
  };

  for (long long j = j0; j <= j1; ++j)
    for (long long i = i0; i <= i1; ++i)
      if (inside(i, j)) ++r.cells_total;

  if (r.cells_total == 0) {
    r.dose_discarded = dose;
    return r;
  }
  const double share = dose / static_cast<double>(r.cells_total);

  const long long ci0 = std::max<long long>(i0, 0);
  const long long ci1 = std::min<long long>(i1, static_cast<long long>(nx_) - 1);
  const long long cj0 = std::max<long long>(j0, 0);
  const long long cj1 = std::min<long long>(j1, static_cast<long long>(ny_) - 1);
  for (long long j = cj0; j <= cj1; ++j) {
    for (long long i = ci0; i <= ci1; ++i) {
      if (!inside(i, j)) continue;
      double& cell = dose_[static_cast<std::size_t>(j) * nx_ + static_cast<std::size_t>(i)];
      if (cell == 0.0 && share > 0.0) ++sprayed_count_;
      cell += share;
      ++r.cells_painted;
    }
  }
  r.dose_applied = share * static_cast<double>(r.cells_painted);
  r.dose_discarded = dose - r.dose_applied;
  return r;
}

std::size_t FieldGrid::paint_mow_swath(Vec2 from, Vec2 to, double radius) {
  if (!(radius > 0.0) || nx_ == 0) return 0;
  auto [i0, i1] = index_range(std::min(from.x, to.x) - radius, std::max(from.x, to.x) + radius, cell_);
  auto [j0, j1] = index_range(std::min(from.y, to.y) - radius, std::max(from.y, to.y) + radius, cell_);
  i0 = std::max<long long>(i0, 0);
  j0 = std::max<long long>(j0, 0);
  i1 = std::min<long long>(i1, static_cast<long long>(nx_) - 1);
  j1 = std::min<long long>(j1, static_cast<long long>(ny_) - 1);

  std::size_t fresh = 0;
  for (long long j = j0; j <= j1; ++j) {
    for (long long i = i0; i <= i1; ++i) {
      auto idx = static_cast<std::size_t>(j) * nx_ + static_cast<std::size_t>(i);
      if (mowed_[idx]) continue;
      Vec2 c = cell_center(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
      if (point_segment_distance(c, from, to) <= radius) {
        mowed_[idx] = 1;
        ++fresh;
      }
    }
  }
  mowed_count_ += fresh;
  return fresh;
}

double FieldGrid::total_dose() const {
  double s = 0.0;
  for (double d : dose_) s += d;
  return s;
}

double FieldGrid::max_dose() const {
  double m = 0.0;
  for (double d : dose_) m = std::max(m, d);
  return m;
}

void FieldGrid::clear() {
  std::fill(dose_.begin(), dose_.end(), 0.0);
  std::fill(mowed_.begin(), mowed_.end(), 0);
  mowed_count_ = 0;
  sprayed_count_ = 0;
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const double abx = b.x - a.x;
  const double aby = b.y - a.y;
  const double len2 = abx * abx + aby * aby;
  double t = 0.0;
  if (len2 > 0.0) t = std::clamp(((p.x - a.x) * abx + (p.y - a.y) * aby) / len2, 0.0, 1.0);
  const double dx = p.x - (a.x + t * abx);
  const double dy = p.y - (a.y + t * aby);
  return std::sqrt(dx * dx + dy * dy);
}

}  // namespace sprayer
