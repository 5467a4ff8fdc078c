#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "sprayer/units.hpp"

namespace sprayer {

// Result of depositing a dose over a disc.
struct PaintResult {
  std::size_t cells_painted = 0;  // inside the field
  std::size_t cells_total = 0;    // including cells clipped by the field edge
  double dose_applied = 0.0;      // L landed on the grid
  double dose_discarded = 0.0;    // L clipped or with no cell to land on
};

// Discretized rectangular field, origin at one corner, x along width and y
// along height. Cell (i, j) has its centre at ((i + 0.5) c, (j + 0.5) c).
// The cell lattice extends conceptually beyond the field so that a disc near
// the edge splits its dose over all of its cells and the share of outside
// cells is discarded.
class FieldGrid {
 public:
  FieldGrid() = default;
  // Throws std::invalid_argument unless width, height and cell_size are > 0
  // and the field holds at least one cell in each direction.
  FieldGrid(double width, double height, double cell_size = 0.05);

  double width() const { return width_; }
  double height() const { return height_; }
  double cell_size() const { return cell_; }
  std::size_t nx() const { return nx_; }
  std::size_t ny() const { return ny_; }
  double cell_area() const { return cell_ * cell_; }

  Vec2 cell_center(std::size_t i, std::size_t j) const {
    return {(static_cast<double>(i) + 0.5) * cell_, (static_cast<double>(j) + 0.5) * cell_};
  }

  double dose(std::size_t i, std::size_t j) const { return dose_[j * nx_ + i]; }
  bool mowed(std::size_t i, std::size_t j) const { return mowed_[j * nx_ + i] != 0; }

  // Adds dose / (cells of the disc) to each in-field cell whose centre lies
  // within radius of center. radius <= 0 paints nothing and discards the
  // whole dose.
  PaintResult paint_disc(Vec2 center, double radius, double dose);

  // Marks every cell whose centre lies within radius of the segment from-to
  // (a capsule; a disc when from == to). Returns the number of newly mowed
  // cells.
  std::size_t paint_mow_swath(Vec2 from, Vec2 to, double radius);

  std::size_t mowed_cells() const { return mowed_count_; }
  std::size_t sprayed_cells() const { return sprayed_count_; }
  double area_mowed() const { return static_cast<double>(mowed_count_) * cell_area(); }
  double area_sprayed() const { return static_cast<double>(sprayed_count_) * cell_area(); }
  double field_area() const { return static_cast<double>(nx_ * ny_) * cell_area(); }
  double total_dose() const;
  double max_dose() const;

  void clear();

 private:
  double width_ = 0.0;
  double height_ = 0.0;
  double cell_ = 0.05;
  std::size_t nx_ = 0;
  std::size_t ny_ = 0;
  std::vector<double> dose_;
  std::vector<std::uint8_t> mowed_;
  std::size_t mowed_count_ = 0;
  std::size_t sprayed_count_ = 0;
};

// Distance from p to the closed segment a-b.
double point_segment_distance(Vec2 p, Vec2 a, Vec2 b);

}  // namespace sprayer
