#include "sprayer/coverage_export.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace sprayer {

namespace {

template <typename Pixel>
std::string graymap(const FieldGrid& g, Pixel pixel) {
  std::ostringstream out;
  out << "P2\n" << g.nx() << ' ' << g.ny() << "\n255\n";
  for (std::size_t row = 0; row < g.ny(); ++row) {
    const std::size_t j = g.ny() - 1 - row;
    for (std::size_t i = 0; i < g.nx(); ++i) {
      if (i) out << ' ';
      out << pixel(i, j);
    }
    out << '\n';
  }
  return out.str();
}

template <typename Pred>
std::vector<std::size_t> run_lengths(const FieldGrid& g, Pred pred) {
  // Alternating runs, starting with a run of false cells (possibly 0 long).
  std::vector<std::size_t> runs;
  bool current = false;
  std::size_t len = 0;
  for (std::size_t j = 0; j < g.ny(); ++j) {
    for (std::size_t i = 0; i < g.nx(); ++i) {
      const bool v = pred(i, j);
      if (v != current) {
        runs.push_back(len);
        current = v;
        len = 0;
      }
      ++len;
    }
  }
  runs.push_back(len);
  return runs;
}

}  // namespace

std::string dose_pgm(const FieldGrid& grid) {
  const double max = grid.max_dose();
  return graymap(grid, [&](std::size_t i, std::size_t j) {
    if (max <= 0.0) return 0L;
    return std::lround(255.0 * grid.dose(i, j) / max);
  });
}

std::string mowed_pgm(const FieldGrid& grid) {
  return graymap(grid, [&](std::size_t i, std::size_t j) { return grid.mowed(i, j) ? 255 : 0; });
}

std::string coverage_table(const FieldGrid& grid) {
  std::string out = "i,j,x_m,y_m,dose_l,mowed\n";
  char buf[160];
  for (std::size_t j = 0; j < grid.ny(); ++j) {
    for (std::size_t i = 0; i < grid.nx(); ++i) {
      Vec2 c = grid.cell_center(i, j);
      std::snprintf(buf, sizeof buf, "%zu,%zu,%.6f,%.6f,%.17g,%d\n", i, j, c.x, c.y, grid.dose(i, j),
                    grid.mowed(i, j) ? 1 : 0);
      out += buf;
    }
  }
  return out;
}

std::string coverage_json(const FieldGrid& grid, double t) {
  nlohmann::ordered_json j;
  j["schema"] = "sprayer.telemetry/1";
  j["type"] = "coverage";
  j["t"] = t;
  j["nx"] = grid.nx();
  j["ny"] = grid.ny();
  j["cell_m"] = grid.cell_size();
  j["mowed_rle"] = run_lengths(grid, [&](std::size_t i, std::size_t jj) { return grid.mowed(i, jj); });
  j["sprayed_rle"] = run_lengths(grid, [&](std::size_t i, std::size_t jj) { return grid.dose(i, jj) > 0.0; });
  return j.dump();
}

}  // namespace sprayer
