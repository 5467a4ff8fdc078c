#pragma once

#include <string>

#include "sprayer/field_grid.hpp"

namespace sprayer {

// Plain (P2) graymap of spray dose, scaled so the largest dose is 255.
// Row 0 of the image is the far edge (largest y) of the field.
std::string dose_pgm(const FieldGrid& grid);

// Plain graymap of mowed cells: 255 mowed, 0 not.
std::string mowed_pgm(const FieldGrid& grid);

// CSV with header `i,j,x_m,y_m,dose_l,mowed`, one row per cell, j-major.
std::string coverage_table(const FieldGrid& grid);

// Single-line coverage snapshot for telemetry subscribers: run-length
// encoded mowed and sprayed masks, row-major from j = 0.
std::string coverage_json(const FieldGrid& grid, double t);

}  // namespace sprayer
