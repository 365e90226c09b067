#pragma once

#include <filesystem>
#include <string>

#include "lowcon/grid.hpp"

namespace lowcon {

/// CSV layout: first line the header "nx,ny,hx,hy", second line the four
/// values, then one grid row of samples per line (row-major, y increasing).
/// Node fields carry (nx+1)*(ny+1) samples, cell fields nx*ny.
void write_csv(const std::filesystem::path& path, const ScalarField& f);
void write_csv(const std::filesystem::path& path, const CellField& f);
ScalarField read_scalar_csv(const std::filesystem::path& path);
CellField read_cell_csv(const std::filesystem::path& path);

/// 8-bit binary PGM, min-max normalized. With `invert` the maximum maps to
/// black (used for theta maps: theta = 1 renders black).
void write_pgm(const std::filesystem::path& path, const ScalarField& f,
               bool invert = false);
void write_pgm(const std::filesystem::path& path, const CellField& f,
               bool invert = false);

}  // namespace lowcon
