#pragma once

#include <functional>
#include <vector>

#include "lowcon/congestion.hpp"

namespace lowcon {

using Polyline = std::vector<Vec2>;

// Marching squares over an nw x nh node lattice. value(i,j) gives the nodal
// field, nodes sit at (ox + i*sx, oy + j*sy). Returns chained polylines;
// closed chains repeat the first vertex at the end. Orientation convention:
// the region with field > level lies to the left of the direction of travel.
// Ambiguous (saddle) cells are resolved by the cell-center average.
std::vector<Polyline> marching_squares(int nw, int nh,
                                       const std::function<double(int, int)>& value,
                                       double level, double ox, double oy,
                                       double sx, double sy);

double polyline_length(const Polyline& p);

}  // namespace lowcon
