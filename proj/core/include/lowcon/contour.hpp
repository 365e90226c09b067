#pragma once

#include <vector>

#include "lowcon/congestion.hpp"
#include "lowcon/grid.hpp"

namespace lowcon {

// Closed components repeat the first vertex at the end. Orientation: the
// region with field > level lies to the left of travel, so a convex high
// region is traversed counterclockwise.
struct Contour {
  std::vector<Vec2> vertices;
  bool closed = false;

  double length() const;
};

// Marching-squares isolines of a cell field at the given level, evaluated on
// the lattice of cell centers. Only closed components are returned.
std::vector<Contour> extract_contour(const CellField& theta, double level);

// Per-vertex signed curvature from an osculating-circle fit over the given
// arc-length window. Positive for convex regions of the enclosed set.
std::vector<double> curvature(const Contour& c, double smoothing_window);

struct OptimalityOptions {
  double probe_offset_cells = 1.5;
  double tolerance = 1e-6;
  double curvature_window = 0.0;  // 0: eight cell widths
};

struct VertexCheck {
  double inner_gap;     // H2(s_int) - H1(s_int) - k*curv, should be >= 0
  double k_curvature;   // k_perimeter * signed curvature
  double outer_gap;     // k*curv - (H2(s_ext) - H1(s_ext)), should be >= 0
  bool violated = false;
  bool skipped = false;
};

struct CurvatureReport {
  std::vector<VertexCheck> checks;
  double violation_fraction = 0.0;
  double negative_curvature_fraction = 0.0;
  int skipped_count = 0;
};

// Two-sided curvature optimality condition along the contour, with flux
// traces probed a fixed offset inside/outside along the normal.
CurvatureReport check_optimality(const Contour& c, const VectorField& sigma,
                                 const EnvelopePair& e, double k_perimeter,
                                 const OptimalityOptions& opts = {});

}  // namespace lowcon
