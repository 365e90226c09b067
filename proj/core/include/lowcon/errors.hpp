#pragma once

#include <stdexcept>
#include <string>

namespace lowcon {

/// h2 dipped below h1 somewhere on the sample ray.
struct OrderingViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Two fields on different grids were combined.
struct GridMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A dilation would spill over the raster boundary.
struct OutOfBounds : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Perimeter estimation on a set touching the raster boundary.
struct BoundaryContact : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The field never crosses the requested level.
struct NoContour : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Too few vertices to estimate curvature.
struct DegenerateContour : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Every contour vertex probe fell outside the sampled domain.
struct ProbeOutOfDomain : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Objective or gradient became NaN/Inf during a solve.
struct NonFiniteObjective : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Experiment configuration is malformed; message carries the field path.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Two reports compared across different grids or phase coefficients.
struct IncompatibleReports : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace lowcon
