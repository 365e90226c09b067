#pragma once

#include <string>
#include <vector>

namespace lowcon {

// Binary pixel set on an n x n raster with pixel size h. Pixel (i,j) is the
// square centered at ((i+0.5)h, (j+0.5)h); the raster covers [0, n*h]^2.
class RasterSet {
 public:
  RasterSet(int n, double h);

  int n() const { return n_; }
  double h() const { return h_; }
  bool at(int i, int j) const { return mask_[idx(i, j)] != 0; }
  void set(int i, int j, bool v) { mask_[idx(i, j)] = v ? 1 : 0; }
  bool empty() const;
  int count() const;
  bool touches_boundary() const;

  // pixel centers within distance r of the disc center / the segment
  void fill_disc(double cx, double cy, double r);
  void fill_segment(double x0, double y0, double x1, double y1, double r);

  const std::vector<unsigned char>& mask() const { return mask_; }

 private:
  std::size_t idx(int i, int j) const;
  int n_;
  double h_;
  std::vector<unsigned char> mask_;
};

// Exact squared Euclidean distance (in pixel units) to the nearest member
// pixel center, per pixel.
std::vector<double> squared_distance_transform(const RasterSet& set);

// {x : dist(x, E) < r} sampled at pixel centers. Throws OutOfBounds if the
// result reaches the outer pixel ring (the estimate would be truncated).
RasterSet dilate(const RasterSet& set, double r);

double area(const RasterSet& set);

// Sub-pixel area of the r-dilation {x : dist(x, E) < r}, computed from the
// distance transform with linear coverage weights. Avoids the pixel-count
// quantization that a binary dilate + area would incur (the pairwise offsets
// between pixel centers all lie on the integer lattice, so the count error
// near the rim is systematic rather than averaging out). Throws OutOfBounds
// under the same conditions as dilate.
double dilated_area(const RasterSet& set, double r);

// Contour length of the 0.5 isoline of the node-averaged membership field.
// Throws BoundaryContact if the set is empty or touches the raster boundary.
double perimeter(const RasterSet& set);

struct DilationReport {
  double lhs;    // per(E_r)
  double rhs;    // (2/r) |E_r|
  double slack;  // (rhs - lhs) / rhs
};

DilationReport check_dilation_inequality(const RasterSet& set, double r);

void write_pgm(const RasterSet& set, const std::string& path);
RasterSet read_raster_pgm(const std::string& path, double h);

}  // namespace lowcon
