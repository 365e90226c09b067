#include "lowcon/raster.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "lowcon/errors.hpp"
#include "lowcon/marching.hpp"

namespace lowcon {

namespace {
constexpr double kInf = std::numeric_limits<double>::max() / 4;

// Felzenszwalb-Huttenlocher 1-D squared distance transform.
void edt_1d(const double* f, double* d, int n, std::vector<int>& v,
            std::vector<double>& z) {
  int k = 0;
  v[0] = 0;
  z[0] = -kInf;
  z[1] = kInf;
  for (int q = 1; q < n; ++q) {
    double s;
    while (true) {
      const int p = v[k];
      s = ((f[q] + q * static_cast<double>(q)) - (f[p] + p * static_cast<double>(p))) /
          (2.0 * (q - p));
      if (s > z[k]) break;
      --k;
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = q - v[k];
    d[q] = dq * dq + f[v[k]];
  }
}
}  // namespace

RasterSet::RasterSet(int n, double h) : n_(n), h_(h), mask_(static_cast<std::size_t>(n) * n, 0) {
  if (n < 2 || !(h > 0.0)) throw std::invalid_argument("RasterSet: need n >= 2 and h > 0");
}

std::size_t RasterSet::idx(int i, int j) const {
  if (i < 0 || j < 0 || i >= n_ || j >= n_) throw OutOfBounds("RasterSet: pixel index");
  return static_cast<std::size_t>(j) * n_ + i;
}

bool RasterSet::empty() const { return count() == 0; }

int RasterSet::count() const {
  int c = 0;
  for (unsigned char v : mask_) c += v;
  return c;
}

bool RasterSet::touches_boundary() const {
  for (int i = 0; i < n_; ++i)
    if (at(i, 0) || at(i, n_ - 1) || at(0, i) || at(n_ - 1, i)) return true;
  return false;
}

void RasterSet::fill_disc(double cx, double cy, double r) {
  const int i0 = std::max(0, static_cast<int>((cx - r) / h_) - 1);
  const int i1 = std::min(n_ - 1, static_cast<int>((cx + r) / h_) + 1);
  const int j0 = std::max(0, static_cast<int>((cy - r) / h_) - 1);
  const int j1 = std::min(n_ - 1, static_cast<int>((cy + r) / h_) + 1);
  for (int j = j0; j <= j1; ++j) {
    for (int i = i0; i <= i1; ++i) {
      const double dx = (i + 0.5) * h_ - cx;
      const double dy = (j + 0.5) * h_ - cy;
      if (dx * dx + dy * dy < r * r) mask_[idx(i, j)] = 1;
    }
  }
}

void RasterSet::fill_segment(double x0, double y0, double x1, double y1, double r) {
  const double dx = x1 - x0, dy = y1 - y0;
  const double len2 = dx * dx + dy * dy;
  const double lo_x = std::min(x0, x1) - r, hi_x = std::max(x0, x1) + r;
  const double lo_y = std::min(y0, y1) - r, hi_y = std::max(y0, y1) + r;
  const int i0 = std::max(0, static_cast<int>(lo_x / h_) - 1);
  const int i1 = std::min(n_ - 1, static_cast<int>(hi_x / h_) + 1);
  const int j0 = std::max(0, static_cast<int>(lo_y / h_) - 1);
  const int j1 = std::min(n_ - 1, static_cast<int>(hi_y / h_) + 1);
  for (int j = j0; j <= j1; ++j) {
    for (int i = i0; i <= i1; ++i) {
      const double px = (i + 0.5) * h_, py = (j + 0.5) * h_;
      double t = len2 > 0.0 ? ((px - x0) * dx + (py - y0) * dy) / len2 : 0.0;
      t = std::clamp(t, 0.0, 1.0);
      const double qx = px - (x0 + t * dx), qy = py - (y0 + t * dy);
      if (qx * qx + qy * qy < r * r) mask_[idx(i, j)] = 1;
    }
  }
}

namespace {
// A few (1,2,1)/4 vertex-averaging passes on the extracted chain. The
// staircase wiggle of marching squares on binary data has wavelength O(h)
// and would otherwise inflate the length by a resolution-independent factor;
// the corner rounding introduced here is only O(h) in absolute length.
Polyline smooth_chain(Polyline line, int passes) {
  const bool closed = line.size() > 3 && norm(line.front() - line.back()) == 0.0;
  if (closed) line.pop_back();
  const int n = static_cast<int>(line.size());
  if (n >= 5) {
    Polyline tmp(n);
    for (int p = 0; p < passes; ++p) {
      for (int i = 0; i < n; ++i) {
        if (!closed && (i == 0 || i == n - 1)) {
          tmp[i] = line[i];
          continue;
        }
        const Vec2& a = line[(i + n - 1) % n];
        const Vec2& b = line[i];
        const Vec2& c = line[(i + 1) % n];
        tmp[i] = {0.25 * a.x + 0.5 * b.x + 0.25 * c.x,
                  0.25 * a.y + 0.5 * b.y + 0.25 * c.y};
      }
      line.swap(tmp);
    }
  }
  if (closed) line.push_back(line.front());
  return line;
}
}  // namespace

std::vector<double> squared_distance_transform(const RasterSet& set) {
  const int n = set.n();
  std::vector<double> d(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      d[static_cast<std::size_t>(j) * n + i] = set.at(i, j) ? 0.0 : kInf;

  std::vector<int> v(n);
  std::vector<double> z(n + 1), col(n), out(n);
  // columns
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) col[j] = d[static_cast<std::size_t>(j) * n + i];
    edt_1d(col.data(), out.data(), n, v, z);
    for (int j = 0; j < n; ++j) d[static_cast<std::size_t>(j) * n + i] = out[j];
  }
  // rows
  for (int j = 0; j < n; ++j) {
    double* row = &d[static_cast<std::size_t>(j) * n];
    std::copy(row, row + n, col.begin());
    edt_1d(col.data(), out.data(), n, v, z);
    std::copy(out.begin(), out.end(), row);
  }
  return d;
}

RasterSet dilate(const RasterSet& set, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("dilate: r must be positive");
  if (set.empty()) throw OutOfBounds("dilate: empty set");
  const int n = set.n();
  const double r_px = r / set.h();
  const double r2 = r_px * r_px;
  const std::vector<double> d2 = squared_distance_transform(set);
  RasterSet out(n, set.h());
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (d2[static_cast<std::size_t>(j) * n + i] < r2) out.set(i, j, true);
  if (out.touches_boundary())
    throw OutOfBounds("dilate: enlarged set reaches the raster boundary");
  return out;
}

double area(const RasterSet& set) { return set.count() * set.h() * set.h(); }

double dilated_area(const RasterSet& set, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("dilated_area: r must be positive");
  if (set.empty()) throw OutOfBounds("dilated_area: empty set");
  const int n = set.n();
  const double r_px = r / set.h();
  const std::vector<double> d2 = squared_distance_transform(set);
  double covered = 0.0;  // in pixels
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double d = std::sqrt(d2[static_cast<std::size_t>(j) * n + i]);
      const double w = std::clamp(r_px - d + 0.5, 0.0, 1.0);
      if (w > 0.0 && (i == 0 || j == 0 || i == n - 1 || j == n - 1))
        throw OutOfBounds("dilated_area: enlarged set reaches the raster boundary");
      covered += w;
    }
  return covered * set.h() * set.h();
}

double perimeter(const RasterSet& set) {
  if (set.empty()) throw BoundaryContact("perimeter: empty set");
  if (set.touches_boundary())
    throw BoundaryContact("perimeter: set touches the raster boundary");
  const int n = set.n();
  const double h = set.h();
  // node field: average of the (up to four) adjacent pixels, outside = 0
  auto node = [&](int i, int j) {
    double s = 0.0;
    for (int dj = -1; dj <= 0; ++dj)
      for (int di = -1; di <= 0; ++di) {
        const int pi = i + di, pj = j + dj;
        if (pi >= 0 && pj >= 0 && pi < n && pj < n && set.at(pi, pj)) s += 1.0;
      }
    return s / 4.0;
  };
  const auto lines =
      marching_squares(n + 1, n + 1, node, 0.5, 0.0, 0.0, h, h);
  double L = 0.0;
  for (const auto& line : lines) L += polyline_length(smooth_chain(line, 8));
  return L;
}

DilationReport check_dilation_inequality(const RasterSet& set, double r) {
  const RasterSet er = dilate(set, r);
  const double lhs = perimeter(er);
  const double rhs = (2.0 / r) * area(er);
  return {lhs, rhs, (rhs - lhs) / rhs};
}

void write_pgm(const RasterSet& set, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_pgm: cannot open " + path);
  const int n = set.n();
  out << "P5\n" << n << " " << n << "\n255\n";
  for (int j = n - 1; j >= 0; --j)
    for (int i = 0; i < n; ++i)
      out.put(set.at(i, j) ? static_cast<char>(255) : static_cast<char>(0));
}

RasterSet read_raster_pgm(const std::string& path, double h) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_raster_pgm: cannot open " + path);
  std::string magic;
  in >> magic;
  if (magic != "P5") throw std::runtime_error("read_raster_pgm: not a P5 PGM");
  int w = 0, ht = 0, maxval = 0;
  in >> w >> ht >> maxval;
  if (w != ht || w < 2 || maxval <= 0 || maxval > 255)
    throw std::runtime_error("read_raster_pgm: unsupported geometry");
  in.get();  // single whitespace after header
  RasterSet set(w, h);
  std::vector<char> row(w);
  for (int j = ht - 1; j >= 0; --j) {
    in.read(row.data(), w);
    if (!in) throw std::runtime_error("read_raster_pgm: truncated data");
    for (int i = 0; i < w; ++i)
      set.set(i, j, static_cast<unsigned char>(row[i]) >= maxval / 2);
  }
  return set;
}

}  // namespace lowcon
