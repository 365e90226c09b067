#include "lowcon/contour.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lowcon/errors.hpp"
#include "lowcon/marching.hpp"

namespace lowcon {

double Contour::length() const { return polyline_length(vertices); }

std::vector<Contour> extract_contour(const CellField& theta, double level) {
  const Grid& g = theta.grid();
  auto value = [&](int i, int j) { return theta.at(i, j); };
  const auto lines = marching_squares(g.nx, g.ny, value, level,
                                      0.5 * g.hx(), 0.5 * g.hy(), g.hx(), g.hy());
  std::vector<Contour> out;
  for (const auto& line : lines) {
    if (line.size() >= 4 && norm(line.front() - line.back()) == 0.0)
      out.push_back({line, true});
  }
  if (out.empty()) throw NoContour("extract_contour: no closed isoline at level");
  return out;
}

namespace {

// Kasa circle fit: least squares on x^2+y^2 = 2ax + 2by + c. Returns signed
// curvature magnitude (0 for a degenerate/collinear window).
double fit_curvature(const std::vector<Vec2>& pts) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  double sz = 0, sxz = 0, syz = 0;
  const double n = static_cast<double>(pts.size());
  double cx = 0, cy = 0;
  for (const Vec2& p : pts) {
    cx += p.x;
    cy += p.y;
  }
  cx /= n;
  cy /= n;
  for (const Vec2& p : pts) {
    const double x = p.x - cx, y = p.y - cy;
    const double z = x * x + y * y;
    sx += x; sy += y; sz += z;
    sxx += x * x; sxy += x * y; syy += y * y;
    sxz += x * z; syz += y * z;
  }
  // normal equations for (2a, 2b, c)
  double m[3][4] = {{sxx, sxy, sx, sxz},
                    {sxy, syy, sy, syz},
                    {sx, sy, n, sz}};
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    if (std::abs(m[piv][col]) < 1e-14) return 0.0;
    std::swap(m[col], m[piv]);
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double f = m[r][col] / m[col][col];
      for (int c2 = col; c2 < 4; ++c2) m[r][c2] -= f * m[col][c2];
    }
  }
  const double a = m[0][3] / m[0][0] / 2.0;
  const double b = m[1][3] / m[1][1] / 2.0;
  const double c = m[2][3] / m[2][2];
  const double r2 = c + a * a + b * b;
  if (!(r2 > 0.0)) return 0.0;
  return 1.0 / std::sqrt(r2);
}

}  // namespace

std::vector<double> curvature(const Contour& c, double smoothing_window) {
  const auto& v = c.vertices;
  const std::size_t dup = c.closed ? 1 : 0;
  const std::size_t n = v.size() - dup;  // unique vertices
  if (v.size() < 8) throw DegenerateContour("curvature: fewer than 8 vertices");

  auto vertex = [&](long idx) -> const Vec2& {
    if (c.closed) {
      long m = idx % static_cast<long>(n);
      if (m < 0) m += static_cast<long>(n);
      return v[static_cast<std::size_t>(m)];
    }
    return v[static_cast<std::size_t>(std::clamp(idx, 0L, static_cast<long>(v.size()) - 1))];
  };

  std::vector<double> out(v.size());
  const double half = 0.5 * smoothing_window;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Vec2> window{v[i]};
    // grow symmetrically until each side covers half the window arc length
    long lo = static_cast<long>(i), hi = static_cast<long>(i);
    double acc_lo = 0.0, acc_hi = 0.0;
    const long limit = static_cast<long>(n) / 2;
    for (long step = 0; step < limit; ++step) {
      bool grew = false;
      if (acc_lo < half || step < 2) {
        acc_lo += norm(vertex(lo - 1) - vertex(lo));
        --lo;
        window.push_back(vertex(lo));
        grew = true;
      }
      if (acc_hi < half || step < 2) {
        acc_hi += norm(vertex(hi + 1) - vertex(hi));
        ++hi;
        window.push_back(vertex(hi));
        grew = true;
      }
      if (!grew) break;
    }
    double kappa = fit_curvature(window);
    // sign from the turn between the window endpoints
    const Vec2 d1 = v[i] - vertex(lo);
    const Vec2 d2 = vertex(hi) - v[i];
    if (cross(d1, d2) < 0.0) kappa = -kappa;
    out[i] = kappa;
  }
  if (c.closed) out[v.size() - 1] = out[0];
  return out;
}

CurvatureReport check_optimality(const Contour& c, const VectorField& sigma,
                                 const EnvelopePair& e, double k_perimeter,
                                 const OptimalityOptions& opts) {
  const Grid& g = sigma.grid();
  const double hmin = std::min(g.hx(), g.hy());
  const double window =
      opts.curvature_window > 0.0 ? opts.curvature_window : 8.0 * hmin;
  const std::vector<double> kappa = curvature(c, window);

  const auto& v = c.vertices;
  const std::size_t n = v.size() - (c.closed ? 1 : 0);

  auto delta_h = [&](double s) { return e.h2()(s) - e.h1()(s); };

  CurvatureReport rep;
  rep.checks.resize(n);
  int violations = 0, negative = 0, live = 0;

  for (std::size_t i = 0; i < n; ++i) {
    VertexCheck& chk = rep.checks[i];
    chk.k_curvature = k_perimeter * kappa[i];
    // tangent from neighbors; inside (high-theta) region is on the left
    const Vec2& prev = c.closed ? v[(i + n - 1) % n] : v[i > 0 ? i - 1 : 0];
    const Vec2& next = c.closed ? v[(i + 1) % n] : v[std::min(i + 1, n - 1)];
    const Vec2 t = next - prev;
    const double tl = norm(t);
    if (tl == 0.0) {
      chk.skipped = true;
      ++rep.skipped_count;
      continue;
    }
    const Vec2 normal{-t.y / tl, t.x / tl};  // points into the region
    const double off = opts.probe_offset_cells * hmin;
    const Vec2 pin{v[i].x + off * normal.x, v[i].y + off * normal.y};
    const Vec2 pout{v[i].x - off * normal.x, v[i].y - off * normal.y};
    double s_int, s_ext;
    try {
      s_int = norm(sample_bilinear(sigma, pin));
      s_ext = norm(sample_bilinear(sigma, pout));
    } catch (const std::domain_error&) {
      chk.skipped = true;
      ++rep.skipped_count;
      continue;
    }
    chk.inner_gap = delta_h(s_int) - chk.k_curvature;
    chk.outer_gap = chk.k_curvature - delta_h(s_ext);
    chk.violated = chk.inner_gap < -opts.tolerance || chk.outer_gap < -opts.tolerance;
    ++live;
    if (chk.violated) ++violations;
    if (kappa[i] < -opts.tolerance) ++negative;
  }

  if (live == 0)
    throw ProbeOutOfDomain("check_optimality: every probe left the domain");
  rep.violation_fraction = static_cast<double>(violations) / live;
  rep.negative_curvature_fraction = static_cast<double>(negative) / live;
  return rep;
}

}  // namespace lowcon
