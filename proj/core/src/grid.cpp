#include "lowcon/grid.hpp"

#include <cmath>
#include <stdexcept>

#include "lowcon/errors.hpp"
#include "lowcon/numerics.hpp"

namespace lowcon {

Grid::Grid(int nx_, int ny_, double lx_, double ly_)
    : nx(nx_), ny(ny_), lx(lx_), ly(ly_) {
  if (nx < 4 || ny < 4) throw std::invalid_argument("Grid: nx, ny must be >= 4");
  if (!(lx > 0.0) || !(ly > 0.0)) throw std::invalid_argument("Grid: extents must be > 0");
}

ScalarField::ScalarField(const Grid& g) : grid_(g), v_(g.node_count(), 0.0) {}

ScalarField::ScalarField(const Grid& g, std::vector<double> values)
    : grid_(g), v_(std::move(values)) {
  if (static_cast<int>(v_.size()) != g.node_count())
    throw std::invalid_argument("ScalarField: value count != (nx+1)(ny+1)");
}

CellField::CellField(const Grid& g) : grid_(g), v_(g.cell_count(), 0.0) {}

CellField::CellField(const Grid& g, std::vector<double> values)
    : grid_(g), v_(std::move(values)) {
  if (static_cast<int>(v_.size()) != g.cell_count())
    throw std::invalid_argument("CellField: value count != nx*ny");
}

VectorField::VectorField(const Grid& g)
    : grid_(g), vx_(g.cell_count(), 0.0), vy_(g.cell_count(), 0.0) {}

double node_weight(const Grid& g, int i, int j) {
  double w = g.cell_area();
  if (i == 0 || i == g.nx) w *= 0.5;
  if (j == 0 || j == g.ny) w *= 0.5;
  return w;
}

ScalarField build_source(const Grid& g, const SourceConfig& s) {
  if (!(s.lambda > 0.0)) throw std::invalid_argument("SourceConfig: lambda must be > 0");
  auto in_domain = [&](Vec2 p) {
    return p.x >= 0.0 && p.x <= g.lx && p.y >= 0.0 && p.y <= g.ly;
  };
  if (!in_domain(s.x0) || !in_domain(s.x1))
    throw std::invalid_argument("SourceConfig: centers must lie inside the domain");

  const double amp = 1.0 / std::sqrt(2.0 * M_PI * s.lambda);
  auto bump = [&](double x, double y, Vec2 c) {
    const double d2 = (x - c.x) * (x - c.x) + (y - c.y) * (y - c.y);
    return amp * std::exp(-d2 / (2.0 * s.lambda));
  };
  ScalarField f = ScalarField::sample(g, [&](double x, double y) {
    return bump(x, y, s.x0) - bump(x, y, s.x1);
  });
  const double mean = integrate(f) / g.area();
  for (double& v : f.values()) v -= mean;
  return f;
}

VectorField gradient(const ScalarField& u) {
  const Grid& g = u.grid();
  VectorField out(g);
  const double ihx = 1.0 / (2.0 * g.hx());
  const double ihy = 1.0 / (2.0 * g.hy());
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double u00 = u.at(i, j), u10 = u.at(i + 1, j);
      const double u01 = u.at(i, j + 1), u11 = u.at(i + 1, j + 1);
      out.x(i, j) = ((u10 - u00) + (u11 - u01)) * ihx;
      out.y(i, j) = ((u01 - u00) + (u11 - u10)) * ihy;
    }
  }
  return out;
}

ScalarField gradient_adjoint(const VectorField& w) {
  const Grid& g = w.grid();
  ScalarField out(g);
  const double cx = g.cell_area() / (2.0 * g.hx());
  const double cy = g.cell_area() / (2.0 * g.hy());
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double ax = cx * w.x(i, j);
      const double ay = cy * w.y(i, j);
      out.at(i, j) += -ax - ay;
      out.at(i + 1, j) += ax - ay;
      out.at(i, j + 1) += -ax + ay;
      out.at(i + 1, j + 1) += ax + ay;
    }
  }
  return out;
}

double integrate(const ScalarField& f) {
  const Grid& g = f.grid();
  std::vector<double> terms;
  terms.reserve(g.node_count());
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i) terms.push_back(f.at(i, j) * node_weight(g, i, j));
  return pairwise_sum(terms);
}

double integrate(const CellField& f) {
  const Grid& g = f.grid();
  std::vector<double> terms(f.values());
  for (double& t : terms) t *= g.cell_area();
  return pairwise_sum(terms);
}

double inner(const ScalarField& f, const ScalarField& u) {
  if (!(f.grid() == u.grid())) throw GridMismatch("inner: fields on different grids");
  const Grid& g = f.grid();
  std::vector<double> terms;
  terms.reserve(g.node_count());
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i)
      terms.push_back(f.at(i, j) * u.at(i, j) * node_weight(g, i, j));
  return pairwise_sum(terms);
}

double divergence_residual(const VectorField& sigma, const ScalarField& f) {
  if (!(sigma.grid() == f.grid()))
    throw GridMismatch("divergence_residual: fields on different grids");
  const Grid& g = f.grid();
  const ScalarField weak = gradient_adjoint(sigma);
  double defect = 0.0;
  std::vector<double> fnorm;
  fnorm.reserve(g.node_count());
  for (int j = 0; j <= g.ny; ++j) {
    for (int i = 0; i <= g.nx; ++i) {
      const double w = node_weight(g, i, j);
      defect = std::max(defect, std::abs(weak.at(i, j) - f.at(i, j) * w));
      fnorm.push_back(std::abs(f.at(i, j)) * w);
    }
  }
  const double l1 = pairwise_sum(fnorm);
  return l1 > 0.0 ? defect / l1 : defect;
}

bool inside_cell_centers(const Grid& g, Vec2 p) {
  return p.x >= 0.5 * g.hx() && p.x <= g.lx - 0.5 * g.hx() &&
         p.y >= 0.5 * g.hy() && p.y <= g.ly - 0.5 * g.hy();
}

namespace {

struct BilinearStencil {
  int i0, j0;
  double tx, ty;
};

BilinearStencil stencil(const Grid& g, Vec2 p) {
  if (!inside_cell_centers(g, p))
    throw std::domain_error("sample_bilinear: point outside cell-center hull");
  double fx = p.x / g.hx() - 0.5;
  double fy = p.y / g.hy() - 0.5;
  int i0 = static_cast<int>(fx);
  int j0 = static_cast<int>(fy);
  i0 = std::min(i0, g.nx - 2);
  j0 = std::min(j0, g.ny - 2);
  return {i0, j0, fx - i0, fy - j0};
}

}  // namespace

double sample_bilinear(const CellField& f, Vec2 p) {
  const auto s = stencil(f.grid(), p);
  return (1 - s.tx) * (1 - s.ty) * f.at(s.i0, s.j0) +
         s.tx * (1 - s.ty) * f.at(s.i0 + 1, s.j0) +
         (1 - s.tx) * s.ty * f.at(s.i0, s.j0 + 1) +
         s.tx * s.ty * f.at(s.i0 + 1, s.j0 + 1);
}

Vec2 sample_bilinear(const VectorField& f, Vec2 p) {
  const auto s = stencil(f.grid(), p);
  auto lerp = [&](auto&& comp) {
    return (1 - s.tx) * (1 - s.ty) * comp(s.i0, s.j0) +
           s.tx * (1 - s.ty) * comp(s.i0 + 1, s.j0) +
           (1 - s.tx) * s.ty * comp(s.i0, s.j0 + 1) +
           s.tx * s.ty * comp(s.i0 + 1, s.j0 + 1);
  };
  return {lerp([&](int i, int j) { return f.x(i, j); }),
          lerp([&](int i, int j) { return f.y(i, j); })};
}

}  // namespace lowcon
