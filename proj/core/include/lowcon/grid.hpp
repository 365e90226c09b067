#pragma once

#include <vector>

#include "lowcon/congestion.hpp"  // Vec2

namespace lowcon {

/// Structured grid on [0,Lx]x[0,Ly]: nx*ny cells, (nx+1)*(ny+1) nodes.
/// Potentials and sources live on nodes, fluxes and gradients on cell
/// centers (Q1 elements).
struct Grid {
  int nx = 0;
  int ny = 0;
  double lx = 1.0;
  double ly = 1.0;

  Grid(int nx_, int ny_, double lx_ = 1.0, double ly_ = 1.0);

  double hx() const { return lx / nx; }
  double hy() const { return ly / ny; }
  double cell_area() const { return hx() * hy(); }
  double area() const { return lx * ly; }
  int node_count() const { return (nx + 1) * (ny + 1); }
  int cell_count() const { return nx * ny; }

  double node_x(int i) const { return i * hx(); }
  double node_y(int j) const { return j * hy(); }
  double cell_cx(int i) const { return (i + 0.5) * hx(); }
  double cell_cy(int j) const { return (j + 0.5) * hy(); }

  bool operator==(const Grid&) const = default;
};

/// Node-centered scalar samples (u, f).
class ScalarField {
 public:
  explicit ScalarField(const Grid& g);
  ScalarField(const Grid& g, std::vector<double> values);

  const Grid& grid() const { return grid_; }
  double& at(int i, int j) { return v_[j * (grid_.nx + 1) + i]; }
  double at(int i, int j) const { return v_[j * (grid_.nx + 1) + i]; }
  std::vector<double>& values() { return v_; }
  const std::vector<double>& values() const { return v_; }

  template <class F>
  static ScalarField sample(const Grid& g, F f) {
    ScalarField out(g);
    for (int j = 0; j <= g.ny; ++j)
      for (int i = 0; i <= g.nx; ++i) out.at(i, j) = f(g.node_x(i), g.node_y(j));
    return out;
  }

 private:
  Grid grid_;
  std::vector<double> v_;
};

/// Cell-centered scalar samples (theta, |sigma|).
class CellField {
 public:
  explicit CellField(const Grid& g);
  CellField(const Grid& g, std::vector<double> values);

  const Grid& grid() const { return grid_; }
  double& at(int i, int j) { return v_[j * grid_.nx + i]; }
  double at(int i, int j) const { return v_[j * grid_.nx + i]; }
  std::vector<double>& values() { return v_; }
  const std::vector<double>& values() const { return v_; }

  template <class F>
  static CellField sample(const Grid& g, F f) {
    CellField out(g);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) out.at(i, j) = f(g.cell_cx(i), g.cell_cy(j));
    return out;
  }

 private:
  Grid grid_;
  std::vector<double> v_;
};

/// Cell-centered 2-vector samples (sigma, grad u).
class VectorField {
 public:
  explicit VectorField(const Grid& g);

  const Grid& grid() const { return grid_; }
  double& x(int i, int j) { return vx_[j * grid_.nx + i]; }
  double x(int i, int j) const { return vx_[j * grid_.nx + i]; }
  double& y(int i, int j) { return vy_[j * grid_.nx + i]; }
  double y(int i, int j) const { return vy_[j * grid_.nx + i]; }
  Vec2 at(int i, int j) const { return {x(i, j), y(i, j)}; }
  std::vector<double>& xs() { return vx_; }
  std::vector<double>& ys() { return vy_; }
  const std::vector<double>& xs() const { return vx_; }
  const std::vector<double>& ys() const { return vy_; }

 private:
  Grid grid_;
  std::vector<double> vx_, vy_;
};

/// Gaussian source/sink pair: f = f+ - f- with centers x0 (supply) and
/// x1 (demand) and common variance lambda.
struct SourceConfig {
  double lambda = 0.02;
  Vec2 x0{0.3, 0.3};
  Vec2 x1{0.7, 0.7};
};

/// Trapezoidal nodal quadrature weight (mass lumping): cell_area times 1/4,
/// 1/2 or 1 for corner, edge and interior nodes.
double node_weight(const Grid& g, int i, int j);

/// f+ - f- sampled at nodes with the amplitude 1/sqrt(2 pi lambda), then
/// shifted by a constant so the discrete integral is exactly zero (Neumann
/// solvability).
ScalarField build_source(const Grid& g, const SourceConfig& s);

/// Q1 cell-centered gradient: per-cell average of nodal differences.
/// Exact for affine fields.
VectorField gradient(const ScalarField& u);

/// Adjoint of `gradient` with the cell-area factor folded in:
///   sum_cells area * <gradient(u), w> == sum_nodes u * gradient_adjoint(w).
ScalarField gradient_adjoint(const VectorField& w);

/// Nodal-quadrature integral over the domain; exact for constants.
double integrate(const ScalarField& f);
/// Midpoint quadrature over cells.
double integrate(const CellField& f);

/// Weighted inner product sum_nodes f u w (the discrete <f, u>).
double inner(const ScalarField& f, const ScalarField& u);

/// Weak-form conservation defect of sigma against f:
///   max_i |<sigma, grad phi_i> - <f, phi_i>| / ||f||_1
/// over nodal hat functions phi_i (unnormalized if f == 0).
/// Throws GridMismatch.
double divergence_residual(const VectorField& sigma, const ScalarField& f);

/// Bilinear interpolation on the cell-center lattice. `p` must lie within
/// the hull of cell centers; use `inside_cell_centers` to test first.
bool inside_cell_centers(const Grid& g, Vec2 p);
double sample_bilinear(const CellField& f, Vec2 p);
Vec2 sample_bilinear(const VectorField& f, Vec2 p);

}  // namespace lowcon
