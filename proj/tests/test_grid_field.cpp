#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <vector>

#include "lowcon/errors.hpp"
#include "lowcon/field_io.hpp"
#include "lowcon/grid.hpp"

using namespace lowcon;

TEST_CASE("node weights sum to the domain area") {
  const Grid g(13, 9);
  double sum = 0.0;
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i) sum += node_weight(g, i, j);
  CHECK(sum == doctest::Approx(g.area()).epsilon(1e-14));
}

TEST_CASE("gradient is exact for affine fields") {
  const Grid g(17, 11);
  const ScalarField u = ScalarField::sample(g, [](double x, double y) {
    return 3.25 * x - 1.5 * y + 0.75;
  });
  const VectorField gu = gradient(u);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      CHECK(gu.x(i, j) == doctest::Approx(3.25).epsilon(1e-13));
      CHECK(gu.y(i, j) == doctest::Approx(-1.5).epsilon(1e-13));
    }
}

TEST_CASE("gradient converges at second order on smooth fields") {
  auto err = [](int n) {
    const Grid g(n, n);
    const ScalarField u = ScalarField::sample(g, [](double x, double y) {
      return std::sin(3.0 * x) * std::cos(2.0 * y);
    });
    const VectorField gu = gradient(u);
    double worst = 0.0;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        const double x = g.cell_cx(i), y = g.cell_cy(j);
        const double ex = 3.0 * std::cos(3.0 * x) * std::cos(2.0 * y);
        const double ey = -2.0 * std::sin(3.0 * x) * std::sin(2.0 * y);
        worst = std::max({worst, std::abs(gu.x(i, j) - ex), std::abs(gu.y(i, j) - ey)});
      }
    return worst;
  };
  const double e1 = err(32), e2 = err(64);
  CHECK(e1 / e2 > 3.4);  // ~4 for O(h^2)
}

TEST_CASE("gradient_adjoint is the exact transpose with the area weight") {
  const Grid g(7, 5);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  ScalarField u(g);
  for (double& v : u.values()) v = d(rng);
  VectorField w(g);
  for (double& v : w.xs()) v = d(rng);
  for (double& v : w.ys()) v = d(rng);

  const VectorField gu = gradient(u);
  double lhs = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      lhs += g.cell_area() * (gu.x(i, j) * w.x(i, j) + gu.y(i, j) * w.y(i, j));
  const ScalarField adj = gradient_adjoint(w);
  double rhs = 0.0;
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i) rhs += u.at(i, j) * adj.at(i, j);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
}

TEST_CASE("source field has exactly zero discrete mean") {
  for (double lambda : {0.02, 0.001}) {
    const Grid g(30, 30);
    const ScalarField f = build_source(g, {lambda, {0.3, 0.3}, {0.7, 0.7}});
    CHECK(std::abs(integrate(f)) < 1e-14);
  }
}

TEST_CASE("source amplitude follows the 1/sqrt(2 pi lambda) normalization") {
  const double lambda = 0.02;
  const Grid g(240, 240);
  const ScalarField f = build_source(g, {lambda, {0.3, 0.3}, {0.7, 0.7}});
  ScalarField pos = f;
  for (double& v : pos.values()) v = std::max(v, 0.0);

  // Independent oracle: fine midpoint quadrature of the analytic field
  // amp * (exp(-|x-x0|^2/2l) - exp(-|x-x1|^2/2l)) with the discrete mean
  // removed, then the positive part integrated.  The positive-part mass is
  // a bit below sqrt(2 pi lambda) because of the mean shift and the overlap
  // with the negative bump.
  const double amp = 1.0 / std::sqrt(2.0 * M_PI * lambda);
  const int m = 1200;
  std::vector<double> vals(std::size_t(m) * m);
  double mean = 0.0;
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) {
      const double x = (i + 0.5) / m, y = (j + 0.5) / m;
      const double d0 = (x - 0.3) * (x - 0.3) + (y - 0.3) * (y - 0.3);
      const double d1 = (x - 0.7) * (x - 0.7) + (y - 0.7) * (y - 0.7);
      const double v =
          amp * (std::exp(-d0 / (2 * lambda)) - std::exp(-d1 / (2 * lambda)));
      vals[std::size_t(j) * m + i] = v;
      mean += v;
    }
  mean /= double(m) * m;
  double oracle = 0.0;
  for (double v : vals) oracle += std::max(v - mean, 0.0);
  oracle /= double(m) * m;

  CHECK(oracle < std::sqrt(2.0 * M_PI * lambda));  // sanity on the oracle
  CHECK(integrate(pos) == doctest::Approx(oracle).epsilon(2e-3));
}

TEST_CASE("divergence residual vanishes for a manufactured conservative flux") {
  const Grid g(24, 24);
  // u harmonic-ish: residual of sigma = grad(u) against f = "-div grad u"
  const ScalarField u = ScalarField::sample(g, [](double x, double y) {
    return std::cos(M_PI * x) * std::cos(2.0 * M_PI * y);
  });
  const VectorField sigma = gradient(u);
  ScalarField f(g);
  const ScalarField weak = gradient_adjoint(sigma);
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i)
      f.at(i, j) = weak.at(i, j) / node_weight(g, i, j);
  CHECK(divergence_residual(sigma, f) < 1e-13);
}

TEST_CASE("grid mismatch is rejected") {
  const Grid g1(8, 8), g2(9, 8);
  VectorField sigma(g1);
  ScalarField f(g2);
  CHECK_THROWS_AS(divergence_residual(sigma, f), GridMismatch);
}

TEST_CASE("bilinear sampling reproduces cell values and rejects exterior points") {
  const Grid g(10, 10);
  const CellField c = CellField::sample(g, [](double x, double y) { return x + 2 * y; });
  CHECK(sample_bilinear(c, {0.5, 0.5}) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK_FALSE(inside_cell_centers(g, {0.01, 0.01}));
  CHECK_THROWS_AS(sample_bilinear(c, {0.01, 0.01}), std::domain_error);
}

TEST_CASE("CSV round trip preserves fields bit-exactly") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "lowcon_csv_test";
  fs::create_directories(dir);
  const Grid g(12, 7);
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> d(-5.0, 5.0);

  ScalarField u(g);
  for (double& v : u.values()) v = d(rng);
  write_csv(dir / "u.csv", u);
  const ScalarField u2 = read_scalar_csv(dir / "u.csv");
  CHECK(u2.grid() == g);
  for (int i = 0; i < g.node_count(); ++i) CHECK(u2.values()[i] == u.values()[i]);

  CellField c(g);
  for (double& v : c.values()) v = d(rng);
  write_csv(dir / "c.csv", c);
  const CellField c2 = read_cell_csv(dir / "c.csv");
  for (int i = 0; i < g.cell_count(); ++i) CHECK(c2.values()[i] == c.values()[i]);
  fs::remove_all(dir);
}

TEST_CASE("PGM emission: header and palette direction") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "lowcon_pgm_test";
  fs::create_directories(dir);
  const Grid g(8, 8);
  const CellField c =
      CellField::sample(g, [](double x, double) { return x; });
  write_pgm(dir / "t.pgm", c, /*invert=*/true);
  std::FILE* fp = std::fopen((dir / "t.pgm").string().c_str(), "rb");
  REQUIRE(fp);
  char magic[3] = {};
  REQUIRE(std::fscanf(fp, "%2s", magic) == 1);
  CHECK(std::string(magic) == "P5");
  int w, h, maxv;
  REQUIRE(std::fscanf(fp, "%d %d %d", &w, &h, &maxv) == 3);
  CHECK(w == 8);
  CHECK(h == 8);
  CHECK(maxv == 255);
  std::fgetc(fp);
  unsigned char row[8];
  REQUIRE(std::fread(row, 1, 8, fp) == 8);
  // inverted palette: the max (x near 1) renders black
  CHECK(row[7] == 0);
  CHECK(row[0] == 255);
  std::fclose(fp);
  fs::remove_all(dir);
}
