#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>

#include "lowcon/errors.hpp"
#include "lowcon/raster.hpp"

using namespace lowcon;

TEST_CASE("distance transform matches brute force on a small grid") {
  const int n = 24;
  RasterSet set(n, 1.0 / n);
  set.set(5, 7, true);
  set.set(14, 3, true);
  set.set(10, 20, true);
  set.set(11, 20, true);
  const auto d2 = squared_distance_transform(set);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      double best = 1e300;
      for (int q = 0; q < n; ++q)
        for (int p = 0; p < n; ++p)
          if (set.at(p, q)) {
            const double dd = double(p - i) * (p - i) + double(q - j) * (q - j);
            best = std::min(best, dd);
          }
      CHECK(d2[std::size_t(j) * n + i] == doctest::Approx(best).epsilon(1e-12));
    }
}

TEST_CASE("point dilation produces a disc; area and perimeter are accurate") {
  const int n = 512;
  RasterSet set(n, 1.0 / n);
  set.fill_disc(0.5, 0.5, 0.3);
  CHECK(area(set) == doctest::Approx(M_PI * 0.09).epsilon(0.01));
  CHECK(perimeter(set) == doctest::Approx(2 * M_PI * 0.3).epsilon(0.02));
}

TEST_CASE("axis-aligned square perimeter") {
  const int n = 512;
  RasterSet set(n, 1.0 / n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double x = (i + 0.5) / n, y = (j + 0.5) / n;
      if (x > 0.3 && x < 0.7 && y > 0.3 && y < 0.7) set.set(i, j, true);
    }
  CHECK(perimeter(set) == doctest::Approx(1.6).epsilon(0.02));
  CHECK(area(set) == doctest::Approx(0.16).epsilon(0.01));
}

TEST_CASE("perimeter is additive over disjoint components") {
  const int n = 512;
  RasterSet set(n, 1.0 / n);
  set.fill_disc(0.3, 0.3, 0.12);
  set.fill_disc(0.7, 0.7, 0.18);
  CHECK(perimeter(set) == doctest::Approx(2 * M_PI * 0.3).epsilon(0.02));
}

TEST_CASE("dilation is monotone and composes into a superset") {
  const int n = 256;
  RasterSet set(n, 1.0 / n);
  set.fill_disc(0.45, 0.55, 0.05);
  set.fill_segment(0.4, 0.4, 0.6, 0.45, 0.02);
  const RasterSet e1 = dilate(set, 0.03);
  const RasterSet e2 = dilate(set, 0.08);
  const RasterSet e12 = dilate(e1, 0.05);
  // dilate(dilate(., a), b) agrees with dilate(., a + b) up to a one-pixel
  // band around the rim, where pixel-center rounding may differ.
  const std::vector<double> d2 = squared_distance_transform(set);
  const double rim = 0.08 * n;  // 0.08 / h with h = 1/n
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      if (set.at(i, j)) CHECK(e1.at(i, j));
      if (e1.at(i, j)) CHECK(e2.at(i, j));
      if (e2.at(i, j) && !e12.at(i, j)) {
        const double dist = std::sqrt(d2[std::size_t(j) * n + i]);
        CHECK(std::abs(dist - rim) < 1.5);
      }
    }
}

TEST_CASE("two nearby pixels dilate into a connected union of discs") {
  const int n = 64;
  RasterSet set(n, 1.0 / n);
  set.set(30, 32, true);
  set.set(35, 32, true);
  const RasterSet er = dilate(set, 3.2 / n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double d1 = std::hypot(double(i - 30), double(j - 32));
      const double d2 = std::hypot(double(i - 35), double(j - 32));
      CHECK(er.at(i, j) == (std::min(d1, d2) < 3.2));
    }
  // overlap: the midpoint column belongs to both discs
  CHECK(er.at(32, 32));
  CHECK(er.at(33, 32));
}

TEST_CASE("sub-pixel dilated area matches analytic disc areas closely") {
  const int n = 512;
  RasterSet point(n, 1.0 / n);
  point.set(n / 2, n / 2, true);
  for (double r : {0.02, 0.05, 0.1}) {
    // coverage-weighted area should beat plain pixel counting by an order
    // of magnitude at small radii
    CHECK(dilated_area(point, r) == doctest::Approx(M_PI * r * r).epsilon(2e-3));
  }
  CHECK(dilated_area(point, 0.05) < dilated_area(point, 0.051));
  CHECK_THROWS_AS(dilated_area(point, 0.6), OutOfBounds);
  RasterSet empty(n, 1.0 / n);
  CHECK_THROWS_AS(dilated_area(empty, 0.1), OutOfBounds);
}

TEST_CASE("out-of-bounds dilation is rejected") {
  const int n = 64;
  RasterSet set(n, 1.0 / n);
  set.fill_disc(0.5, 0.5, 0.1);
  CHECK_THROWS_AS(dilate(set, 0.45), OutOfBounds);
}

TEST_CASE("boundary contact is rejected by the perimeter estimator") {
  const int n = 64;
  RasterSet set(n, 1.0 / n);
  CHECK_THROWS_AS(perimeter(set), BoundaryContact);  // empty
  set.set(0, 10, true);
  CHECK_THROWS_AS(perimeter(set), BoundaryContact);  // touches the edge
}

TEST_CASE("dilation inequality report on the equality case") {
  const int n = 512;
  RasterSet point(n, 1.0 / n);
  point.set(n / 2, n / 2, true);
  const DilationReport rep = check_dilation_inequality(point, 0.1);
  // point-generated disc: per = 2 pi r, (2/r) area = 2 pi r
  CHECK(rep.lhs == doctest::Approx(2 * M_PI * 0.1).epsilon(0.02));
  CHECK(rep.slack == doctest::Approx(0.0).epsilon(0.02));
  CHECK(rep.rhs >= rep.lhs * (1.0 - 0.03));
}

TEST_CASE("stadium (segment dilation) satisfies the inequality strictly") {
  const int n = 512;
  RasterSet seg(n, 1.0 / n);
  seg.fill_segment(0.3, 0.5, 0.7, 0.5, 1.5 / n);
  const double L = 0.4, r = 0.08;
  const DilationReport rep = check_dilation_inequality(seg, r);
  CHECK(rep.lhs == doctest::Approx(2 * L + 2 * M_PI * r).epsilon(0.03));
  CHECK(rep.rhs == doctest::Approx((2.0 / r) * (2 * L * r + M_PI * r * r)).epsilon(0.03));
  CHECK(rep.slack > 0.2);  // analytic slack = (2L)/(4L + 2 pi r) ~ 0.38
}

TEST_CASE("PGM round trip") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "lowcon_raster_pgm";
  fs::create_directories(dir);
  const int n = 32;
  RasterSet set(n, 1.0 / n);
  set.fill_disc(0.4, 0.6, 0.2);
  write_pgm(set, (dir / "s.pgm").string());
  const RasterSet back = read_raster_pgm((dir / "s.pgm").string(), 1.0 / n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) CHECK(back.at(i, j) == set.at(i, j));
  fs::remove_all(dir);
}
