#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "lowcon/network.hpp"

using namespace lowcon;

namespace {

// 1-D oracle: minimize k a + alpha |sigma|^p / a^{p-1} over a log grid on
// [1, 1e3], then refine by ternary search around the best grid point
double cost_at(const NetworkCostParams& q, double s, double a) {
  return q.k * a + q.alpha * std::pow(s, q.p) / std::pow(a, q.p - 1.0);
}

std::pair<double, double> oracle(const NetworkCostParams& q, double s) {
  const int n = 4000;
  double best_a = 1.0, best = cost_at(q, s, 1.0);
  for (int i = 0; i <= n; ++i) {
    const double a = std::pow(10.0, 3.0 * i / n);
    const double c = cost_at(q, s, a);
    if (c < best) {
      best = c;
      best_a = a;
    }
  }
  double lo = std::max(1.0, best_a / 1.01), hi = std::min(1e3, best_a * 1.01);
  for (int it = 0; it < 200; ++it) {
    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (cost_at(q, s, m1) < cost_at(q, s, m2)) hi = m2; else lo = m1;
  }
  const double a = 0.5 * (lo + hi);
  return {cost_at(q, s, a), a};
}

}  // namespace

TEST_CASE("trivial anchors") {
  const NetworkCostParams q(1.0, 2.0, 1.0);
  CHECK(relaxed_cost(q, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(optimal_width(q, 0.0) == 1.0);
  CHECK(relaxed_cost(q, 2.0) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(optimal_width(q, 3.0) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(optimal_width(q, q.threshold()) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("continuity at the threshold") {
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> aa(0.1, 5.0), pp(1.1, 4.0), kk(0.05, 3.0);
  for (int i = 0; i < 100; ++i) {
    const NetworkCostParams q(aa(rng), pp(rng), kk(rng));
    const double t = q.threshold();
    const double below = q.alpha * std::pow(t, q.p) + q.k;
    const double above =
        t * std::pow(q.alpha, 1.0 / q.p) * q.p * std::pow(q.k / (q.p - 1.0), 1.0 - 1.0 / q.p);
    CHECK(below == doctest::Approx(above).epsilon(1e-10));
    CHECK(relaxed_cost(q, t) == doctest::Approx(below).epsilon(1e-10));
  }
}

TEST_CASE("matches the 1-D minimization oracle") {
  std::mt19937 rng(10);
  std::uniform_real_distribution<double> aa(0.1, 5.0), pp(1.1, 4.0), kk(0.05, 3.0),
      ss(0.0, 6.0);
  for (int i = 0; i < 300; ++i) {
    const NetworkCostParams q(aa(rng), pp(rng), kk(rng));
    const double s = ss(rng);
    const auto [c, a] = oracle(q, s);
    CHECK(relaxed_cost(q, s) == doctest::Approx(c).epsilon(1e-8));
    if (optimal_width(q, s) > 1.0 + 1e-6)
      CHECK(optimal_width(q, s) == doctest::Approx(a).epsilon(1e-6));
  }
}

TEST_CASE("optimal width reproduces the cost when substituted back") {
  std::mt19937 rng(12);
  std::uniform_real_distribution<double> aa(0.1, 5.0), pp(1.1, 4.0), kk(0.05, 3.0),
      ss(0.0, 6.0);
  for (int i = 0; i < 1000; ++i) {
    const NetworkCostParams q(aa(rng), pp(rng), kk(rng));
    const double s = ss(rng);
    const double a = optimal_width(q, s);
    CHECK(a >= 1.0);
    CHECK(cost_at(q, s, a) == doctest::Approx(relaxed_cost(q, s)).epsilon(1e-10));
    // optimality against arbitrary feasible widths
    for (double ap : {1.0, 1.3, 2.0, 7.0, 50.0})
      CHECK(cost_at(q, s, ap) >= relaxed_cost(q, s) - 1e-10);
  }
}

TEST_CASE("relaxed cost is convex and nondecreasing in sigma") {
  const NetworkCostParams q(0.7, 2.5, 0.4);
  double prev = relaxed_cost(q, 0.0);
  for (int i = 1; i <= 200; ++i) {
    const double s = 4.0 * i / 200.0;
    const double c = relaxed_cost(q, s);
    CHECK(c >= prev - 1e-14);
    prev = c;
  }
  for (int i = 1; i < 100; ++i) {
    const double s = 4.0 * i / 100.0;
    const double mid = relaxed_cost(q, s);
    const double chord = 0.5 * (relaxed_cost(q, s - 0.02) + relaxed_cost(q, s + 0.02));
    CHECK(mid <= chord + 1e-12);
  }
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS_AS(NetworkCostParams(0.0, 2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(NetworkCostParams(1.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(NetworkCostParams(1.0, 2.0, 0.0), std::invalid_argument);
}
