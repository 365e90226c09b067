#include "lowcon/congestion.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

#include "lowcon/errors.hpp"

namespace lowcon {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

CongestionFunction::CongestionFunction(double alpha, double p)
    : alpha_(alpha), p_(p) {
  if (!(alpha > 0.0)) throw std::invalid_argument("CongestionFunction: alpha must be > 0");
  if (!(p > 1.0)) throw std::invalid_argument("CongestionFunction: p must be > 1");
}

double CongestionFunction::operator()(double r) const {
  if (r == 0.0) return 0.0;
  return alpha_ * std::pow(r, p_);
}

double CongestionFunction::derivative(double r) const {
  if (r == 0.0) return 0.0;
  return alpha_ * p_ * std::pow(r, p_ - 1.0);
}

double CongestionFunction::conjugate(double m) const {
  if (m <= 0.0) return 0.0;
  const double t = conjugate_derivative(m);
  return m * t - (*this)(t);
}

double CongestionFunction::conjugate_derivative(double m) const {
  if (m <= 0.0) return 0.0;
  return std::pow(m / (alpha_ * p_), 1.0 / (p_ - 1.0));
}

Vec2 CongestionFunction::conjugate_gradient(Vec2 xi) const {
  const double m = norm(xi);
  if (m == 0.0) return {0.0, 0.0};
  return (conjugate_derivative(m) / m) * xi;
}

// ---------------------------------------------------------------------------

namespace {

void check_ordering(const CongestionFunction& h1, const CongestionFunction& h2,
                    double rmax) {
  const int n = 2048;
  for (int i = 0; i <= n; ++i) {
    const double r = rmax * static_cast<double>(i) / n;
    if (h2(r) < h1(r) * (1.0 - 1e-12) - 1e-300)
      throw OrderingViolation("EnvelopePair: h2 < h1 at r = " + std::to_string(r));
  }
}

bool identical(const CongestionFunction& a, const CongestionFunction& b) {
  return a.alpha() == b.alpha() && a.exponent() == b.exponent();
}

// Smallest radius where h1(r) + k <= h2(r), or +inf if none below the cap.
double crossing_radius(const CongestionFunction& h1, const CongestionFunction& h2,
                       double k) {
  double hi = 1e-3;
  const double cap = 1e8;
  while (hi < cap && h1(hi) + k > h2(hi)) hi *= 2.0;
  if (h1(hi) + k > h2(hi)) return kInf;
  double lo = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (h1(mid) + k > h2(mid)) lo = mid; else hi = mid;
  }
  return hi;
}

struct Bridge {
  double r1, r2, slope;
};

// Common tangent of h2 (left) and h1 + k (right), parametrized by the shared
// slope s: r1(s) = h2'^{-1}(s), r2(s) = h1'^{-1}(s). The tangency defect
//   F(s) = h1(r2) + k - h2(r1) - s (r2 - r1)
// is k at s = 0 and decreases through the tangent slope; bisect on it.
Bridge common_tangent(const CongestionFunction& h1, const CongestionFunction& h2,
                      double k, double rc) {
  auto inv_d1 = [&](double s) {
    return std::pow(s / (h1.alpha() * h1.exponent()), 1.0 / (h1.exponent() - 1.0));
  };
  auto inv_d2 = [&](double s) {
    return std::pow(s / (h2.alpha() * h2.exponent()), 1.0 / (h2.exponent() - 1.0));
  };
  auto defect = [&](double s) {
    const double r1 = inv_d2(s), r2 = inv_d1(s);
    return h1(r2) + k - h2(r1) - s * (r2 - r1);
  };
  double shi = std::max(h1.derivative(rc), h2.derivative(rc));
  int guard = 0;
  while (defect(shi) > 0.0 && guard++ < 200) shi *= 2.0;
  double slo = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (slo + shi);
    if (defect(mid) > 0.0) slo = mid; else shi = mid;
  }
  const double s = 0.5 * (slo + shi);
  return {inv_d2(s), inv_d1(s), s};
}

}  // namespace

EnvelopePair::EnvelopePair(CongestionFunction h1, CongestionFunction h2, double k,
                           double r1, double r2)
    : h1_(h1), h2_(h2), k_(k), r1_(r1), r2_(r2) {
  if (std::isfinite(r1_) && r2_ > r1_) {
    bridge_slope_ = (h1_(r2_) + k_ - h2_(r1_)) / (r2_ - r1_);
    bridge_intercept_ = h2_(r1_) - bridge_slope_ * r1_;
  } else {
    bridge_slope_ = kInf;
    bridge_intercept_ = 0.0;
  }
}

EnvelopePair::EnvelopePair(CongestionFunction h1, CongestionFunction h2, double k)
    : EnvelopePair([&]() -> EnvelopePair {
        if (!(k > 0.0)) throw std::invalid_argument("EnvelopePair: k must be > 0");
        if (identical(h1, h2)) return EnvelopePair(h1, h2, k, kInf, kInf);
        const double rc = crossing_radius(h1, h2, k);
        check_ordering(h1, h2, std::isfinite(rc) ? 2.0 * rc : 8.0);
        if (!std::isfinite(rc)) return EnvelopePair(h1, h2, k, kInf, kInf);
        if (h1.exponent() == 2.0 && h2.exponent() == 2.0) {
          // Slope matching 2b r1 = 2a r2 plus value matching gives
          // r1 = sqrt(a k / (b (b - a))), r2 = sqrt(b k / (a (b - a))).
          const double a = h1.alpha(), b = h2.alpha();
          const double r1 = std::sqrt(a * k / (b * (b - a)));
          const double r2 = std::sqrt(b * k / (a * (b - a)));
          return EnvelopePair(h1, h2, k, r1, r2);
        }
        const Bridge br = common_tangent(h1, h2, k, rc);
        return EnvelopePair(h1, h2, k, br.r1, br.r2);
      }()) {}

EnvelopePair EnvelopePair::from_sampled_hull(CongestionFunction h1,
                                             CongestionFunction h2, double k) {
  if (!(k > 0.0)) throw std::invalid_argument("EnvelopePair: k must be > 0");
  if (identical(h1, h2)) return EnvelopePair(h1, h2, k, kInf, kInf);
  const double rc = crossing_radius(h1, h2, k);
  check_ordering(h1, h2, std::isfinite(rc) ? 2.0 * rc : 8.0);
  if (!std::isfinite(rc)) return EnvelopePair(h1, h2, k, kInf, kInf);

  const double rmax = 4.0 * rc;
  const int n = 400000;
  auto g = [&](double r) { return std::min(h2(r), h1(r) + k); };

  // Andrew monotone chain on the sampled graph; the graph is x-sorted so a
  // single lower-hull pass suffices.
  std::vector<int> hull;
  std::vector<double> xs(n + 1), ys(n + 1);
  for (int i = 0; i <= n; ++i) {
    xs[i] = rmax * static_cast<double>(i) / n;
    ys[i] = g(xs[i]);
  }
  for (int i = 0; i <= n; ++i) {
    while (hull.size() >= 2) {
      const int p = hull[hull.size() - 2], q = hull[hull.size() - 1];
      const double turn = (xs[q] - xs[p]) * (ys[i] - ys[p]) -
                          (ys[q] - ys[p]) * (xs[i] - xs[p]);
      if (turn <= 0.0) hull.pop_back(); else break;
    }
    hull.push_back(i);
  }

  // The bridge is the unique hull edge skipping sample indices.
  int best = -1, gap = 1;
  for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
    const int d = hull[e + 1] - hull[e];
    if (d > gap) { gap = d; best = static_cast<int>(e); }
  }
  if (best < 0) return EnvelopePair(h1, h2, k, kInf, kInf);
  return EnvelopePair(h1, h2, k, xs[hull[best]], xs[hull[best + 1]]);
}

double EnvelopePair::primal(double r) const {
  if (r <= r1_) return h2_(r);
  if (r >= r2_) return h1_(r) + k_;
  return bridge_slope_ * r + bridge_intercept_;
}

double EnvelopePair::dual(double m) const {
  return std::max(h2_.conjugate(m), h1_.conjugate(m) - k_);
}

double EnvelopePair::dual_gradient_magnitude(double m, SubgradientPolicy policy) const {
  const double v2 = h2_.conjugate(m);
  const double v1 = h1_.conjugate(m) - k_;
  if (v1 > v2) return h1_.conjugate_derivative(m);
  if (v2 > v1) return h2_.conjugate_derivative(m);
  switch (policy.branch_tiebreak) {
    case BranchTiebreak::prefer_h1_branch:
      return h1_.conjugate_derivative(m);
    case BranchTiebreak::average:
      return 0.5 * (h1_.conjugate_derivative(m) + h2_.conjugate_derivative(m));
    case BranchTiebreak::prefer_h2_branch:
    default:
      return h2_.conjugate_derivative(m);
  }
}

Vec2 EnvelopePair::dual_gradient(Vec2 xi, SubgradientPolicy policy) const {
  const double m = norm(xi);
  if (m == 0.0) return {0.0, 0.0};
  return (dual_gradient_magnitude(m, policy) / m) * xi;
}

double EnvelopePair::theta_from_flux(double sigma_mag) const {
  if (degenerate() || sigma_mag <= r1_) return 0.0;
  if (sigma_mag >= r2_) return 1.0;
  return (sigma_mag - r1_) / (r2_ - r1_);
}

}  // namespace lowcon
