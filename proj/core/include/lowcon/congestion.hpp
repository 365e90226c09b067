#pragma once

#include <cmath>

namespace lowcon {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double t, Vec2 a) { return {t * a.x, t * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Radial power congestion cost alpha*|s|^p with alpha > 0, p > 1
/// (superlinear, so concentrated fluxes are penalized).
class CongestionFunction {
 public:
  CongestionFunction(double alpha, double p);

  double alpha() const { return alpha_; }
  double exponent() const { return p_; }

  /// Cost density at flux magnitude r >= 0.
  double operator()(double r) const;
  double operator()(Vec2 s) const { return (*this)(norm(s)); }

  /// d/dr of the radial profile.
  double derivative(double r) const;

  /// Fenchel conjugate sup_t (m t - alpha t^p) at dual magnitude m >= 0.
  /// For p = 2 this is m^2 / (4 alpha).
  double conjugate(double m) const;
  double conjugate(Vec2 xi) const { return conjugate(norm(xi)); }

  /// Magnitude of the conjugate gradient: the maximizing t = (m/(alpha p))^{1/(p-1)}.
  double conjugate_derivative(double m) const;

  /// Gradient of the conjugate; radial, parallel to xi.
  Vec2 conjugate_gradient(Vec2 xi) const;

  bool operator==(const CongestionFunction&) const = default;

 private:
  double alpha_;
  double p_;
};

enum class BranchTiebreak { prefer_h2_branch, prefer_h1_branch, average };

/// Subgradient selection on the dual kink circle, where both branches of H*
/// are active. Any choice is a valid subgradient; the default picks the
/// smaller flux (h2 branch).
struct SubgradientPolicy {
  BranchTiebreak branch_tiebreak = BranchTiebreak::prefer_h2_branch;
};

/// Convexified two-phase integrand H = (H2 /\ (H1 + k))** for congestion
/// functions h1 <= h2 and area price k > 0, together with its dual
/// H* = H2* \/ (H1* - k) and the flux thresholds r1 < r2 delimiting the
/// no-improvement / mixed / full-improvement regimes.
///
/// The primal envelope equals H2 below r1, is affine on [r1, r2] (the common
/// tangent bridge) and equals H1 + k above r2. When h1 == h2 the pair is
/// degenerate: r1 = r2 = +inf and the envelope is H2 everywhere.
class EnvelopePair {
 public:
  /// Builds thresholds by the quadratic closed form when both exponents are 2,
  /// otherwise by common-tangent slope bisection. Throws OrderingViolation if
  /// h2 < h1 anywhere on the sample ray.
  EnvelopePair(CongestionFunction h1, CongestionFunction h2, double k);

  /// Generic route: lower convex envelope of min(h2, h1+k) on a sampled graph
  /// (Andrew monotone chain). Kept public so tests can cross-validate the
  /// closed-form thresholds against it.
  static EnvelopePair from_sampled_hull(CongestionFunction h1,
                                        CongestionFunction h2, double k);

  double primal(double r) const;
  double primal(Vec2 s) const { return primal(norm(s)); }

  double dual(double m) const;
  double dual(Vec2 xi) const { return dual(norm(xi)); }

  /// Gradient (or selected subgradient) of the dual envelope.
  Vec2 dual_gradient(Vec2 xi, SubgradientPolicy policy = {}) const;
  double dual_gradient_magnitude(double m, SubgradientPolicy policy = {}) const;

  /// Mixing density: 0 below r1, 1 above r2, linear ramp between.
  double theta_from_flux(double sigma_mag) const;

  double r1() const { return r1_; }
  double r2() const { return r2_; }
  double k() const { return k_; }
  const CongestionFunction& h1() const { return h1_; }
  const CongestionFunction& h2() const { return h2_; }

  bool degenerate() const { return !std::isfinite(r1_); }

  /// Dual magnitude where the two conjugate branches cross (+inf if they
  /// never do). Equals the slope of the primal affine bridge.
  double kink() const { return bridge_slope_; }
  double bridge_slope() const { return bridge_slope_; }

 private:
  EnvelopePair(CongestionFunction h1, CongestionFunction h2, double k,
               double r1, double r2);

  CongestionFunction h1_;
  CongestionFunction h2_;
  double k_;
  double r1_;
  double r2_;
  double bridge_slope_;      // h2'(r1) = h1'(r2); +inf when degenerate
  double bridge_intercept_;  // bridge value at r = 0
};

}  // namespace lowcon
