#include "lowcon/solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include "lowcon/errors.hpp"
#include "lowcon/numerics.hpp"

namespace lowcon {

namespace {

// Smoothed branch maximum: max(v2, v1) -> (v1 + v2 + sqrt((v1-v2)^2 + mu^2))/2.
// Convex and nondecreasing in both branches, so the composition stays convex.
struct SmoothedDual {
  const EnvelopePair& e;
  double mu;

  double value(double m) const {
    const double v2 = e.h2().conjugate(m);
    const double v1 = e.h1().conjugate(m) - e.k();
    return 0.5 * (v1 + v2 + std::hypot(v1 - v2, mu));
  }

  double gradient_magnitude(double m) const {
    const double v2 = e.h2().conjugate(m);
    const double v1 = e.h1().conjugate(m) - e.k();
    const double w1 = 0.5 * (1.0 + (v1 - v2) / std::hypot(v1 - v2, mu));
    return w1 * e.h1().conjugate_derivative(m) +
           (1.0 - w1) * e.h2().conjugate_derivative(m);
  }
};

double weighted_mean(const ScalarField& u) {
  return integrate(u) / u.grid().area();
}

void recenter(ScalarField& u) {
  const double m = weighted_mean(u);
  for (double& v : u.values()) v -= m;
}

ScalarField weighted(const ScalarField& f) {
  const Grid& g = f.grid();
  ScalarField out(g);
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i) out.at(i, j) = f.at(i, j) * node_weight(g, i, j);
  return out;
}

double primal_cost(const VectorField& sigma, const EnvelopePair& e) {
  const Grid& g = sigma.grid();
  std::vector<double> terms;
  terms.reserve(g.cell_count());
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      terms.push_back(e.primal(norm(sigma.at(i, j))) * g.cell_area());
  return pairwise_sum(terms);
}

double dot_flat(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> terms(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) terms[i] = a[i] * b[i];
  return pairwise_sum(terms);
}

double sup_norm(const std::vector<double>& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

SolverConfig SolverConfig::paper() {
  SolverConfig cfg;
  cfg.grad_tolerance = 1e-6;
  cfg.max_iterations = 20;
  cfg.dense = true;
  cfg.gap_tolerance = 0.0;
  return cfg;
}

double objective(const ScalarField& u, const ScalarField& f,
                 const EnvelopePair& e, double smoothing_width) {
  const Grid& g = u.grid();
  const VectorField gu = gradient(u);
  std::vector<double> terms;
  terms.reserve(g.cell_count());
  if (smoothing_width > 0.0) {
    const SmoothedDual sd{e, smoothing_width};
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        terms.push_back(sd.value(norm(gu.at(i, j))) * g.cell_area());
  } else {
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        terms.push_back(e.dual(norm(gu.at(i, j))) * g.cell_area());
  }
  return pairwise_sum(terms) - inner(f, u);
}

VectorField flux_from_potential(const ScalarField& u, const EnvelopePair& e,
                                SubgradientPolicy policy, double smoothing_width) {
  const Grid& g = u.grid();
  VectorField gu = gradient(u);
  if (smoothing_width > 0.0) {
    const SmoothedDual sd{e, smoothing_width};
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        const Vec2 xi = gu.at(i, j);
        const double m = norm(xi);
        const double scale = m > 0.0 ? sd.gradient_magnitude(m) / m : 0.0;
        gu.x(i, j) = scale * xi.x;
        gu.y(i, j) = scale * xi.y;
      }
    }
  } else {
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        const Vec2 s = e.dual_gradient(gu.at(i, j), policy);
        gu.x(i, j) = s.x;
        gu.y(i, j) = s.y;
      }
    }
  }
  return gu;
}

ScalarField objective_gradient(const ScalarField& u, const ScalarField& f,
                               const EnvelopePair& e, SubgradientPolicy policy,
                               double smoothing_width) {
  ScalarField out = gradient_adjoint(flux_from_potential(u, e, policy, smoothing_width));
  const Grid& g = u.grid();
  for (int j = 0; j <= g.ny; ++j)
    for (int i = 0; i <= g.nx; ++i) out.at(i, j) -= f.at(i, j) * node_weight(g, i, j);
  return out;
}

VectorField project_to_divergence(const VectorField& sigma, const ScalarField& f) {
  if (!(sigma.grid() == f.grid()))
    throw GridMismatch("project_to_divergence: fields on different grids");
  const Grid& g = f.grid();
  const int n = g.node_count();

  const ScalarField fw = weighted(f);
  ScalarField rhs = gradient_adjoint(sigma);
  for (int i = 0; i < n; ++i) rhs.values()[i] = fw.values()[i] - rhs.values()[i];
  {
    double mean = 0.0;
    for (double v : rhs.values()) mean += v;
    mean /= n;
    for (double& v : rhs.values()) v -= mean;
  }

  auto apply = [&](const ScalarField& x) { return gradient_adjoint(gradient(x)); };

  // Plain CG on the (singular, SPD on mean-zero) Q1 stiffness operator.
  ScalarField psi(g);
  std::vector<double> r = rhs.values();
  std::vector<double> p = r;
  double rr = dot_flat(r, r);
  const double scale = std::sqrt(std::max(dot_flat(fw.values(), fw.values()), 1e-300));
  const double tol = 1e-12 * scale;
  for (int it = 0; it < 20 * n && std::sqrt(rr) > tol; ++it) {
    ScalarField pf(g);
    pf.values() = p;
    const ScalarField ap = apply(pf);
    const double pap = dot_flat(p, ap.values());
    if (pap <= 0.0) break;
    const double alpha = rr / pap;
    for (int i = 0; i < n; ++i) {
      psi.values()[i] += alpha * p[i];
      r[i] -= alpha * ap.values()[i];
    }
    const double rr_new = dot_flat(r, r);
    const double beta = rr_new / rr;
    rr = rr_new;
    for (int i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
  }

  const VectorField corr = gradient(psi);
  VectorField out = sigma;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      out.x(i, j) += corr.x(i, j);
      out.y(i, j) += corr.y(i, j);
    }
  }
  return out;
}

Recovery recover(const ScalarField& u, const EnvelopePair& e,
                 SubgradientPolicy policy, double smoothing_width) {
  const Grid& g = u.grid();
  VectorField sigma = flux_from_potential(u, e, policy, smoothing_width);
  CellField theta(g);
  std::vector<double> terms;
  terms.reserve(g.cell_count());
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double m = norm(sigma.at(i, j));
      const double th = e.theta_from_flux(m);
      theta.at(i, j) = th;
      double cost;
      if (th <= 0.0) {
        cost = e.h2()(m);
      } else if (th >= 1.0) {
        cost = e.h1()(m) + e.k();
      } else {
        // Mixed cells split the flux between the bridge endpoints: a theta
        // fraction runs improved at magnitude r2, the rest at r1.
        cost = th * (e.h1()(e.r2()) + e.k()) + (1.0 - th) * e.h2()(e.r1());
      }
      terms.push_back(cost * g.cell_area());
    }
  }
  return {std::move(sigma), std::move(theta), pairwise_sum(terms)};
}

SolveResult minimize(const ScalarField& f, const EnvelopePair& e,
                     const SolverConfig& cfg, const ScalarField* u0) {
  const Grid& g = f.grid();
  const int n = g.node_count();
  const double mu = cfg.smoothing_width;

  ScalarField u = u0 ? *u0 : ScalarField(g);
  recenter(u);

  auto eval_obj = [&](const ScalarField& x) {
    const double v = objective(x, f, e, mu);
    if (!std::isfinite(v)) throw NonFiniteObjective("objective is not finite");
    return v;
  };
  auto eval_grad = [&](const ScalarField& x) {
    ScalarField gr = objective_gradient(x, f, e, {}, mu);
    for (double v : gr.values())
      if (!std::isfinite(v)) throw NonFiniteObjective("gradient is not finite");
    return gr;
  };

  double J = eval_obj(u);
  ScalarField grad = eval_grad(u);

  SolveReport report;
  report.objective_trace.push_back(J);
  if (cfg.iterate_hook) cfg.iterate_hook(u, 0);

  struct Pair {
    std::vector<double> s, y;
    double rho;
  };
  std::deque<Pair> pairs;

  std::vector<double> hessian;  // dense inverse approximation, row-major
  bool dense_initialized = false;
  if (cfg.dense) hessian.assign(static_cast<std::size_t>(n) * n, 0.0);

  auto direction = [&](const std::vector<double>& gv) {
    std::vector<double> d(n);
    if (cfg.dense) {
      if (!dense_initialized) {
        for (int i = 0; i < n; ++i) d[i] = -gv[i];
        return d;
      }
      for (int i = 0; i < n; ++i) {
        double s = 0.0;
        const double* row = &hessian[static_cast<std::size_t>(i) * n];
        for (int j2 = 0; j2 < n; ++j2) s += row[j2] * gv[j2];
        d[i] = -s;
      }
      return d;
    }
    // two-loop recursion
    std::vector<double> q = gv;
    std::vector<double> alpha(pairs.size());
    for (int idx = static_cast<int>(pairs.size()) - 1; idx >= 0; --idx) {
      const Pair& pr = pairs[idx];
      alpha[idx] = pr.rho * dot_flat(pr.s, q);
      for (int i = 0; i < n; ++i) q[i] -= alpha[idx] * pr.y[i];
    }
    if (!pairs.empty()) {
      const Pair& last = pairs.back();
      const double gamma = dot_flat(last.s, last.y) / dot_flat(last.y, last.y);
      for (double& v : q) v *= gamma;
    }
    for (std::size_t idx = 0; idx < pairs.size(); ++idx) {
      const Pair& pr = pairs[idx];
      const double beta = pr.rho * dot_flat(pr.y, q);
      for (int i = 0; i < n; ++i) q[i] += (alpha[idx] - beta) * pr.s[i];
    }
    for (int i = 0; i < n; ++i) d[i] = -q[i];
    return d;
  };

  auto dense_update = [&](const Pair& pr) {
    // H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T
    if (!dense_initialized) {
      const double gamma = 1.0 / (pr.rho * dot_flat(pr.y, pr.y));
      for (int i = 0; i < n; ++i)
        hessian[static_cast<std::size_t>(i) * n + i] = gamma;
      dense_initialized = true;
    }
    std::vector<double> hy(n, 0.0);
    for (int i = 0; i < n; ++i) {
      const double* row = &hessian[static_cast<std::size_t>(i) * n];
      double s = 0.0;
      for (int j2 = 0; j2 < n; ++j2) s += row[j2] * pr.y[j2];
      hy[i] = s;
    }
    const double yhy = dot_flat(pr.y, hy);
    const double c = pr.rho * pr.rho * yhy + pr.rho;
    for (int i = 0; i < n; ++i) {
      double* row = &hessian[static_cast<std::size_t>(i) * n];
      for (int j2 = 0; j2 < n; ++j2) {
        row[j2] += c * pr.s[i] * pr.s[j2] - pr.rho * (pr.s[i] * hy[j2] + hy[i] * pr.s[j2]);
      }
    }
  };

  auto gap_stop_reached = [&]() {
    const VectorField sigma = flux_from_potential(u, e, {}, mu);
    if (cfg.residual_tolerance > 0.0 &&
        divergence_residual(sigma, f) > cfg.residual_tolerance)
      return false;
    const VectorField feas = project_to_divergence(sigma, f);
    const double primal = primal_cost(feas, e);
    // dual with the true (unsmoothed) envelope: <f,u> - sum H*(grad u)
    const double dual = -objective(u, f, e, 0.0);
    return dual != 0.0 && (primal - dual) <= cfg.gap_tolerance * std::abs(dual);
  };

  int iter = 0;
  bool converged = false;
  std::string reason = "max_iterations";

  for (; iter < cfg.max_iterations; ++iter) {
    if (sup_norm(grad.values()) <= cfg.grad_tolerance) {
      converged = true;
      reason = "grad_tolerance";
      break;
    }
    if (cfg.gap_tolerance > 0.0 && iter > 0 && iter % 10 == 0 && gap_stop_reached()) {
      converged = true;
      reason = "gap_tolerance";
      break;
    }

    std::vector<double> d = direction(grad.values());
    double dphi0 = dot_flat(d, grad.values());
    if (!(dphi0 < 0.0)) {  // not a descent direction; restart on steepest descent
      for (int i = 0; i < n; ++i) d[i] = -grad.values()[i];
      dphi0 = dot_flat(d, grad.values());
      pairs.clear();
      if (cfg.dense) {
        std::fill(hessian.begin(), hessian.end(), 0.0);
        dense_initialized = false;
      }
      if (!(dphi0 < 0.0)) {
        converged = true;  // gradient numerically zero
        reason = "grad_tolerance";
        break;
      }
    }

    // Weak-Wolfe line search with bracketing (expand while the curvature
    // condition fails, bisect once both bounds exist). Expansion matters:
    // near the flat start the unit step is far below the curvature scale.
    double t = 1.0, lo = 0.0, hi = std::numeric_limits<double>::infinity();
    ScalarField u_new = u;
    ScalarField grad_new = grad;
    double J_new = J;
    bool accepted = false;
    bool have_armijo = false;
    double armijo_t = 0.0, armijo_J = 0.0;
    for (int bt = 0; bt < cfg.line_search.max_backtracks; ++bt) {
      for (int i = 0; i < n; ++i) u_new.values()[i] = u.values()[i] + t * d[i];
      J_new = eval_obj(u_new);
      if (J_new > J + cfg.line_search.sufficient_decrease * t * dphi0) {
        hi = t;
        t = 0.5 * (lo + hi);
        continue;
      }
      grad_new = eval_grad(u_new);
      if (dot_flat(d, grad_new.values()) < cfg.line_search.curvature * dphi0) {
        have_armijo = true;
        armijo_t = t;
        armijo_J = J_new;
        lo = t;
        t = std::isfinite(hi) ? 0.5 * (lo + hi) : 2.0 * t;
        continue;
      }
      accepted = true;
      break;
    }
    if (!accepted) {
      if (!have_armijo) {
        reason = "line_search_failure";
        break;
      }
      // settle for the best sufficient-decrease point; the pair vetting
      // below decides whether it still feeds the curvature model
      t = armijo_t;
      J_new = armijo_J;
      for (int i = 0; i < n; ++i) u_new.values()[i] = u.values()[i] + t * d[i];
      grad_new = eval_grad(u_new);
    }

    Pair pr;
    pr.s.resize(n);
    pr.y.resize(n);
    for (int i = 0; i < n; ++i) {
      pr.s[i] = u_new.values()[i] - u.values()[i];
      pr.y[i] = grad_new.values()[i] - grad.values()[i];
    }
    recenter(u_new);
    const double sy = dot_flat(pr.s, pr.y);
    const double sn = std::sqrt(dot_flat(pr.s, pr.s));
    const double yn = std::sqrt(dot_flat(pr.y, pr.y));
    if (sy > 1e-12 * sn * yn) {
      pr.rho = 1.0 / sy;
      if (cfg.dense) {
        dense_update(pr);
      } else {
        pairs.push_back(std::move(pr));
        while (static_cast<int>(pairs.size()) > cfg.memory) pairs.pop_front();
      }
    }

    u = std::move(u_new);
    J = J_new;
    grad = std::move(grad_new);
    report.objective_trace.push_back(J);
    if (cfg.iterate_hook) cfg.iterate_hook(u, iter + 1);
  }

  if (!converged && reason == "max_iterations" &&
      sup_norm(grad.values()) <= cfg.grad_tolerance) {
    converged = true;
    reason = "grad_tolerance";
  }

  report.iterations = iter;
  report.final_objective = J;
  // dual_value is always certified against the true (unsmoothed) envelope.
  report.dual_value = -objective(u, f, e, 0.0);
  report.divergence_residual =
      divergence_residual(flux_from_potential(u, e, {}, mu), f);
  {
    const VectorField sigma = flux_from_potential(u, e, {}, mu);
    const VectorField feas = project_to_divergence(sigma, f);
    report.primal_value = primal_cost(feas, e);
  }
  report.duality_gap = report.primal_value - report.dual_value;
  if (!converged && cfg.gap_tolerance > 0.0 && report.dual_value != 0.0 &&
      report.duality_gap <= cfg.gap_tolerance * std::abs(report.dual_value) &&
      (cfg.residual_tolerance <= 0.0 ||
       report.divergence_residual <= cfg.residual_tolerance)) {
    converged = true;
    reason = "gap_tolerance";
  }
  report.converged = converged;
  report.stop_reason = reason;
  return {std::move(u), std::move(report)};
}

}  // namespace lowcon
