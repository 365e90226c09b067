#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lowcon/congestion.hpp"
#include "lowcon/grid.hpp"

namespace lowcon {

struct LineSearchParams {
  double sufficient_decrease = 1e-4;  // Armijo c1
  double curvature = 0.9;             // Wolfe c2, used to vet update pairs
  int max_backtracks = 60;
};

struct SolverConfig {
  double grad_tolerance = 1e-6;  // stop on gradient sup-norm
  /// Relative duality-gap stopping target, checked every 10 iterations.
  /// Needed because the unsmoothed dual is nonsmooth on the kink circle and
  /// the gradient sup-norm can stall there. 0 disables.
  double gap_tolerance = 1e-5;
  /// The gap-based stop additionally requires the recovered flux to satisfy
  /// the conservation constraint to this weak-form residual. 0 disables.
  double residual_tolerance = 1e-4;
  int max_iterations = 5000;
  int memory = 10;     // stored correction pairs (limited-memory mode)
  bool dense = false;  // dense inverse-Hessian updates instead
  /// Width of the quadratic smoothing of the dual branch maximum; 0 solves
  /// the nonsmooth dual directly.
  double smoothing_width = 0.0;
  LineSearchParams line_search;
  /// Test instrumentation: called with every accepted iterate.
  std::function<void(const ScalarField&, int)> iterate_hook;

  /// The historical reference setup: dense updates, eps 1e-6, 20 iterations.
  static SolverConfig paper();
};

struct SolveReport {
  double final_objective = 0.0;
  double dual_value = 0.0;    // -final_objective
  double primal_value = 0.0;  // envelope cost of the divergence-projected flux
  double duality_gap = 0.0;   // primal_value - dual_value, >= -1e-8
  double divergence_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string stop_reason;
  std::vector<double> objective_trace;  // nonincreasing
};

/// Dual functional J(u) = sum_cells area * H*(grad u) - <f, u>.
/// Invariant under u -> u + const when f has zero discrete mean.
double objective(const ScalarField& u, const ScalarField& f,
                 const EnvelopePair& e, double smoothing_width = 0.0);

/// Nodal gradient of J: gradient_adjoint(grad H*(grad u)) - f * weights.
/// Has zero discrete sum by construction.
ScalarField objective_gradient(const ScalarField& u, const ScalarField& f,
                               const EnvelopePair& e, SubgradientPolicy policy = {},
                               double smoothing_width = 0.0);

/// Per-cell flux sigma = grad H*(grad u) (smoothed map when width > 0).
VectorField flux_from_potential(const ScalarField& u, const EnvelopePair& e,
                                SubgradientPolicy policy = {},
                                double smoothing_width = 0.0);

/// Feasibility projection: returns sigma + grad psi where psi solves the
/// discrete Neumann problem making the weak divergence constraint exact.
/// The envelope cost of the projected flux is a rigorous upper bound in the
/// duality certificate.
VectorField project_to_divergence(const VectorField& sigma, const ScalarField& f);

struct Recovery {
  VectorField sigma;
  CellField theta;
  double primal_value;  // cost of the raw recovered flux under the envelope
};

/// Flux, mixing density and primal cost recovered from a dual potential.
/// The primal cost is assembled from the theta-mixture (phase fractions at
/// the bridge endpoints r2/r1), which coincides with the envelope integrand.
Recovery recover(const ScalarField& u, const EnvelopePair& e,
                 SubgradientPolicy policy = {}, double smoothing_width = 0.0);

struct SolveResult {
  ScalarField u;
  SolveReport report;
};

/// Quasi-Newton minimization of the dual functional. f must have zero
/// discrete mean; u0 defaults to the zero field. Iterates are re-centered to
/// mean zero. On line-search failure returns the best iterate with
/// converged = false; throws NonFiniteObjective if J or its gradient leaves
/// the finite range.
SolveResult minimize(const ScalarField& f, const EnvelopePair& e,
                     const SolverConfig& cfg, const ScalarField* u0 = nullptr);

}  // namespace lowcon
