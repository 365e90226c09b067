#pragma once

#include <stdexcept>

namespace lowcon {

// Scalar relaxation of the one-dimensional network cost: for H1(s) = alpha|s|^p
// the multiplicity a >= 1 is eliminated in closed form.
struct NetworkCostParams {
  double alpha;
  double p;
  double k;

  NetworkCostParams(double alpha_, double p_, double k_)
      : alpha(alpha_), p(p_), k(k_) {
    if (!(alpha > 0.0) || !(p > 1.0) || !(k > 0.0))
      throw std::invalid_argument("NetworkCostParams: need alpha>0, p>1, k>0");
  }

  // flux magnitude where the width constraint a >= 1 becomes inactive
  double threshold() const;
};

// min_{a>=1} (k a + alpha |sigma|^p / a^{p-1})
double relaxed_cost(const NetworkCostParams& params, double sigma_mag);

// argmin of the same problem: max(1, |sigma| (alpha(p-1)/k)^{1/p})
double optimal_width(const NetworkCostParams& params, double sigma_mag);

}  // namespace lowcon
