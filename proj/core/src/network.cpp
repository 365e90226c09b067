#include "lowcon/network.hpp"

#include <cmath>

namespace lowcon {

double NetworkCostParams::threshold() const {
  return std::pow(k / (alpha * (p - 1.0)), 1.0 / p);
}

double relaxed_cost(const NetworkCostParams& params, double sigma_mag) {
  const double a = optimal_width(params, sigma_mag);
  if (a <= 1.0) return params.alpha * std::pow(sigma_mag, params.p) + params.k;
  return sigma_mag * std::pow(params.alpha, 1.0 / params.p) * params.p *
         std::pow(params.k / (params.p - 1.0), 1.0 - 1.0 / params.p);
}

double optimal_width(const NetworkCostParams& params, double sigma_mag) {
  const double a =
      sigma_mag * std::pow(params.alpha * (params.p - 1.0) / params.k, 1.0 / params.p);
  return a > 1.0 ? a : 1.0;
}

}  // namespace lowcon
