#include "cwip/distributions.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

namespace cwip {

double chi_square_sf(double x, double dof) {
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(dof / 2.0, x / 2.0);
}

double poisson_cdf(std::int64_t k, double mean) {
  if (k < 0) return 0.0;
  if (mean <= 0.0) return 1.0;
  return boost::math::gamma_q(static_cast<double>(k) + 1.0, mean);
}

double poisson_pmf(std::int64_t k, double mean) {
  if (k < 0) return 0.0;
  if (mean <= 0.0) return k == 0 ? 1.0 : 0.0;
  const double kd = static_cast<double>(k);
  return std::exp(kd * std::log(mean) - mean - std::lgamma(kd + 1.0));
}

double kolmogorov_sf(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 0.2) return 1.0;  // series is numerically 1 here
  double sum = 0.0;
  double sign = 1.0;
  for (int j = 1; j <= 200; ++j) {
    const double term = std::exp(-2.0 * j * j * x * x);
    sum += sign * term;
    if (term < 1e-17) break;
    sign = -sign;
  }
  const double q = 2.0 * sum;
  return q < 0.0 ? 0.0 : (q > 1.0 ? 1.0 : q);
}

}  // namespace cwip
