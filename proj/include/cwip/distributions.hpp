#pragma once

#include <cstdint>

namespace cwip {

/// P(X > x) for X ~ chi-square with `dof` degrees of freedom.
double chi_square_sf(double x, double dof);

/// P(X <= k) for X ~ Poisson(mean); 0 for k < 0, and a unit step at 0 when
/// mean == 0.
double poisson_cdf(std::int64_t k, double mean);

double poisson_pmf(std::int64_t k, double mean);

/// Asymptotic Kolmogorov survival function Q(x) = 2 sum (-1)^{j-1} e^{-2 j^2 x^2}.
double kolmogorov_sf(double x);

}  // namespace cwip
