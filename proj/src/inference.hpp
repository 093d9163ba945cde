#pragma once

#include <cstdint>
#include <utility>

#include "ols.hpp"
#include "schemes.hpp"

namespace permlm {

// Two-sided Monte Carlo p-value with the (count + 1)/(B + 1) correction;
// never returns 0. FullResiduals draws are stored pre-centered, so the
// comparison is |t*| >= |t_obs| for every scheme.
double permutation_p_value(double t_obs, const NullDistribution& null);

// Student-t CDF via the regularized incomplete beta function; absolute
// error below 1e-10.
double t_cdf(double t, long df);

// Two-sided classical p-value for the coefficient at `index`.
double ols_p_value(const FitResult& fit, std::size_t index);

// Wilson score interval for a binomial proportion.
std::pair<double, double> proportion_ci(std::uint64_t successes,
                                        std::uint64_t trials, double level);

// Lower quantile of the standard normal (Acklam's rational approximation
// plus one Halley refinement).
double normal_quantile(double p);

double normal_cdf(double x);

}  // namespace permlm
