#pragma once

#include <cstdint>

#include "dataset.hpp"

namespace permlm {

// Inputs to the closed-form approximation of rho(Y*, X2) under
// reduced-residual permutation. b1 is the realized reduced-model slope;
// beta12 and beta21 are the population full-model slopes.
struct RhoInputs {
  double b1 = 0.0;
  double beta12 = 0.0;
  double beta21 = 0.0;
  double varX1 = 1.0;
  double varX2 = 1.0;
  double varY = 1.0;
  double rhoX1X2 = 0.0;
};

// b1 * rho(X1,X2) * sqrt(var X1) / sqrt(2*b1*[(b1 - beta12)*var X1
// - beta21*cov(X1,X2)] + var Y). Throws InvalidRegime when the radicand
// is nonpositive.
double rho_ystar_x2(const RhoInputs& inputs);

// Average over B reduced-residual permutations of the sample correlation
// between Y* and x2.
double monte_carlo_rho(const Dataset& data, std::uint64_t B,
                       std::uint64_t seed);

struct MomentCheck {
  double mean_perm = 0.0;
  double mean_boot = 0.0;
  double var_perm = 0.0;
  double var_boot = 0.0;
  std::size_t n = 0;
  double b21 = 0.0;  // full-model treatment coefficient of the input data
};

// Compares B full-residual permutation draws of b*_{2.1} against B
// residual-bootstrap draws of b+_{2.1}: both means should sit at b_{2.1}
// and var_boot/var_perm should approach 1 - 1/n.
MomentCheck terbraak_moment_check(const Dataset& data, std::uint64_t B,
                                  std::uint64_t seed);

}  // namespace permlm
