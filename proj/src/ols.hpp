#pragma once

#include <cstddef>
#include <vector>

#include "dataset.hpp"

namespace permlm {

struct FitResult {
  std::vector<double> coefficients;    // intercept first
  std::vector<double> standard_errors;
  std::vector<double> residuals;
  std::vector<double> fitted;
  std::size_t df = 0;
  double sigma2_hat = 0.0;
};

// Position of the treatment coefficient b_{2.1} in a full-model fit.
inline constexpr std::size_t kTreatmentIndex = 2;

// Least squares with an intercept column prepended to `predictors`,
// solved by Householder QR. Throws RankDeficient when the R diagonal
// ratio falls below 1e-12, DimensionMismatch on ragged input.
FitResult fit_ols(const std::vector<double>& y,
                  const std::vector<const std::vector<double>*>& predictors);

// y ~ 1 + x1 + x2
FitResult fit_full(const Dataset& data);

// y ~ 1 + x1
FitResult fit_reduced(const Dataset& data);

// (coefficient - null_value) / SE. Throws ZeroStandardError on SE = 0.
double t_statistic(const FitResult& fit, std::size_t index,
                   double null_value = 0.0);

}  // namespace permlm
