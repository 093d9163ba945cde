#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "dataset.hpp"

namespace permlm {

struct VerifyOptions {
  std::uint64_t seed = 20230901;
  double tolerance_rho = 0.05;   // formula vs Monte Carlo, absolute
  double tolerance_var = 0.05;   // around the 1 - 1/n variance ratio
  std::size_t rho_n = 5000;
  std::uint64_t rho_draws = 2000;
  std::size_t moment_n = 50;
  std::uint64_t moment_draws = 20000;
  std::size_t ks_n = 100;
  std::uint64_t ks_draws = 2000;
  double ks_threshold = 0.05;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;      // observed discrepancy / statistic
  double threshold = 0.0;
  std::string detail;
};

// Synthetic dataset with a given population rho(x1, x2): x1 ~ N(0,1),
// x2 = rho*x1 + sqrt(1-rho^2)*z, y = beta12*x1 + beta21*x2 + N(0,1).
Dataset correlated_dataset(std::size_t n, double rho, double beta12,
                           double beta21, std::uint64_t seed);

double ks_two_sample(std::vector<double> a, std::vector<double> b);

double sample_variance(const std::vector<double>& v);

// The rho-formula grid check, the permutation-vs-bootstrap moment check,
// and the full-residual CDF comparison, each reported pass/fail.
std::vector<CheckResult> run_verification(const VerifyOptions& options);

nlohmann::ordered_json verification_to_json(
    const std::vector<CheckResult>& checks);

}  // namespace permlm
