#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "ols.hpp"

namespace permlm {

// The four ways to permute a two-predictor regression.
enum class Scheme {
  PermuteY,          // Manly
  PermuteX2,         // Draper-Stoneman
  ReducedResiduals,  // Freedman-Lane
  FullResiduals,     // ter Braak
};

const char* scheme_name(Scheme s);

using Permutation = std::vector<std::size_t>;

struct NullDistribution {
  std::vector<double> t_stars;
  Scheme scheme = Scheme::PermuteX2;
  std::uint64_t b = 0;       // number of draws actually stored
  std::uint64_t seed = 0;
  double t_obs = 0.0;
  // 0 for the first three schemes; b_{2.1} for FullResiduals, whose stored
  // draws are already centered at zero by construction.
  double center = 0.0;
  bool exhaustive = false;
};

struct SamplingOptions {
  // Switch to full enumeration when the permutation space is at most this
  // large (n! for unrestricted schemes).
  std::uint64_t enumeration_cap = 10000;
  bool force_sampling = false;
  std::uint32_t retry_cap = 64;
};

// One t* draw: apply the scheme's transformation under `perm`, refit, and
// return the scheme's statistic. Pure function of its arguments.
double draw_t_star(Scheme scheme, const Dataset& data, const Permutation& perm);

// B draws with per-draw counter-based streams keyed by (seed, draw index);
// deterministic for any evaluation order. Falls back to exhaustive
// enumeration at toy scale unless force_sampling is set. A draw that fails
// (rank-deficient refit, zero SE) is retried with a fresh permutation up to
// retry_cap times, then aborts with DegenerateScheme.
NullDistribution null_distribution(Scheme scheme, const Dataset& data,
                                   std::uint64_t B, std::uint64_t seed,
                                   const SamplingOptions& opts = {});

struct CollinearityDiagnostic {
  double r = 0.0;   // sample correlation r(x1, x2)
  bool warning = false;
};

// Warns when |r(x1, x2)| > 0.9, the regime where reduced-residual
// permutation fails to break the X2-Y relationship.
CollinearityDiagnostic collinearity_diagnostic(const Dataset& data);

double pearson(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace permlm
