#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cluster.hpp"
#include "dataset.hpp"

namespace permlm {

enum class SimMethod { OlsT, NaivePermutation, CorrectPermutation };

const char* sim_method_name(SimMethod m);

struct SimConfig {
  std::string label;                 // optional; derived when empty
  Scenario scenario = Scenario::Independent;
  SimMethod method = SimMethod::OlsT;
  std::size_t n_per_group = 20;      // subjects per treatment arm
  bool n_is_total = false;           // alternative reading: total subjects
  double singleton_fraction = 0.5;
  std::uint64_t sims = 2000;         // S
  std::uint64_t permutations = 2000; // B, permutation methods only
  double alpha = 0.05;
  double beta0 = 0.0;
  double beta1 = 1.0;
  double beta2 = 0.0;                // 0 under the null
  double sigma_u = 1.0;              // family random-intercept sd
  double sigma_e = 1.0;              // subject error sd
  double error_skew = 0.0;           // > 0 switches errors to a shifted
                                     // lognormal with this shape parameter
  std::uint64_t seed = 1;

  void validate() const;
  std::string display_label() const;
};

struct SimResult {
  std::string label;
  double rejection_rate = 0.0;
  std::pair<double, double> ci{0.0, 0.0};
  std::string classification;  // conservative | matches | anticonservative
  std::uint64_t rejections = 0;
  std::uint64_t sims = 0;
  std::optional<std::string> error;
};

// Null-model data under the scenario's family layout: y = beta0 + beta1*x1
// + beta2*x2 + u_family + e, u shared within a family. Deterministic given
// (config, sim_index); streams are keyed (seed, sim_index, purpose).
Dataset generate_dataset(const SimConfig& config, std::uint64_t sim_index);

SimResult run_scenario(const SimConfig& config);

// One result row per config, input order; a failing row reports its error
// instead of aborting the table.
std::vector<SimResult> compare_methods(const std::vector<SimConfig>& configs);

}  // namespace permlm
