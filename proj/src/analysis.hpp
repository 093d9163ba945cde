#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "csv.hpp"
#include "simulation.hpp"

namespace permlm {

enum class ClusterMode { Independent, Homogeneous, Heterogeneous, Auto };

struct AnalysisConfig {
  // Any of: manly, draper-stoneman, freedman-lane, terbraak, ols, all.
  std::vector<std::string> methods{"all"};
  ClusterMode cluster_mode = ClusterMode::Auto;
  std::uint64_t permutations = 2000;
  std::uint64_t seed = 1;
};

struct TestRow {
  std::string method;
  double t_obs = 0.0;
  double p_value = 0.0;
  std::uint64_t permutations = 0;       // 0 for OLS
  std::optional<std::uint64_t> seed;    // absent for OLS
  std::vector<std::string> warnings;
  std::optional<std::string> error;     // set when the method failed
};

struct Report {
  std::vector<TestRow> rows;
  nlohmann::ordered_json diagnostics;
  nlohmann::ordered_json provenance;
};

// Seed for one method, a stable function of (master seed, label): adding
// or removing methods does not perturb the others.
std::uint64_t method_seed(std::uint64_t master_seed, const std::string& label);

ClusterMode parse_cluster_mode(const std::string& name);
Scenario resolve_cluster_mode(const ParsedDataset& input, ClusterMode mode);

// Runs every requested method against the shared dataset. A method that
// fails produces an error row, not a failed run.
Report run_analysis(const ParsedDataset& input, const AnalysisConfig& config);

nlohmann::ordered_json report_to_json(const Report& report);

// Parses a JSON array of simulation rows (see README for the fields).
std::vector<SimConfig> parse_sim_configs(const std::string& json_text);

nlohmann::ordered_json sim_results_to_json(const std::vector<SimResult>& rows);

}  // namespace permlm
