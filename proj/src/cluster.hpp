#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "rng.hpp"
#include "schemes.hpp"

namespace permlm {

enum class Scenario { Independent, Homogeneous, Heterogeneous };

const char* scenario_name(Scenario s);

struct Family {
  std::string id;
  std::vector<std::size_t> members;  // row indices, size 1 or 2
};

// Family layout plus the original 0/1 treatment, the input to restricted
// permutation of the treatment variable.
struct ClusterStructure {
  std::vector<Family> families;  // sorted by id
  Scenario scenario = Scenario::Independent;
  std::size_t n = 0;
  std::vector<int> x2;           // original treatment per row
};

// Validates the scenario constraints: family sizes <= 2; Homogeneous
// requires equal treatment within each pair, Heterogeneous one of each,
// Independent all singletons. Requires dichotomous 0/1 treatment.
ClusterStructure build_structure(const Dataset& data, Scenario scenario);

// Heterogeneous iff some family of size >= 2 mixes both treatment levels;
// else Homogeneous iff any family has size >= 2; else Independent.
Scenario infer_scenario(const Dataset& data);

// Exact count of distinct valid assignments. Throws Overflow past 2^64.
std::uint64_t permutation_space_size(const ClusterStructure& structure);

// Uniform draw from the valid assignment space.
std::vector<int> sample_assignment(const ClusterStructure& structure,
                                   RngStream& rng);

// All distinct valid assignments; throws SpaceTooLarge past `cap`.
std::vector<std::vector<int>> enumerate_assignments(
    const ClusterStructure& structure, std::uint64_t cap);

// Treatment-permutation null distribution restricted to the cluster
// structure: each draw regresses y on (x1, x2*) and records b*/SE.
NullDistribution cluster_null_distribution(const Dataset& data,
                                           const ClusterStructure& structure,
                                           std::uint64_t B, std::uint64_t seed,
                                           const SamplingOptions& opts = {});

}  // namespace permlm
