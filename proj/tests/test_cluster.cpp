#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cluster.hpp"
#include "dataset.hpp"
#include "error.hpp"
#include "inference.hpp"
#include "ols.hpp"
#include "oracle.hpp"
#include "rng.hpp"
#include "schemes.hpp"

using namespace permlm;

namespace {

// 11 singletons, 6 exposed.
Dataset toy_independent() {
  Dataset d;
  d.y = {3, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5};
  d.x1 = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  d.x2 = {1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0};
  std::vector<std::string> fam;
  for (int i = 0; i < 11; ++i) fam.push_back("s" + std::to_string(i));
  d.family_id = fam;
  return d;
}

// 5 singletons (2 exposed, 3 control) + 3 same-treatment pairs
// (2 exposed pairs, 1 control pair): C(5,2) * C(3,2) = 30.
Dataset toy_homogeneous() {
  Dataset d;
  d.y = {2, 7, 1, 8, 2, 8, 1, 8, 2, 8, 4};
  d.x1 = {5, 3, 8, 1, 9, 2, 6, 4, 7, 10, 11};
  d.x2 = {1, 1, 0, 0, 0, 1, 1, 1, 1, 0, 0};
  d.family_id = std::vector<std::string>{
      "a", "b", "c", "d", "e", "p1", "p1", "p2", "p2", "p3", "p3"};
  return d;
}

// 5 singletons (2 exposed, 3 control) + 3 mixed pairs: C(5,2) * 2^3 = 80.
Dataset toy_heterogeneous() {
  Dataset d;
  d.y = {2, 7, 1, 8, 2, 8, 1, 8, 2, 8, 4};
  d.x1 = {5, 3, 8, 1, 9, 2, 6, 4, 7, 10, 11};
  d.x2 = {1, 1, 0, 0, 0, 1, 0, 1, 0, 0, 1};
  d.family_id = std::vector<std::string>{
      "a", "b", "c", "d", "e", "p1", "p1", "p2", "p2", "p3", "p3"};
  return d;
}

std::size_t exposed_count(const std::vector<int>& a) {
  std::size_t c = 0;
  for (int v : a) c += static_cast<std::size_t>(v);
  return c;
}

}  // namespace

TEST_CASE("toy permutation-space sizes: 462, 30, 80") {
  const auto si =
      build_structure(toy_independent(), Scenario::Independent);
  CHECK(permutation_space_size(si) == 462);

  const auto sh = build_structure(toy_homogeneous(), Scenario::Homogeneous);
  CHECK(permutation_space_size(sh) == 30);

  const auto st =
      build_structure(toy_heterogeneous(), Scenario::Heterogeneous);
  CHECK(permutation_space_size(st) == 80);
}

TEST_CASE("enumeration yields exactly the counted distinct assignments") {
  struct Row {
    Dataset data;
    Scenario scenario;
    std::uint64_t expected;
  };
  const std::vector<Row> rows{
      {toy_independent(), Scenario::Independent, 462},
      {toy_homogeneous(), Scenario::Homogeneous, 30},
      {toy_heterogeneous(), Scenario::Heterogeneous, 80},
  };
  for (const auto& row : rows) {
    const auto s = build_structure(row.data, row.scenario);
    const auto all = enumerate_assignments(s, 1000);
    CHECK(all.size() == row.expected);
    std::set<std::vector<int>> distinct(all.begin(), all.end());
    CHECK(distinct.size() == row.expected);
    const std::size_t margin = exposed_count(s.x2);
    for (const auto& a : all) {
      CHECK(exposed_count(a) == margin);
      if (row.scenario == Scenario::Homogeneous) {
        for (const auto& fam : s.families)
          if (fam.members.size() == 2)
            CHECK(a[fam.members[0]] == a[fam.members[1]]);
      }
      if (row.scenario == Scenario::Heterogeneous) {
        for (const auto& fam : s.families)
          if (fam.members.size() == 2)
            CHECK(a[fam.members[0]] + a[fam.members[1]] == 1);
      }
    }
  }
}

TEST_CASE("enumeration refuses spaces above the cap") {
  const auto s = build_structure(toy_independent(), Scenario::Independent);
  CHECK_THROWS_AS(enumerate_assignments(s, 100), Error);
}

TEST_CASE("sampled assignments respect margins and constraints") {
  for (Scenario sc : {Scenario::Independent, Scenario::Homogeneous,
                      Scenario::Heterogeneous}) {
    const Dataset d = sc == Scenario::Independent    ? toy_independent()
                      : sc == Scenario::Homogeneous ? toy_homogeneous()
                                                    : toy_heterogeneous();
    const auto s = build_structure(d, sc);
    const std::size_t margin = exposed_count(s.x2);
    RngStream rng(2024u);
    for (int k = 0; k < 300; ++k) {
      const std::vector<int> a = sample_assignment(s, rng);
      CHECK(exposed_count(a) == margin);
      for (const auto& fam : s.families) {
        if (fam.members.size() != 2) continue;
        if (sc == Scenario::Homogeneous)
          CHECK(a[fam.members[0]] == a[fam.members[1]]);
        if (sc == Scenario::Heterogeneous)
          CHECK(a[fam.members[0]] + a[fam.members[1]] == 1);
      }
    }
  }
}

TEST_CASE("sampling is uniform over the 30-assignment space") {
  const auto s = build_structure(toy_homogeneous(), Scenario::Homogeneous);
  const auto all = enumerate_assignments(s, 100);
  REQUIRE(all.size() == 30);
  std::map<std::vector<int>, std::size_t> counts;
  for (const auto& a : all) counts[a] = 0;

  const std::size_t draws = 10000;
  RngStream rng(555u);
  for (std::size_t k = 0; k < draws; ++k) {
    const std::vector<int> a = sample_assignment(s, rng);
    auto it = counts.find(a);
    REQUIRE(it != counts.end());  // every draw must be a valid assignment
    ++it->second;
  }

  const double expected = static_cast<double>(draws) / 30.0;
  double chi2 = 0.0;
  for (const auto& [a, c] : counts) {
    const double diff = static_cast<double>(c) - expected;
    chi2 += diff * diff / expected;
  }
  // df = 29, alpha = 0.001 (z = 3.0902)
  const double crit = oracle::chi2_quantile(0.999, 29.0, 3.0902);
  CHECK(chi2 < crit);

  // every cell within 4 SEs of the uniform frequency
  const double p = 1.0 / 30.0;
  const double se = std::sqrt(p * (1 - p) / static_cast<double>(draws));
  for (const auto& [a, c] : counts)
    CHECK(std::fabs(static_cast<double>(c) / draws - p) < 4.0 * se);
}

TEST_CASE("independent cluster sampling equals unrestricted treatment "
          "permutation") {
  const Dataset d = toy_independent();
  const auto s = build_structure(d, Scenario::Independent);
  SamplingOptions opts;
  opts.force_sampling = true;
  const NullDistribution a = cluster_null_distribution(d, s, 100, 42, opts);
  const NullDistribution b =
      null_distribution(Scheme::PermuteX2, d, 100, 42, opts);
  CHECK(a.t_stars == b.t_stars);  // same seed policy, bit-identical
}

TEST_CASE("exhaustive cluster distribution contains the observed statistic") {
  const Dataset d = toy_heterogeneous();
  const auto s = build_structure(d, Scenario::Heterogeneous);
  const NullDistribution nd = cluster_null_distribution(d, s, 80, 1);
  CHECK(nd.exhaustive);
  REQUIRE(nd.t_stars.size() == 80);
  const double t_obs = nd.t_obs;
  bool found = false;
  for (double t : nd.t_stars)
    if (std::fabs(t - t_obs) < 1e-12) found = true;
  CHECK(found);  // the identity assignment is part of the space
}

TEST_CASE("exact cluster p-value matches brute force over all 80") {
  const Dataset d = toy_heterogeneous();
  const auto s = build_structure(d, Scenario::Heterogeneous);
  const NullDistribution nd = cluster_null_distribution(d, s, 80, 1);
  const double p = permutation_p_value(nd.t_obs, nd);

  const double t_obs = oracle::naive_t_x2(d.y, d.x1, d.x2);
  std::size_t count = 0;
  for (const auto& a : enumerate_assignments(s, 100)) {
    std::vector<double> x2star(a.begin(), a.end());
    if (std::fabs(oracle::naive_t_x2(d.y, d.x1, x2star)) >=
        std::fabs(t_obs) - 1e-12)
      ++count;
  }
  CHECK(p == doctest::Approx(static_cast<double>(count + 1) / 81.0)
                 .epsilon(1e-9));
}

TEST_CASE("scenario inference from family labels") {
  CHECK(infer_scenario(toy_independent()) == Scenario::Independent);
  CHECK(infer_scenario(toy_homogeneous()) == Scenario::Homogeneous);
  CHECK(infer_scenario(toy_heterogeneous()) == Scenario::Heterogeneous);
}

TEST_CASE("structure validation rejects malformed inputs") {
  SUBCASE("non-dichotomous treatment") {
    Dataset d = toy_independent();
    d.x2[0] = 0.5;
    CHECK_THROWS_AS(build_structure(d, Scenario::Independent), Error);
  }
  SUBCASE("mixed pair under the homogeneous scenario") {
    CHECK_THROWS_AS(
        build_structure(toy_heterogeneous(), Scenario::Homogeneous), Error);
  }
  SUBCASE("same-treatment pair under the heterogeneous scenario") {
    CHECK_THROWS_AS(
        build_structure(toy_homogeneous(), Scenario::Heterogeneous), Error);
  }
  SUBCASE("pairs under the independent scenario") {
    CHECK_THROWS_AS(
        build_structure(toy_homogeneous(), Scenario::Independent), Error);
  }
  SUBCASE("one-level treatment") {
    Dataset d = toy_independent();
    std::fill(d.x2.begin(), d.x2.end(), 1.0);
    CHECK_THROWS_AS(build_structure(d, Scenario::Independent), Error);
  }
}

TEST_CASE("space size overflows are reported, not wrapped") {
  Dataset d;
  const std::size_t n = 80;
  std::vector<std::string> fam;
  for (std::size_t i = 0; i < n; ++i) {
    d.y.push_back(static_cast<double>(i % 7));
    d.x1.push_back(static_cast<double>(i));
    d.x2.push_back(static_cast<double>(i % 2));
    fam.push_back("f" + std::to_string(i));
  }
  d.family_id = fam;
  const auto s = build_structure(d, Scenario::Independent);
  CHECK_THROWS_AS(permutation_space_size(s), Error);  // C(80,40) > 2^64
  try {
    permutation_space_size(s);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Overflow);
  }
}
