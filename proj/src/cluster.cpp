#include "cluster.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "error.hpp"
#include "ols.hpp"

namespace permlm {

const char* scenario_name(Scenario s) {
  switch (s) {
    case Scenario::Independent: return "independent";
    case Scenario::Homogeneous: return "homogeneous";
    case Scenario::Heterogeneous: return "heterogeneous";
  }
  return "?";
}

namespace {

std::vector<int> dichotomous_x2(const Dataset& data) {
  std::vector<int> out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.x2[i] == 0.0)
      out[i] = 0;
    else if (data.x2[i] == 1.0)
      out[i] = 1;
    else
      raise(ErrorCode::InvalidArgument,
            "cluster permutation requires dichotomous 0/1 treatment");
  }
  return out;
}

std::vector<Family> group_families(const Dataset& data) {
  std::map<std::string, Family> by_id;  // canonical sort by label
  if (data.family_id) {
    for (std::size_t i = 0; i < data.size(); ++i) {
      const std::string& id = (*data.family_id)[i];
      auto& fam = by_id[id];
      fam.id = id;
      fam.members.push_back(i);
    }
  } else {
    for (std::size_t i = 0; i < data.size(); ++i) {
      std::string id = "row" + std::to_string(i);
      by_id[id] = Family{id, {i}};
    }
  }
  std::vector<Family> out;
  out.reserve(by_id.size());
  for (auto& [id, fam] : by_id) out.push_back(std::move(fam));
  return out;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (b != 0 && a > UINT64_MAX / b)
    raise(ErrorCode::Overflow, "permutation space exceeds 64-bit range");
  return a * b;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    c = c * (n - k + i) / i;  // prefix product is C(n-k+i, i), integral
    if (c > UINT64_MAX)
      raise(ErrorCode::Overflow, "permutation space exceeds 64-bit range");
  }
  return static_cast<std::uint64_t>(c);
}

// All placements of `k` ones in `m` slots, deterministic order.
std::vector<std::vector<int>> combinations(std::size_t m, std::size_t k) {
  std::vector<int> pattern(m, 0);
  std::fill(pattern.begin(), pattern.begin() + static_cast<long>(k), 1);
  std::sort(pattern.begin(), pattern.end(), std::greater<int>());
  std::vector<std::vector<int>> out;
  do {
    out.push_back(pattern);
  } while (std::prev_permutation(pattern.begin(), pattern.end()));
  return out;
}

int family_treatment(const ClusterStructure& s, const Family& fam) {
  return s.x2[fam.members.front()];
}

}  // namespace

ClusterStructure build_structure(const Dataset& data, Scenario scenario) {
  data.validate();
  ClusterStructure s;
  s.scenario = scenario;
  s.n = data.size();
  s.x2 = dichotomous_x2(data);
  s.families = group_families(data);

  std::size_t exposed = 0;
  for (int v : s.x2) exposed += static_cast<std::size_t>(v);
  if (exposed == 0 || exposed == s.n)
    raise(ErrorCode::InvalidArgument, "treatment must have both levels");

  for (const auto& fam : s.families) {
    if (fam.members.size() > 2)
      raise(ErrorCode::InvalidArgument,
            "family '" + fam.id + "' has more than two members");
    if (scenario == Scenario::Independent && fam.members.size() != 1)
      raise(ErrorCode::InvalidArgument,
            "independent scenario requires singleton families");
    if (fam.members.size() == 2) {
      const int a = s.x2[fam.members[0]];
      const int b = s.x2[fam.members[1]];
      if (scenario == Scenario::Homogeneous && a != b)
        raise(ErrorCode::InvalidArgument,
              "family '" + fam.id + "' mixes treatment levels");
      if (scenario == Scenario::Heterogeneous && a == b)
        raise(ErrorCode::InvalidArgument,
              "family '" + fam.id + "' lacks one exposed and one control");
    }
  }
  return s;
}

Scenario infer_scenario(const Dataset& data) {
  data.validate();
  const std::vector<int> x2 = dichotomous_x2(data);
  const std::vector<Family> families = group_families(data);
  bool any_pair = false;
  for (const auto& fam : families) {
    if (fam.members.size() < 2) continue;
    any_pair = true;
    if (x2[fam.members[0]] != x2[fam.members[1]])
      return Scenario::Heterogeneous;
  }
  return any_pair ? Scenario::Homogeneous : Scenario::Independent;
}

std::uint64_t permutation_space_size(const ClusterStructure& s) {
  switch (s.scenario) {
    case Scenario::Independent: {
      std::uint64_t exposed = 0;
      for (int v : s.x2) exposed += static_cast<std::uint64_t>(v);
      return binomial(s.n, exposed);
    }
    case Scenario::Homogeneous: {
      std::uint64_t total = 1;
      for (std::size_t size : {std::size_t{1}, std::size_t{2}}) {
        std::uint64_t m = 0, exposed = 0;
        for (const auto& fam : s.families) {
          if (fam.members.size() != size) continue;
          ++m;
          exposed += static_cast<std::uint64_t>(family_treatment(s, fam));
        }
        if (m > 0) total = checked_mul(total, binomial(m, exposed));
      }
      return total;
    }
    case Scenario::Heterogeneous: {
      std::uint64_t singles = 0, exposed_singles = 0, pairs = 0;
      for (const auto& fam : s.families) {
        if (fam.members.size() == 1) {
          ++singles;
          exposed_singles +=
              static_cast<std::uint64_t>(family_treatment(s, fam));
        } else {
          ++pairs;
        }
      }
      if (pairs >= 64)
        raise(ErrorCode::Overflow, "permutation space exceeds 64-bit range");
      std::uint64_t total =
          (singles > 0) ? binomial(singles, exposed_singles) : 1;
      return checked_mul(total, std::uint64_t{1} << pairs);
    }
  }
  raise(ErrorCode::InvalidArgument, "unknown scenario");
}

std::vector<int> sample_assignment(const ClusterStructure& s, RngStream& rng) {
  std::vector<int> out = s.x2;
  switch (s.scenario) {
    case Scenario::Independent:
      rng.shuffle(out);
      break;
    case Scenario::Homogeneous: {
      // Families permute as units within strata of equal size.
      for (std::size_t size : {std::size_t{1}, std::size_t{2}}) {
        std::vector<const Family*> stratum;
        std::vector<int> labels;
        for (const auto& fam : s.families) {
          if (fam.members.size() != size) continue;
          stratum.push_back(&fam);
          labels.push_back(family_treatment(s, fam));
        }
        rng.shuffle(labels);
        for (std::size_t f = 0; f < stratum.size(); ++f)
          for (std::size_t m : stratum[f]->members) out[m] = labels[f];
      }
      break;
    }
    case Scenario::Heterogeneous: {
      std::vector<std::size_t> single_rows;
      std::vector<int> labels;
      for (const auto& fam : s.families) {
        if (fam.members.size() != 1) continue;
        single_rows.push_back(fam.members.front());
        labels.push_back(s.x2[fam.members.front()]);
      }
      rng.shuffle(labels);
      for (std::size_t f = 0; f < single_rows.size(); ++f)
        out[single_rows[f]] = labels[f];
      // Each pair keeps or swaps its {exposed, control} labels, p = 1/2.
      for (const auto& fam : s.families) {
        if (fam.members.size() != 2) continue;
        if (rng.bernoulli_half())
          std::swap(out[fam.members[0]], out[fam.members[1]]);
      }
      break;
    }
  }
  return out;
}

std::vector<std::vector<int>> enumerate_assignments(const ClusterStructure& s,
                                                    std::uint64_t cap) {
  const std::uint64_t size = permutation_space_size(s);
  if (size > cap)
    raise(ErrorCode::SpaceTooLarge,
          "assignment space (" + std::to_string(size) + ") exceeds cap");

  std::vector<std::vector<int>> out;
  out.reserve(size);

  switch (s.scenario) {
    case Scenario::Independent: {
      std::uint64_t exposed = 0;
      for (int v : s.x2) exposed += static_cast<std::uint64_t>(v);
      out = combinations(s.n, exposed);
      break;
    }
    case Scenario::Homogeneous: {
      std::vector<const Family*> singles, pairs;
      for (const auto& fam : s.families)
        (fam.members.size() == 1 ? singles : pairs).push_back(&fam);
      std::uint64_t exposed_singles = 0, exposed_pairs = 0;
      for (const auto* fam : singles)
        exposed_singles += static_cast<std::uint64_t>(family_treatment(s, *fam));
      for (const auto* fam : pairs)
        exposed_pairs += static_cast<std::uint64_t>(family_treatment(s, *fam));
      const auto scombos = combinations(singles.size(), exposed_singles);
      const auto pcombos = combinations(pairs.size(), exposed_pairs);
      for (const auto& sc : scombos) {
        for (const auto& pc : pcombos) {
          std::vector<int> a(s.n, 0);
          for (std::size_t f = 0; f < singles.size(); ++f)
            a[singles[f]->members.front()] = sc[f];
          for (std::size_t f = 0; f < pairs.size(); ++f)
            for (std::size_t m : pairs[f]->members) a[m] = pc[f];
          out.push_back(std::move(a));
        }
      }
      break;
    }
    case Scenario::Heterogeneous: {
      std::vector<const Family*> singles, pairs;
      for (const auto& fam : s.families)
        (fam.members.size() == 1 ? singles : pairs).push_back(&fam);
      std::uint64_t exposed_singles = 0;
      for (const auto* fam : singles)
        exposed_singles += static_cast<std::uint64_t>(family_treatment(s, *fam));
      const auto scombos = combinations(singles.size(), exposed_singles);
      const std::uint64_t masks = std::uint64_t{1} << pairs.size();
      for (const auto& sc : scombos) {
        for (std::uint64_t mask = 0; mask < masks; ++mask) {
          std::vector<int> a = s.x2;
          for (std::size_t f = 0; f < singles.size(); ++f)
            a[singles[f]->members.front()] = sc[f];
          for (std::size_t f = 0; f < pairs.size(); ++f)
            if (mask & (std::uint64_t{1} << f))
              std::swap(a[pairs[f]->members[0]], a[pairs[f]->members[1]]);
          out.push_back(std::move(a));
        }
      }
      break;
    }
  }
  return out;
}

NullDistribution cluster_null_distribution(const Dataset& data,
                                           const ClusterStructure& structure,
                                           std::uint64_t B, std::uint64_t seed,
                                           const SamplingOptions& opts) {
  data.validate();
  if (B < 1) raise(ErrorCode::InvalidArgument, "B must be >= 1");
  if (structure.n != data.size())
    raise(ErrorCode::DimensionMismatch, "structure size differs from data");

  NullDistribution nd;
  nd.scheme = Scheme::PermuteX2;
  nd.seed = seed;
  nd.t_obs = t_statistic(fit_full(data), kTreatmentIndex);
  nd.center = 0.0;

  const auto t_for = [&](const std::vector<int>& assignment) {
    std::vector<double> x2star(assignment.begin(), assignment.end());
    const FitResult fit = fit_ols(data.y, {&data.x1, &x2star});
    return t_statistic(fit, kTreatmentIndex);
  };

  if (!opts.force_sampling) {
    std::uint64_t size = 0;
    try {
      size = permutation_space_size(structure);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Overflow) throw;
      size = 0;  // unbounded: sample
    }
    if (size > 0 && size <= opts.enumeration_cap) {
      for (const auto& a : enumerate_assignments(structure, size))
        nd.t_stars.push_back(t_for(a));
      nd.b = nd.t_stars.size();
      nd.exhaustive = true;
      return nd;
    }
  }

  nd.t_stars.resize(B);
  for (std::uint64_t i = 0; i < B; ++i) {
    bool done = false;
    for (std::uint32_t attempt = 0; attempt <= opts.retry_cap; ++attempt) {
      RngStream rng = (attempt == 0)
                          ? RngStream::keyed(seed, {i})
                          : RngStream::keyed(seed, {i, 1000 + attempt});
      const std::vector<int> a = sample_assignment(structure, rng);
      try {
        nd.t_stars[i] = t_for(a);
        done = true;
        break;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::RankDeficient &&
            e.code() != ErrorCode::ZeroStandardError)
          throw;
      }
    }
    if (!done)
      raise(ErrorCode::DegenerateScheme,
            "cluster draw " + std::to_string(i) + " failed after retries");
  }
  nd.b = B;
  return nd;
}

}  // namespace permlm
