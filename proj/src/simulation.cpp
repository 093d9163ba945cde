#include "simulation.hpp"

#include <cmath>
#include <cstdio>

#include "error.hpp"
#include "inference.hpp"
#include "ols.hpp"
#include "rng.hpp"

namespace permlm {

const char* sim_method_name(SimMethod m) {
  switch (m) {
    case SimMethod::OlsT: return "lm";
    case SimMethod::NaivePermutation: return "naive permutation";
    case SimMethod::CorrectPermutation: return "correct permutation";
  }
  return "?";
}

void SimConfig::validate() const {
  if (sims < 1 || (method != SimMethod::OlsT && permutations < 1))
    raise(ErrorCode::InvalidArgument, "sims and permutations must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0))
    raise(ErrorCode::InvalidArgument, "alpha must be in (0,1)");
  if (!(singleton_fraction >= 0.0 && singleton_fraction <= 1.0))
    raise(ErrorCode::InvalidArgument, "singleton_fraction must be in [0,1]");
  if (sigma_u < 0.0 || sigma_e <= 0.0)
    raise(ErrorCode::InvalidArgument, "need sigma_u >= 0 and sigma_e > 0");
  const std::size_t per_arm = n_is_total ? n_per_group / 2 : n_per_group;
  if (per_arm < 2)
    raise(ErrorCode::InvalidArgument, "need at least 2 subjects per arm");
  if (n_is_total && n_per_group % 2 != 0)
    raise(ErrorCode::InvalidArgument, "total n must be even");
}

std::string SimConfig::display_label() const {
  if (!label.empty()) return label;
  return std::string(sim_method_name(method)) + " " + scenario_name(scenario);
}

namespace {

std::string family_label(std::size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "f%05zu", index);
  return buf;
}

struct Layout {
  std::vector<int> x2;
  std::vector<std::size_t> family_of;  // family index per row
  std::size_t n_families = 0;
};

Layout build_layout(const SimConfig& cfg) {
  const std::size_t per_arm = cfg.n_is_total ? cfg.n_per_group / 2
                                             : cfg.n_per_group;
  const std::size_t singles =
      static_cast<std::size_t>(std::llround(cfg.singleton_fraction *
                                            static_cast<double>(per_arm)));
  const std::size_t paired = per_arm - singles;

  Layout l;
  std::size_t fam = 0;
  const auto add = [&](int treat, std::size_t family) {
    l.x2.push_back(treat);
    l.family_of.push_back(family);
  };

  switch (cfg.scenario) {
    case Scenario::Independent:
      for (std::size_t i = 0; i < 2 * per_arm; ++i)
        add(i < per_arm ? 1 : 0, fam++);
      break;
    case Scenario::Homogeneous: {
      if (paired % 2 != 0)
        raise(ErrorCode::InvalidArgument,
              "homogeneous layout needs an even number of paired subjects "
              "per arm");
      for (int treat : {1, 0}) {
        for (std::size_t i = 0; i < singles; ++i) add(treat, fam++);
        for (std::size_t p = 0; p < paired / 2; ++p) {
          add(treat, fam);
          add(treat, fam);
          ++fam;
        }
      }
      break;
    }
    case Scenario::Heterogeneous: {
      for (int treat : {1, 0})
        for (std::size_t i = 0; i < singles; ++i) add(treat, fam++);
      // Pairs span the arms: one exposed, one control per family.
      for (std::size_t p = 0; p < paired; ++p) {
        add(1, fam);
        add(0, fam);
        ++fam;
      }
      break;
    }
  }
  l.n_families = fam;
  return l;
}

double draw_error(const SimConfig& cfg, RngStream& rng) {
  const double z = rng.normal();
  if (cfg.error_skew <= 0.0) return cfg.sigma_e * z;
  // Shifted, scaled lognormal: mean 0, sd sigma_e, right-skewed.
  const double s2 = cfg.error_skew * cfg.error_skew;
  const double mean = std::exp(0.5 * s2);
  const double sd = std::sqrt((std::exp(s2) - 1.0) * std::exp(s2));
  return cfg.sigma_e * (std::exp(cfg.error_skew * z) - mean) / sd;
}

}  // namespace

Dataset generate_dataset(const SimConfig& cfg, std::uint64_t sim_index) {
  cfg.validate();
  const Layout layout = build_layout(cfg);
  const std::size_t n = layout.x2.size();

  RngStream x1_rng = RngStream::keyed(cfg.seed, {sim_index, 0});
  RngStream u_rng = RngStream::keyed(cfg.seed, {sim_index, 1});
  RngStream e_rng = RngStream::keyed(cfg.seed, {sim_index, 2});

  std::vector<double> u(layout.n_families);
  for (double& v : u) v = cfg.sigma_u * u_rng.normal();

  Dataset d;
  d.y.resize(n);
  d.x1.resize(n);
  d.x2.resize(n);
  std::vector<std::string> fam(n);
  for (std::size_t i = 0; i < n; ++i) {
    d.x1[i] = x1_rng.normal();
    d.x2[i] = static_cast<double>(layout.x2[i]);
    fam[i] = family_label(layout.family_of[i]);
    d.y[i] = cfg.beta0 + cfg.beta1 * d.x1[i] + cfg.beta2 * d.x2[i] +
             u[layout.family_of[i]] + draw_error(cfg, e_rng);
  }
  d.family_id = std::move(fam);
  return d;
}

SimResult run_scenario(const SimConfig& cfg) {
  cfg.validate();
  std::uint64_t rejections = 0;
  for (std::uint64_t s = 0; s < cfg.sims; ++s) {
    Dataset data;
    double p = 1.0;
    try {
      data = generate_dataset(cfg, s);
      switch (cfg.method) {
        case SimMethod::OlsT:
          p = ols_p_value(fit_full(data), kTreatmentIndex);
          break;
        case SimMethod::NaivePermutation: {
          const NullDistribution nd =
              null_distribution(Scheme::PermuteX2, data, cfg.permutations,
                                stream_key(cfg.seed, {s, 10}));
          p = permutation_p_value(nd.t_obs, nd);
          break;
        }
        case SimMethod::CorrectPermutation: {
          const ClusterStructure st = build_structure(data, cfg.scenario);
          const NullDistribution nd =
              cluster_null_distribution(data, st, cfg.permutations,
                                        stream_key(cfg.seed, {s, 10}));
          p = permutation_p_value(nd.t_obs, nd);
          break;
        }
      }
    } catch (const Error& e) {
      raise(e.code(),
            "simulation " + std::to_string(s) + ": " + e.what());
    }
    if (p <= cfg.alpha) ++rejections;
  }

  SimResult r;
  r.label = cfg.display_label();
  r.rejections = rejections;
  r.sims = cfg.sims;
  r.rejection_rate =
      static_cast<double>(rejections) / static_cast<double>(cfg.sims);
  r.ci = proportion_ci(rejections, cfg.sims, 0.95);
  if (r.ci.first > cfg.alpha)
    r.classification = "anticonservative";
  else if (r.ci.second < cfg.alpha)
    r.classification = "conservative";
  else
    r.classification = "matches desired alpha level";
  return r;
}

std::vector<SimResult> compare_methods(const std::vector<SimConfig>& configs) {
  std::vector<SimResult> out;
  out.reserve(configs.size());
  for (const auto& cfg : configs) {
    try {
      out.push_back(run_scenario(cfg));
    } catch (const Error& e) {
      SimResult r;
      r.label = cfg.display_label();
      r.sims = cfg.sims;
      r.error = e.what();
      out.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace permlm
