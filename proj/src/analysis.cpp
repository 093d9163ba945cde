#include "analysis.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"
#include "inference.hpp"
#include "ols.hpp"
#include "rng.hpp"

namespace permlm {

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

const std::vector<std::string> kAllMethods = {
    "draper-stoneman", "manly", "freedman-lane", "terbraak", "ols"};

std::vector<std::string> expand_methods(const std::vector<std::string>& in) {
  std::vector<std::string> out;
  for (const auto& m : in) {
    if (m == "all") {
      out.insert(out.end(), kAllMethods.begin(), kAllMethods.end());
      continue;
    }
    if (std::find(kAllMethods.begin(), kAllMethods.end(), m) ==
        kAllMethods.end())
      raise(ErrorCode::InvalidArgument, "unknown method '" + m + "'");
    out.push_back(m);
  }
  if (out.empty())
    raise(ErrorCode::InvalidArgument, "no methods requested");
  return out;
}

nlohmann::ordered_json column_summary(const std::vector<double>& v) {
  double mn = v[0], mx = v[0], sum = 0.0;
  for (double x : v) {
    mn = std::min(mn, x);
    mx = std::max(mx, x);
    sum += x;
  }
  const double mean = sum / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  return {{"mean", mean}, {"sd", sd}, {"min", mn}, {"max", mx}};
}

}  // namespace

std::uint64_t method_seed(std::uint64_t master_seed, const std::string& label) {
  return stream_key(master_seed, {fnv1a(label)});
}

ClusterMode parse_cluster_mode(const std::string& name) {
  if (name == "independent") return ClusterMode::Independent;
  if (name == "homogeneous") return ClusterMode::Homogeneous;
  if (name == "heterogeneous") return ClusterMode::Heterogeneous;
  if (name == "auto") return ClusterMode::Auto;
  raise(ErrorCode::InvalidArgument, "unknown cluster mode '" + name + "'");
}

namespace {

const char* cluster_mode_name(ClusterMode m) {
  switch (m) {
    case ClusterMode::Independent: return "independent";
    case ClusterMode::Homogeneous: return "homogeneous";
    case ClusterMode::Heterogeneous: return "heterogeneous";
    case ClusterMode::Auto: return "auto";
  }
  return "?";
}

}  // namespace

Scenario resolve_cluster_mode(const ParsedDataset& input, ClusterMode mode) {
  switch (mode) {
    case ClusterMode::Independent: return Scenario::Independent;
    case ClusterMode::Homogeneous: return Scenario::Homogeneous;
    case ClusterMode::Heterogeneous: return Scenario::Heterogeneous;
    case ClusterMode::Auto:
      if (!input.data.family_id) return Scenario::Independent;
      return infer_scenario(input.data);
  }
  raise(ErrorCode::InvalidArgument, "unknown cluster mode");
}

Report run_analysis(const ParsedDataset& input, const AnalysisConfig& config) {
  input.data.validate();
  if (config.permutations < 1)
    raise(ErrorCode::InvalidArgument, "permutations must be >= 1");

  const std::vector<std::string> methods = expand_methods(config.methods);
  const Scenario mode = resolve_cluster_mode(input, config.cluster_mode);
  const CollinearityDiagnostic collin = collinearity_diagnostic(input.data);

  Report report;
  report.provenance = {
      {"input", input.input_path},
      {"response", input.columns.response},
      {"covariate", input.columns.covariate},
      {"treatment", input.columns.treatment},
      {"family",
       input.columns.family ? nlohmann::ordered_json(*input.columns.family)
                            : nlohmann::ordered_json(nullptr)},
      {"methods", methods},
      {"permutations", config.permutations},
      {"seed", config.seed},
      {"cluster_mode", cluster_mode_name(config.cluster_mode)},
  };
  report.diagnostics = {
      {"n", input.data.size()},
      {"dropped_rows", input.dropped_rows},
      {"collinearity_r", collin.r},
      {"collinearity_warning", collin.warning},
      {"cluster_mode_resolved", scenario_name(mode)},
      {"columns",
       {{"y", column_summary(input.data.y)},
        {"x1", column_summary(input.data.x1)},
        {"x2", column_summary(input.data.x2)}}},
  };
  if (input.treatment_mapping)
    report.diagnostics["treatment_mapping"] = {
        {input.treatment_mapping->first, 0},
        {input.treatment_mapping->second, 1}};

  for (const std::string& m : methods) {
    TestRow row;
    row.method = m;
    try {
      if (m == "ols") {
        const FitResult fit = fit_full(input.data);
        row.t_obs = t_statistic(fit, kTreatmentIndex);
        row.p_value = ols_p_value(fit, kTreatmentIndex);
      } else {
        row.permutations = config.permutations;
        row.seed = method_seed(config.seed, m);
        NullDistribution nd;
        if (m == "draper-stoneman") {
          if (mode == Scenario::Independent) {
            nd = null_distribution(Scheme::PermuteX2, input.data,
                                   config.permutations, *row.seed);
          } else {
            const ClusterStructure st = build_structure(input.data, mode);
            nd = cluster_null_distribution(input.data, st,
                                           config.permutations, *row.seed);
          }
        } else {
          const Scheme scheme = (m == "manly") ? Scheme::PermuteY
                                : (m == "freedman-lane")
                                    ? Scheme::ReducedResiduals
                                    : Scheme::FullResiduals;
          nd = null_distribution(scheme, input.data, config.permutations,
                                 *row.seed);
          if (mode != Scenario::Independent)
            row.warnings.push_back(
                "permutation ignores the family clustering; the naive "
                "method is not advised with clustered data");
          if (m == "freedman-lane" && collin.warning)
            row.warnings.push_back(
                "x1 and x2 are highly collinear; reduced-residual "
                "permutation may fail to break the x2-y relationship");
        }
        row.t_obs = nd.t_obs;
        row.p_value = permutation_p_value(nd.t_obs, nd);
      }
    } catch (const Error& e) {
      row.error = e.what();
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

nlohmann::ordered_json report_to_json(const Report& report) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : report.rows) {
    nlohmann::ordered_json row;
    row["method"] = r.method;
    if (r.error) {
      row["error"] = *r.error;
    } else {
      row["t_obs"] = r.t_obs;
      row["p_value"] = r.p_value;
    }
    row["B"] = r.permutations;
    if (r.seed) row["seed"] = *r.seed;
    row["warnings"] = r.warnings;
    rows.push_back(std::move(row));
  }
  return {{"provenance", report.provenance},
          {"diagnostics", report.diagnostics},
          {"rows", rows}};
}

std::vector<SimConfig> parse_sim_configs(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    raise(ErrorCode::ParseError, std::string("config parse: ") + e.what());
  }
  if (!doc.is_array())
    raise(ErrorCode::ParseError, "config must be a JSON array of rows");

  std::vector<SimConfig> out;
  std::size_t index = 0;
  for (const auto& row : doc) {
    SimConfig cfg;
    try {
      if (!row.is_object()) throw Error(ErrorCode::ParseError, "not an object");
      cfg.label = row.value("label", std::string{});
      const std::string scenario = row.value("scenario", "independent");
      if (scenario == "independent") cfg.scenario = Scenario::Independent;
      else if (scenario == "homogeneous") cfg.scenario = Scenario::Homogeneous;
      else if (scenario == "heterogeneous")
        cfg.scenario = Scenario::Heterogeneous;
      else throw Error(ErrorCode::ParseError, "unknown scenario '" + scenario + "'");
      const std::string method = row.value("method", "lm");
      if (method == "lm" || method == "ols") cfg.method = SimMethod::OlsT;
      else if (method == "naive") cfg.method = SimMethod::NaivePermutation;
      else if (method == "correct") cfg.method = SimMethod::CorrectPermutation;
      else throw Error(ErrorCode::ParseError, "unknown method '" + method + "'");
      cfg.n_per_group = row.value("n_per_group", cfg.n_per_group);
      cfg.n_is_total = row.value("n_is_total", cfg.n_is_total);
      cfg.singleton_fraction =
          row.value("singleton_fraction", cfg.singleton_fraction);
      cfg.sims = row.value("sims", cfg.sims);
      cfg.permutations = row.value("permutations", cfg.permutations);
      cfg.alpha = row.value("alpha", cfg.alpha);
      cfg.beta0 = row.value("beta0", cfg.beta0);
      cfg.beta1 = row.value("beta1", cfg.beta1);
      cfg.beta2 = row.value("beta2", cfg.beta2);
      cfg.sigma_u = row.value("sigma_u", cfg.sigma_u);
      cfg.sigma_e = row.value("sigma_e", cfg.sigma_e);
      cfg.error_skew = row.value("error_skew", cfg.error_skew);
      cfg.seed = row.value("seed", cfg.seed);
      cfg.validate();
    } catch (const Error& e) {
      raise(ErrorCode::ParseError,
            "config row " + std::to_string(index) + ": " + e.what());
    } catch (const nlohmann::json::exception& e) {
      raise(ErrorCode::ParseError,
            "config row " + std::to_string(index) + ": " + e.what());
    }
    out.push_back(std::move(cfg));
    ++index;
  }
  return out;
}

nlohmann::ordered_json sim_results_to_json(const std::vector<SimResult>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json row;
    row["label"] = r.label;
    if (r.error) {
      row["error"] = *r.error;
    } else {
      row["rate"] = r.rejection_rate;
      row["ci_low"] = r.ci.first;
      row["ci_high"] = r.ci.second;
      row["classification"] = r.classification;
      row["rejections"] = r.rejections;
    }
    row["sims"] = r.sims;
    arr.push_back(std::move(row));
  }
  return {{"rows", arr}};
}

}  // namespace permlm
