#include "permlm.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include <json.hpp>

#include "analysis.hpp"
#include "cluster.hpp"
#include "csv.hpp"
#include "error.hpp"
#include "inference.hpp"
#include "ols.hpp"
#include "verify.hpp"

using permlm::Error;
using permlm::ErrorCode;

struct plm_dataset {
  permlm::ParsedDataset parsed;
};

namespace {

thread_local std::string g_last_error;

plm_status map_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return PLM_ERR_INVALID_ARGUMENT;
    case ErrorCode::DimensionMismatch: return PLM_ERR_DIMENSION_MISMATCH;
    case ErrorCode::RankDeficient: return PLM_ERR_RANK_DEFICIENT;
    case ErrorCode::ZeroStandardError: return PLM_ERR_ZERO_STANDARD_ERROR;
    case ErrorCode::DegenerateScheme: return PLM_ERR_DEGENERATE_SCHEME;
    case ErrorCode::EmptyDistribution: return PLM_ERR_EMPTY_DISTRIBUTION;
    case ErrorCode::Overflow: return PLM_ERR_OVERFLOW;
    case ErrorCode::SpaceTooLarge: return PLM_ERR_SPACE_TOO_LARGE;
    case ErrorCode::InvalidRegime: return PLM_ERR_INVALID_REGIME;
    case ErrorCode::FileNotFound: return PLM_ERR_FILE_NOT_FOUND;
    case ErrorCode::MissingColumn: return PLM_ERR_MISSING_COLUMN;
    case ErrorCode::NonNumeric: return PLM_ERR_NON_NUMERIC;
    case ErrorCode::AllRowsDropped: return PLM_ERR_ALL_ROWS_DROPPED;
    case ErrorCode::ParseError: return PLM_ERR_PARSE;
  }
  return PLM_ERR_INTERNAL;
}

template <typename Fn>
plm_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return PLM_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return PLM_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = new (std::nothrow) char[s.size() + 1];
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(bool ok, const char* msg) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, msg);
}

}  // namespace

extern "C" {

const char* plm_version(void) { return "0.1.0"; }

const char* plm_last_error(void) { return g_last_error.c_str(); }

void plm_string_free(char* s) { delete[] s; }

plm_status plm_dataset_create(const double* y, const double* x1,
                              const double* x2, const char* const* family,
                              size_t n, plm_dataset** out) {
  return guarded([&] {
    require(y && x1 && x2 && out, "null pointer argument");
    auto d = std::make_unique<plm_dataset>();
    d->parsed.data.y.assign(y, y + n);
    d->parsed.data.x1.assign(x1, x1 + n);
    d->parsed.data.x2.assign(x2, x2 + n);
    if (family) {
      std::vector<std::string> fam(n);
      for (size_t i = 0; i < n; ++i) {
        require(family[i] != nullptr, "null family label");
        fam[i] = family[i];
      }
      d->parsed.data.family_id = std::move(fam);
    }
    d->parsed.input_path = "<memory>";
    d->parsed.data.validate();
    *out = d.release();
  });
}

plm_status plm_dataset_from_csv(const char* path, const char* response,
                                const char* covariate, const char* treatment,
                                const char* family_column, plm_dataset** out) {
  return guarded([&] {
    require(path && response && covariate && treatment && out,
            "null pointer argument");
    permlm::ColumnSpec spec;
    spec.response = response;
    spec.covariate = covariate;
    spec.treatment = treatment;
    if (family_column) spec.family = family_column;
    auto d = std::make_unique<plm_dataset>();
    d->parsed = permlm::parse_dataset(path, spec);
    d->parsed.data.validate();
    *out = d.release();
  });
}

void plm_dataset_free(plm_dataset* d) { delete d; }

size_t plm_dataset_rows(const plm_dataset* d) {
  return d ? d->parsed.data.size() : 0;
}

plm_status plm_fit_full(const plm_dataset* d, double* coefficients,
                        double* standard_errors, double* t_x2, double* p_x2) {
  return guarded([&] {
    require(d != nullptr, "null dataset");
    const permlm::FitResult fit = permlm::fit_full(d->parsed.data);
    if (coefficients)
      std::memcpy(coefficients, fit.coefficients.data(), 3 * sizeof(double));
    if (standard_errors)
      std::memcpy(standard_errors, fit.standard_errors.data(),
                  3 * sizeof(double));
    if (t_x2) *t_x2 = permlm::t_statistic(fit, permlm::kTreatmentIndex);
    if (p_x2) *p_x2 = permlm::ols_p_value(fit, permlm::kTreatmentIndex);
  });
}

plm_status plm_t_cdf(double t, long df, double* out) {
  return guarded([&] {
    require(out != nullptr, "null output pointer");
    *out = permlm::t_cdf(t, df);
  });
}

plm_status plm_proportion_ci(uint64_t successes, uint64_t trials, double level,
                             double* low, double* high) {
  return guarded([&] {
    require(low && high, "null output pointer");
    const auto [lo, hi] = permlm::proportion_ci(successes, trials, level);
    *low = lo;
    *high = hi;
  });
}

plm_status plm_permutation_space_size(const plm_dataset* d,
                                      const char* scenario, uint64_t* out) {
  return guarded([&] {
    require(d && scenario && out, "null pointer argument");
    permlm::Scenario sc = permlm::Scenario::Independent;
    const std::string name = scenario;
    if (name == "independent") sc = permlm::Scenario::Independent;
    else if (name == "homogeneous") sc = permlm::Scenario::Homogeneous;
    else if (name == "heterogeneous") sc = permlm::Scenario::Heterogeneous;
    else throw Error(ErrorCode::InvalidArgument,
                     "unknown scenario '" + name + "'");
    const permlm::ClusterStructure st =
        permlm::build_structure(d->parsed.data, sc);
    *out = permlm::permutation_space_size(st);
  });
}

plm_status plm_analyze(const plm_dataset* d, const char* config_json,
                       char** report_json) {
  return guarded([&] {
    require(d && report_json, "null pointer argument");
    permlm::AnalysisConfig cfg;
    if (config_json && *config_json) {
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(config_json);
      } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::ParseError,
                    std::string("config parse: ") + e.what());
      }
      if (doc.contains("methods"))
        cfg.methods = doc["methods"].get<std::vector<std::string>>();
      cfg.permutations = doc.value("permutations", cfg.permutations);
      cfg.seed = doc.value("seed", cfg.seed);
      if (doc.contains("cluster_mode"))
        cfg.cluster_mode =
            permlm::parse_cluster_mode(doc["cluster_mode"].get<std::string>());
    }
    const permlm::Report report = permlm::run_analysis(d->parsed, cfg);
    *report_json = dup_string(permlm::report_to_json(report).dump(2));
  });
}

plm_status plm_simulate(const char* configs_json, char** report_json) {
  return guarded([&] {
    require(configs_json && report_json, "null pointer argument");
    const auto configs = permlm::parse_sim_configs(configs_json);
    const auto results = permlm::compare_methods(configs);
    *report_json = dup_string(permlm::sim_results_to_json(results).dump(2));
  });
}

plm_status plm_verify(const char* options_json, char** report_json) {
  return guarded([&] {
    require(report_json != nullptr, "null pointer argument");
    permlm::VerifyOptions opt;
    if (options_json && *options_json) {
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(options_json);
      } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::ParseError,
                    std::string("options parse: ") + e.what());
      }
      opt.seed = doc.value("seed", opt.seed);
      opt.tolerance_rho = doc.value("tolerance_rho", opt.tolerance_rho);
      opt.tolerance_var = doc.value("tolerance_var", opt.tolerance_var);
      opt.rho_n = doc.value("rho_n", opt.rho_n);
      opt.rho_draws = doc.value("rho_draws", opt.rho_draws);
      opt.moment_draws = doc.value("moment_draws", opt.moment_draws);
      opt.ks_draws = doc.value("ks_draws", opt.ks_draws);
    }
    const auto checks = permlm::run_verification(opt);
    *report_json = dup_string(permlm::verification_to_json(checks).dump(2));
  });
}

}  // extern "C"
