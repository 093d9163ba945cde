#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "error.hpp"
#include "ols.hpp"
#include "rng.hpp"
#include "schemes.hpp"
#include "theory.hpp"

namespace permlm {

Dataset correlated_dataset(std::size_t n, double rho, double beta12,
                           double beta21, std::uint64_t seed) {
  RngStream rng = RngStream::keyed(seed, {0});
  Dataset d;
  d.y.resize(n);
  d.x1.resize(n);
  d.x2.resize(n);
  const double s = std::sqrt(1.0 - rho * rho);
  for (std::size_t i = 0; i < n; ++i) {
    const double z1 = rng.normal();
    const double z2 = rng.normal();
    d.x1[i] = z1;
    d.x2[i] = rho * z1 + s * z2;
    d.y[i] = beta12 * d.x1[i] + beta21 * d.x2[i] + rng.normal();
  }
  return d;
}

double sample_variance(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na -
                              static_cast<double>(j) / nb));
  }
  return d;
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

std::vector<CheckResult> run_verification(const VerifyOptions& opt) {
  std::vector<CheckResult> out;

  // Reduced-residual permutation: closed-form rho(Y*, x2) against the
  // Monte Carlo estimate, over a grid of design correlations.
  const double beta12 = 1.0;
  const double beta21 = 0.0;
  for (double rho : {0.0, 0.3, -0.3, 0.8, -0.8}) {
    CheckResult c;
    c.name = "rho_formula rho=" + fmt(rho);
    c.threshold = opt.tolerance_rho;
    try {
      const Dataset d = correlated_dataset(
          opt.rho_n, rho, beta12, beta21,
          stream_key(opt.seed, {static_cast<std::uint64_t>(
                          std::llround((rho + 2.0) * 1000.0))}));
      RhoInputs in;
      in.b1 = fit_reduced(d).coefficients[1];
      in.beta12 = beta12;
      in.beta21 = beta21;
      in.varX1 = sample_variance(d.x1);
      in.varX2 = sample_variance(d.x2);
      in.varY = sample_variance(d.y);
      in.rhoX1X2 = rho;
      const double formula = rho_ystar_x2(in);
      const double mc =
          monte_carlo_rho(d, opt.rho_draws, stream_key(opt.seed, {7}));
      c.value = std::fabs(formula - mc);
      c.passed = c.value <= c.threshold;
      if (rho == 0.0 && formula != 0.0) c.passed = false;
      c.detail = "formula=" + fmt(formula) + " monte_carlo=" + fmt(mc);
    } catch (const Error& e) {
      c.detail = e.what();
    }
    out.push_back(std::move(c));
  }

  // Full-residual permutation vs residual bootstrap moments.
  {
    const Dataset d = correlated_dataset(opt.moment_n, 0.4, 1.0, 0.5,
                                         stream_key(opt.seed, {11}));
    const MomentCheck mc =
        terbraak_moment_check(d, opt.moment_draws, stream_key(opt.seed, {12}));
    const double se_perm =
        std::sqrt(mc.var_perm / static_cast<double>(opt.moment_draws));
    const double se_boot =
        std::sqrt(mc.var_boot / static_cast<double>(opt.moment_draws));

    CheckResult means;
    means.name = "terbraak_means";
    means.threshold = 4.0;
    const double dev_perm = std::fabs(mc.mean_perm - mc.b21) / se_perm;
    const double dev_boot = std::fabs(mc.mean_boot - mc.b21) / se_boot;
    means.value = std::max(dev_perm, dev_boot);
    means.passed = means.value <= means.threshold;
    means.detail = "b21=" + fmt(mc.b21) + " mean_perm=" + fmt(mc.mean_perm) +
                   " mean_boot=" + fmt(mc.mean_boot);
    out.push_back(std::move(means));

    CheckResult ratio;
    ratio.name = "terbraak_variance_ratio";
    ratio.threshold = opt.tolerance_var;
    const double expected = 1.0 - 1.0 / static_cast<double>(opt.moment_n);
    ratio.value = std::fabs(mc.var_boot / mc.var_perm - expected);
    ratio.passed = ratio.value <= ratio.threshold;
    ratio.detail = "ratio=" + fmt(mc.var_boot / mc.var_perm) +
                   " expected=" + fmt(expected);
    out.push_back(std::move(ratio));
  }

  // Full-residual t* distribution against the true sampling distribution
  // of (b21 - beta21)/SE across regenerated datasets.
  {
    const double beta21_true = 0.5;
    const Dataset base = correlated_dataset(opt.ks_n, 0.4, 1.0, beta21_true,
                                            stream_key(opt.seed, {21}));
    const NullDistribution nd = null_distribution(
        Scheme::FullResiduals, base, opt.ks_draws, stream_key(opt.seed, {22}),
        SamplingOptions{.force_sampling = true});
    std::vector<double> sampling;
    sampling.reserve(opt.ks_draws);
    for (std::uint64_t i = 0; i < opt.ks_draws; ++i) {
      const Dataset d = correlated_dataset(opt.ks_n, 0.4, 1.0, beta21_true,
                                           stream_key(opt.seed, {23, i}));
      const FitResult fit = fit_full(d);
      sampling.push_back(
          t_statistic(fit, kTreatmentIndex, beta21_true));
    }
    CheckResult ks;
    ks.name = "full_residual_cdf_ks";
    ks.threshold = opt.ks_threshold;
    ks.value = ks_two_sample(nd.t_stars, sampling);
    ks.passed = ks.value <= ks.threshold;
    ks.detail = "ks_distance=" + fmt(ks.value);
    out.push_back(std::move(ks));
  }

  return out;
}

nlohmann::ordered_json verification_to_json(
    const std::vector<CheckResult>& checks) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  bool all = true;
  for (const auto& c : checks) {
    all = all && c.passed;
    arr.push_back({{"name", c.name},
                   {"passed", c.passed},
                   {"value", c.value},
                   {"threshold", c.threshold},
                   {"detail", c.detail}});
  }
  return {{"checks", arr}, {"all_passed", all}};
}

}  // namespace permlm
