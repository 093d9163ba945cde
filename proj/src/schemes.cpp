#include "schemes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "error.hpp"
#include "rng.hpp"

namespace permlm {

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::PermuteY: return "manly";
    case Scheme::PermuteX2: return "draper-stoneman";
    case Scheme::ReducedResiduals: return "freedman-lane";
    case Scheme::FullResiduals: return "terbraak";
  }
  return "?";
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  if (b.size() != n || n < 2)
    raise(ErrorCode::DimensionMismatch, "pearson: length mismatch");
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = a[i] - ma, db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

CollinearityDiagnostic collinearity_diagnostic(const Dataset& data) {
  data.validate();
  CollinearityDiagnostic d;
  d.r = pearson(data.x1, data.x2);
  d.warning = std::fabs(d.r) > 0.9;
  return d;
}

namespace {

std::vector<double> compose(const std::vector<double>& v,
                            const Permutation& perm) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[perm[i]];
  return out;
}

// Shared state so a B-draw run factors the base fits only once.
struct SchemeContext {
  const Dataset& data;
  Scheme scheme;
  std::vector<double> base_fitted;     // reduced or full fit, per scheme
  std::vector<double> base_residuals;
  double b21 = 0.0;                    // full-model b_{2.1}, FullResiduals only

  SchemeContext(Scheme s, const Dataset& d) : data(d), scheme(s) {
    if (s == Scheme::ReducedResiduals) {
      FitResult red = fit_reduced(d);
      base_fitted = std::move(red.fitted);
      base_residuals = std::move(red.residuals);
    } else if (s == Scheme::FullResiduals) {
      FitResult full = fit_full(d);
      base_fitted = std::move(full.fitted);
      base_residuals = std::move(full.residuals);
      b21 = full.coefficients[kTreatmentIndex];
    }
  }

  double draw(const Permutation& perm) const {
    switch (scheme) {
      case Scheme::PermuteY: {
        const std::vector<double> ystar = compose(data.y, perm);
        const FitResult fit = fit_ols(ystar, {&data.x1, &data.x2});
        return t_statistic(fit, kTreatmentIndex);
      }
      case Scheme::PermuteX2: {
        const std::vector<double> x2star = compose(data.x2, perm);
        const FitResult fit = fit_ols(data.y, {&data.x1, &x2star});
        return t_statistic(fit, kTreatmentIndex);
      }
      case Scheme::ReducedResiduals:
      case Scheme::FullResiduals: {
        const std::vector<double> rstar = compose(base_residuals, perm);
        std::vector<double> ystar(rstar.size());
        for (std::size_t i = 0; i < ystar.size(); ++i)
          ystar[i] = base_fitted[i] + rstar[i];
        const FitResult fit = fit_ols(ystar, {&data.x1, &data.x2});
        const double null_value =
            (scheme == Scheme::FullResiduals) ? b21 : 0.0;
        return t_statistic(fit, kTreatmentIndex, null_value);
      }
    }
    raise(ErrorCode::InvalidArgument, "unknown scheme");
  }
};

std::uint64_t factorial_capped(std::size_t n, std::uint64_t cap) {
  std::uint64_t f = 1;
  for (std::size_t i = 2; i <= n; ++i) {
    f *= i;
    if (f > cap) return cap + 1;
  }
  return f;
}

}  // namespace

double draw_t_star(Scheme scheme, const Dataset& data,
                   const Permutation& perm) {
  data.validate();
  if (perm.size() != data.size())
    raise(ErrorCode::DimensionMismatch, "permutation length differs from n");
  return SchemeContext(scheme, data).draw(perm);
}

NullDistribution null_distribution(Scheme scheme, const Dataset& data,
                                   std::uint64_t B, std::uint64_t seed,
                                   const SamplingOptions& opts) {
  data.validate();
  if (B < 1) raise(ErrorCode::InvalidArgument, "B must be >= 1");

  NullDistribution nd;
  nd.scheme = scheme;
  nd.seed = seed;

  const FitResult full = fit_full(data);
  nd.t_obs = t_statistic(full, kTreatmentIndex);
  nd.center = (scheme == Scheme::FullResiduals)
                  ? full.coefficients[kTreatmentIndex]
                  : 0.0;

  const SchemeContext ctx(scheme, data);
  const std::size_t n = data.size();

  if (!opts.force_sampling &&
      factorial_capped(n, opts.enumeration_cap) <= opts.enumeration_cap) {
    Permutation perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    do {
      nd.t_stars.push_back(ctx.draw(perm));
    } while (std::next_permutation(perm.begin(), perm.end()));
    nd.b = nd.t_stars.size();
    nd.exhaustive = true;
    return nd;
  }

  nd.t_stars.resize(B);
  for (std::uint64_t i = 0; i < B; ++i) {
    bool done = false;
    for (std::uint32_t attempt = 0; attempt <= opts.retry_cap; ++attempt) {
      RngStream rng = (attempt == 0)
                          ? RngStream::keyed(seed, {i})
                          : RngStream::keyed(seed, {i, 1000 + attempt});
      const Permutation perm = rng.permutation(n);
      try {
        nd.t_stars[i] = ctx.draw(perm);
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
            std::string("draw ") + std::to_string(i) + " for " +
                scheme_name(scheme) + " failed after retries");
  }
  nd.b = B;
  return nd;
}

}  // namespace permlm
