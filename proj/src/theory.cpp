#include "theory.hpp"

#include <cmath>
#include <tuple>

#include "error.hpp"
#include "ols.hpp"
#include "rng.hpp"
#include "schemes.hpp"

namespace permlm {

double rho_ystar_x2(const RhoInputs& in) {
  if (!(in.varX1 > 0.0 && in.varX2 > 0.0 && in.varY > 0.0))
    raise(ErrorCode::InvalidArgument, "variances must be positive");
  if (std::fabs(in.rhoX1X2) > 1.0)
    raise(ErrorCode::InvalidArgument, "|rho(X1,X2)| must be <= 1");
  const double cov12 = in.rhoX1X2 * std::sqrt(in.varX1 * in.varX2);
  const double radicand =
      2.0 * in.b1 * ((in.b1 - in.beta12) * in.varX1 - in.beta21 * cov12) +
      in.varY;
  if (!(radicand > 0.0))
    raise(ErrorCode::InvalidRegime,
          "nonpositive variance approximation for Y*");
  return in.b1 * in.rhoX1X2 * std::sqrt(in.varX1) / std::sqrt(radicand);
}

double monte_carlo_rho(const Dataset& data, std::uint64_t B,
                       std::uint64_t seed) {
  data.validate();
  if (B < 1) raise(ErrorCode::InvalidArgument, "B must be >= 1");
  const FitResult reduced = fit_reduced(data);
  const std::size_t n = data.size();
  std::vector<double> ystar(n);
  double sum = 0.0;
  for (std::uint64_t i = 0; i < B; ++i) {
    RngStream rng = RngStream::keyed(seed, {i});
    const std::vector<std::size_t> perm = rng.permutation(n);
    for (std::size_t k = 0; k < n; ++k)
      ystar[k] = reduced.fitted[k] + reduced.residuals[perm[k]];
    sum += pearson(ystar, data.x2);
  }
  return sum / static_cast<double>(B);
}

MomentCheck terbraak_moment_check(const Dataset& data, std::uint64_t B,
                                  std::uint64_t seed) {
  data.validate();
  if (B < 2) raise(ErrorCode::InvalidArgument, "B must be >= 2");
  const FitResult full = fit_full(data);
  const std::size_t n = data.size();

  std::vector<double> perm_draws(B), boot_draws(B);
  std::vector<double> ystar(n);
  for (std::uint64_t i = 0; i < B; ++i) {
    {
      RngStream rng = RngStream::keyed(seed, {i, 0});
      const std::vector<std::size_t> perm = rng.permutation(n);
      for (std::size_t k = 0; k < n; ++k)
        ystar[k] = full.fitted[k] + full.residuals[perm[k]];
      perm_draws[i] =
          fit_ols(ystar, {&data.x1, &data.x2}).coefficients[kTreatmentIndex];
    }
    {
      RngStream rng = RngStream::keyed(seed, {i, 1});
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t j = static_cast<std::size_t>(rng.below(n));
        ystar[k] = full.fitted[k] + full.residuals[j];
      }
      boot_draws[i] =
          fit_ols(ystar, {&data.x1, &data.x2}).coefficients[kTreatmentIndex];
    }
  }

  const auto mean_var = [B](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(B);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::pair<double, double>{m, s / static_cast<double>(B - 1)};
  };

  MomentCheck out;
  out.n = n;
  out.b21 = full.coefficients[kTreatmentIndex];
  std::tie(out.mean_perm, out.var_perm) = mean_var(perm_draws);
  std::tie(out.mean_boot, out.var_boot) = mean_var(boot_draws);
  return out;
}

}  // namespace permlm
