#include "ols.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace permlm {

namespace {

constexpr double kRankTolerance = 1e-12;

}  // namespace

FitResult fit_ols(const std::vector<double>& y,
                  const std::vector<const std::vector<double>*>& predictors) {
  const std::size_t n = y.size();
  const std::size_t p = predictors.size() + 1;  // intercept column
  for (const auto* col : predictors)
    if (col->size() != n)
      raise(ErrorCode::DimensionMismatch, "predictor length differs from y");
  if (n <= p)
    raise(ErrorCode::InvalidArgument, "need more observations than coefficients");

  // Column-major design matrix [1 | predictors], factored in place.
  std::vector<double> a(n * p);
  for (std::size_t i = 0; i < n; ++i) a[i] = 1.0;
  for (std::size_t j = 1; j < p; ++j) {
    const auto& col = *predictors[j - 1];
    std::copy(col.begin(), col.end(), a.begin() + j * n);
  }

  std::vector<double> qty = y;
  std::vector<double> rdiag(p, 0.0);

  for (std::size_t k = 0; k < p; ++k) {
    double* ck = a.data() + k * n;
    double norm = 0.0;
    for (std::size_t i = k; i < n; ++i) norm += ck[i] * ck[i];
    norm = std::sqrt(norm);
    if (norm == 0.0) {
      rdiag[k] = 0.0;
      continue;
    }
    const double alpha = (ck[k] > 0.0) ? -norm : norm;
    ck[k] -= alpha;  // column k now holds the Householder vector v
    double vtv = 0.0;
    for (std::size_t i = k; i < n; ++i) vtv += ck[i] * ck[i];
    rdiag[k] = alpha;
    for (std::size_t j = k + 1; j < p; ++j) {
      double* cj = a.data() + j * n;
      double dot = 0.0;
      for (std::size_t i = k; i < n; ++i) dot += ck[i] * cj[i];
      const double c = 2.0 * dot / vtv;
      for (std::size_t i = k; i < n; ++i) cj[i] -= c * ck[i];
    }
    double dot = 0.0;
    for (std::size_t i = k; i < n; ++i) dot += ck[i] * qty[i];
    const double c = 2.0 * dot / vtv;
    for (std::size_t i = k; i < n; ++i) qty[i] -= c * ck[i];
  }

  double rmax = 0.0, rmin = 0.0;
  for (std::size_t k = 0; k < p; ++k) {
    const double v = std::fabs(rdiag[k]);
    rmax = std::max(rmax, v);
    rmin = (k == 0) ? v : std::min(rmin, v);
  }
  if (rmax == 0.0 || rmin / rmax < kRankTolerance)
    raise(ErrorCode::RankDeficient, "design matrix is numerically rank-deficient");

  // Back-substitute R b = Q'y. R(k,j) for k < j sits in a(k, j).
  std::vector<double> b(p, 0.0);
  for (std::size_t k = p; k-- > 0;) {
    double s = qty[k];
    for (std::size_t j = k + 1; j < p; ++j) s -= a[j * n + k] * b[j];
    b[k] = s / rdiag[k];
  }

  // Upper-triangular inverse of R, for the diagonal of (X'X)^{-1}.
  std::vector<double> rinv(p * p, 0.0);  // row-major p x p
  for (std::size_t k = p; k-- > 0;) {
    rinv[k * p + k] = 1.0 / rdiag[k];
    for (std::size_t j = k + 1; j < p; ++j) {
      double s = 0.0;
      for (std::size_t m = k + 1; m <= j; ++m)
        s += a[m * n + k] * rinv[m * p + j];  // R(k,m) lives in a(k, m)
      rinv[k * p + j] = -s / rdiag[k];
    }
  }

  FitResult out;
  out.coefficients = b;
  out.fitted.resize(n);
  out.residuals.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double f = b[0];
    for (std::size_t j = 1; j < p; ++j) f += b[j] * (*predictors[j - 1])[i];
    out.fitted[i] = f;
    out.residuals[i] = y[i] - f;
  }
  double rss = 0.0;
  for (double r : out.residuals) rss += r * r;
  out.df = n - p;
  out.sigma2_hat = rss / static_cast<double>(out.df);
  out.standard_errors.resize(p);
  for (std::size_t j = 0; j < p; ++j) {
    double d = 0.0;
    for (std::size_t k = j; k < p; ++k) {
      const double v = rinv[j * p + k];
      d += v * v;
    }
    out.standard_errors[j] = std::sqrt(out.sigma2_hat * d);
  }
  return out;
}

FitResult fit_full(const Dataset& data) {
  data.validate();
  return fit_ols(data.y, {&data.x1, &data.x2});
}

FitResult fit_reduced(const Dataset& data) {
  data.validate();
  return fit_ols(data.y, {&data.x1});
}

double t_statistic(const FitResult& fit, std::size_t index, double null_value) {
  if (index >= fit.coefficients.size())
    raise(ErrorCode::InvalidArgument, "coefficient index out of range");
  const double se = fit.standard_errors[index];
  if (!(se > 0.0))
    raise(ErrorCode::ZeroStandardError,
          "standard error is zero (perfect fit)");
  return (fit.coefficients[index] - null_value) / se;
}

}  // namespace permlm
