// Test-only oracles, deliberately independent of the library's solvers:
// exact-rational normal equations, quadrature for the t CDF, and small
// statistical helpers.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace oracle {

using Rational = boost::multiprecision::cpp_rational;

struct ExactFit {
  std::vector<Rational> coefficients;
  Rational rss;
  std::vector<Rational> xtx_inv_diag;
  long df = 0;

  double standard_error(std::size_t j) const {
    const Rational sigma2 = rss / df;
    return std::sqrt(static_cast<double>(sigma2 * xtx_inv_diag[j]));
  }
  double t_statistic(std::size_t j) const {
    return static_cast<double>(coefficients[j]) / standard_error(j);
  }
};

// Solves the normal equations (X'X) b = X'y exactly, X = [1 | predictors].
inline ExactFit exact_fit(const std::vector<Rational>& y,
                          const std::vector<std::vector<Rational>>& predictors) {
  const std::size_t n = y.size();
  const std::size_t p = predictors.size() + 1;

  std::vector<std::vector<Rational>> x(n, std::vector<Rational>(p));
  for (std::size_t i = 0; i < n; ++i) {
    x[i][0] = 1;
    for (std::size_t j = 1; j < p; ++j) x[i][j] = predictors[j - 1][i];
  }

  // Augmented [X'X | I | X'y], Gauss-Jordan with exact pivots.
  std::vector<std::vector<Rational>> aug(p, std::vector<Rational>(2 * p + 1));
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = 0; b < p; ++b)
      for (std::size_t i = 0; i < n; ++i) aug[a][b] += x[i][a] * x[i][b];
    aug[a][p + a] = 1;
    for (std::size_t i = 0; i < n; ++i) aug[a][2 * p] += x[i][a] * y[i];
  }
  for (std::size_t col = 0; col < p; ++col) {
    std::size_t pivot = col;
    while (pivot < p && aug[pivot][col] == 0) ++pivot;
    if (pivot == p) throw std::runtime_error("oracle: singular normal equations");
    std::swap(aug[col], aug[pivot]);
    const Rational d = aug[col][col];
    for (auto& v : aug[col]) v /= d;
    for (std::size_t r = 0; r < p; ++r) {
      if (r == col || aug[r][col] == 0) continue;
      const Rational f = aug[r][col];
      for (std::size_t c = 0; c < 2 * p + 1; ++c) aug[r][c] -= f * aug[col][c];
    }
  }

  ExactFit fit;
  fit.df = static_cast<long>(n) - static_cast<long>(p);
  fit.coefficients.resize(p);
  fit.xtx_inv_diag.resize(p);
  for (std::size_t j = 0; j < p; ++j) {
    fit.coefficients[j] = aug[j][2 * p];
    fit.xtx_inv_diag[j] = aug[j][p + j];
  }
  for (std::size_t i = 0; i < n; ++i) {
    Rational r = y[i];
    for (std::size_t j = 0; j < p; ++j) r -= fit.coefficients[j] * x[i][j];
    fit.rss += r * r;
  }
  return fit;
}

inline std::vector<Rational> to_rational(const std::vector<double>& v) {
  std::vector<Rational> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    // exact for the integer / simple-decimal inputs used in tests
    out[i] = Rational(static_cast<long long>(std::llround(v[i] * 1024.0)), 1024);
  }
  return out;
}

// Plain-double normal-equations fit (Cramer-free Gauss elimination),
// independent of the library's QR path; good enough for brute-force
// enumeration comparisons.
inline double naive_t_x2(const std::vector<double>& y,
                         const std::vector<double>& x1,
                         const std::vector<double>& x2,
                         double null_value = 0.0) {
  const std::size_t n = y.size();
  double a[3][4] = {};
  const auto col = [&](std::size_t j, std::size_t i) {
    return j == 0 ? 1.0 : (j == 1 ? x1[i] : x2[i]);
  };
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t c = 0; c < 3; ++c) a[r][c] += col(r, i) * col(c, i);
      a[r][3] += col(r, i) * y[i];
    }
  double inv22;  // (X'X)^{-1}[2][2] via adjugate
  {
    const double det =
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
        a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
        a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    inv22 = (a[0][0] * a[1][1] - a[0][1] * a[1][0]) / det;
  }
  // solve 3x3 by elimination
  double m[3][4];
  std::copy(&a[0][0], &a[0][0] + 12, &m[0][0]);
  for (int c = 0; c < 3; ++c) {
    int piv = c;
    for (int r = c + 1; r < 3; ++r)
      if (std::fabs(m[r][c]) > std::fabs(m[piv][c])) piv = r;
    std::swap(m[c], m[piv]);
    for (int r = 0; r < 3; ++r) {
      if (r == c) continue;
      const double f = m[r][c] / m[c][c];
      for (int cc = c; cc < 4; ++cc) m[r][cc] -= f * m[c][cc];
    }
  }
  const double b0 = m[0][3] / m[0][0];
  const double b1 = m[1][3] / m[1][1];
  const double b2 = m[2][3] / m[2][2];
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - b0 - b1 * x1[i] - b2 * x2[i];
    rss += r * r;
  }
  const double sigma2 = rss / static_cast<double>(n - 3);
  return (b2 - null_value) / std::sqrt(sigma2 * inv22);
}

// Adaptive Simpson quadrature of the Student-t density.
namespace detail {

inline double t_density(double x, double nu, double log_norm) {
  return std::exp(log_norm - 0.5 * (nu + 1.0) * std::log1p(x * x / nu));
}

inline double simpson(double fa, double fm, double fb, double a, double b) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive(double a, double b, double fa, double fm, double fb,
                       double whole, double eps, int depth, double nu,
                       double log_norm) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = t_density(lm, nu, log_norm);
  const double frm = t_density(rm, nu, log_norm);
  const double left = simpson(fa, flm, fm, a, m);
  const double right = simpson(fm, frm, fb, m, b);
  if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * eps)
    return left + right + (left + right - whole) / 15.0;
  return adaptive(a, m, fa, flm, fm, left, 0.5 * eps, depth - 1, nu, log_norm) +
         adaptive(m, b, fm, frm, fb, right, 0.5 * eps, depth - 1, nu, log_norm);
}

}  // namespace detail

inline double t_cdf_quadrature(double t, long df, double eps = 1e-12) {
  const double nu = static_cast<double>(df);
  const double log_norm = std::lgamma(0.5 * (nu + 1.0)) -
                          std::lgamma(0.5 * nu) -
                          0.5 * std::log(nu * M_PI);
  const double hi = std::fabs(t);
  if (hi == 0.0) return 0.5;
  const double fa = detail::t_density(0.0, nu, log_norm);
  const double fb = detail::t_density(hi, nu, log_norm);
  const double fm = detail::t_density(0.5 * hi, nu, log_norm);
  const double whole = detail::simpson(fa, fm, fb, 0.0, hi);
  const double integral =
      detail::adaptive(0.0, hi, fa, fm, fb, whole, eps, 48, nu, log_norm);
  return t > 0.0 ? 0.5 + integral : 0.5 - integral;
}

// Wilson-Hilferty approximation to the chi-square quantile; adequate for
// pass/fail thresholds in goodness-of-fit tests.
inline double chi2_quantile(double p, double df, double z_of_p) {
  (void)p;
  const double f = 2.0 / (9.0 * df);
  const double c = 1.0 - f + z_of_p * std::sqrt(f);
  return df * c * c * c;
}

}  // namespace oracle
