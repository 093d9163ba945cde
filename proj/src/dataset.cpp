#include "dataset.hpp"

#include <cmath>

#include "error.hpp"

namespace permlm {

namespace {

bool non_constant(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] != v[0]) return true;
  return false;
}

bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace

void Dataset::validate() const {
  const std::size_t n = y.size();
  if (x1.size() != n || x2.size() != n)
    raise(ErrorCode::DimensionMismatch,
          "y, x1, x2 must have equal length");
  if (family_id && family_id->size() != n)
    raise(ErrorCode::DimensionMismatch,
          "family_id length differs from y");
  if (n < 4)
    raise(ErrorCode::InvalidArgument,
          "need n >= 4 observations (full-model df = n - 3)");
  if (!all_finite(y) || !all_finite(x1) || !all_finite(x2))
    raise(ErrorCode::InvalidArgument, "non-finite value in dataset");
  if (!non_constant(x1))
    raise(ErrorCode::InvalidArgument, "x1 is constant");
  if (!non_constant(x2))
    raise(ErrorCode::InvalidArgument, "x2 is constant");
  if (family_id) {
    for (const auto& f : *family_id)
      if (f.empty())
        raise(ErrorCode::InvalidArgument, "empty family label");
  }
}

}  // namespace permlm
