#pragma once

#include <optional>
#include <string>
#include <vector>

namespace permlm {

// One analysis unit: response y, covariate x1, treatment x2, and optional
// cluster labels.
struct Dataset {
  std::vector<double> y;
  std::vector<double> x1;
  std::vector<double> x2;
  std::optional<std::vector<std::string>> family_id;

  std::size_t size() const { return y.size(); }

  // Throws DimensionMismatch / InvalidArgument when the invariants fail:
  // equal lengths, n >= 4, x1 and x2 each non-constant, finite entries.
  void validate() const;
};

}  // namespace permlm
