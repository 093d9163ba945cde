#pragma once

#include <optional>
#include <string>
#include <utility>

#include "dataset.hpp"

namespace permlm {

struct ColumnSpec {
  std::string response;
  std::string covariate;
  std::string treatment;
  std::optional<std::string> family;
};

struct ParsedDataset {
  Dataset data;
  std::size_t dropped_rows = 0;
  // Set when the treatment column held string labels: (label0, label1)
  // mapped to 0/1 in first-seen order.
  std::optional<std::pair<std::string, std::string>> treatment_mapping;
  std::string input_path;
  ColumnSpec columns;
};

// Comma-separated, first row headers, UTF-8, '.' decimal point. Rows with
// a missing value in a named column are dropped and counted. Throws
// FileNotFound, MissingColumn, NonNumeric, AllRowsDropped.
ParsedDataset parse_dataset(const std::string& path, const ColumnSpec& spec);

}  // namespace permlm
