#include "csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "error.hpp"

namespace permlm {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::optional<double> parse_number(const std::string& s) {
  const std::string t = trim(s);
  if (t.empty()) return std::nullopt;
  double value = 0.0;
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

std::size_t column_index(const std::vector<std::string>& header,
                         const std::string& name) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end())
    raise(ErrorCode::MissingColumn, "missing column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

}  // namespace

ParsedDataset parse_dataset(const std::string& path, const ColumnSpec& spec) {
  std::ifstream in(path);
  if (!in)
    raise(ErrorCode::FileNotFound, "cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line))
    raise(ErrorCode::ParseError, "'" + path + "' is empty");
  std::vector<std::string> header = split_csv_line(line);
  for (auto& h : header) h = trim(h);

  const std::size_t yi = column_index(header, spec.response);
  const std::size_t x1i = column_index(header, spec.covariate);
  const std::size_t x2i = column_index(header, spec.treatment);
  std::optional<std::size_t> fi;
  if (spec.family) fi = column_index(header, *spec.family);

  ParsedDataset out;
  out.input_path = path;
  out.columns = spec;
  std::vector<std::string> raw_treatment;
  std::vector<std::string> families;

  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    const auto get = [&](std::size_t i) -> std::string {
      return i < fields.size() ? trim(fields[i]) : std::string{};
    };
    const std::string ys = get(yi), x1s = get(x1i), x2s = get(x2i);
    const std::string fs = fi ? get(*fi) : std::string{};
    if (ys.empty() || x1s.empty() || x2s.empty() || (fi && fs.empty())) {
      ++out.dropped_rows;
      continue;
    }
    const auto y = parse_number(ys);
    if (!y)
      raise(ErrorCode::NonNumeric, "row " + std::to_string(row) +
                                       ", column '" + spec.response +
                                       "': not numeric");
    const auto x1 = parse_number(x1s);
    if (!x1)
      raise(ErrorCode::NonNumeric, "row " + std::to_string(row) +
                                       ", column '" + spec.covariate +
                                       "': not numeric");
    out.data.y.push_back(*y);
    out.data.x1.push_back(*x1);
    raw_treatment.push_back(x2s);
    if (fi) families.push_back(fs);
  }

  if (out.data.y.empty())
    raise(ErrorCode::AllRowsDropped, "no usable rows in '" + path + "'");

  // Treatment: numeric column as-is; otherwise exactly two string labels
  // mapped to 0/1 in first-seen order.
  bool numeric = true;
  for (const auto& s : raw_treatment)
    if (!parse_number(s)) {
      numeric = false;
      break;
    }
  out.data.x2.reserve(raw_treatment.size());
  if (numeric) {
    for (const auto& s : raw_treatment) out.data.x2.push_back(*parse_number(s));
  } else {
    std::vector<std::string> labels;
    for (const auto& s : raw_treatment) {
      auto it = std::find(labels.begin(), labels.end(), s);
      if (it == labels.end()) {
        if (labels.size() == 2)
          raise(ErrorCode::NonNumeric,
                "treatment column '" + spec.treatment +
                    "' has more than two distinct labels");
        labels.push_back(s);
        it = labels.end() - 1;
      }
      out.data.x2.push_back(
          static_cast<double>(it - labels.begin()));
    }
    if (labels.size() < 2)
      raise(ErrorCode::InvalidArgument,
            "treatment column '" + spec.treatment + "' is constant");
    out.treatment_mapping = {labels[0], labels[1]};
  }

  if (fi) out.data.family_id = std::move(families);
  return out;
}

}  // namespace permlm
