// Command-line front end for the permlm shared library. All statistics
// come through the C API; this file only parses flags and renders output.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "permlm.h"

namespace {

using nlohmann::json;

struct OwnedString {
  char* ptr = nullptr;
  ~OwnedString() { plm_string_free(ptr); }
  std::string str() const { return ptr ? ptr : ""; }
};

int fail(plm_status status) {
  std::cerr << "error: " << plm_last_error() << " (status " << status << ")\n";
  return 1;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

void print_table(const std::vector<std::vector<std::string>>& rows) {
  if (rows.empty()) return;
  std::vector<std::size_t> width(rows[0].size(), 0);
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size(); ++c)
      width[c] = std::max(width[c], row[c].size());
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c)
      std::cout << row[c] << std::string(width[c] - row[c].size() + 2, ' ');
    std::cout << '\n';
  }
}

void render_analysis_text(const json& report) {
  const auto& diag = report.at("diagnostics");
  std::cout << "n = " << diag.at("n").get<std::size_t>()
            << "  (dropped rows: " << diag.at("dropped_rows").get<std::size_t>()
            << ")\n";
  std::cout << "r(x1, x2) = " << fixed(diag.at("collinearity_r").get<double>(), 3);
  if (diag.at("collinearity_warning").get<bool>())
    std::cout << "  [warning: highly collinear]";
  std::cout << "\ncluster mode: "
            << diag.at("cluster_mode_resolved").get<std::string>() << "\n";
  if (diag.contains("treatment_mapping")) {
    std::cout << "treatment mapping:";
    for (const auto& [label, value] : diag.at("treatment_mapping").items())
      std::cout << "  " << label << " -> " << value.get<int>();
    std::cout << "\n";
  }
  std::cout << "\n";

  std::vector<std::vector<std::string>> table;
  table.push_back({"method", "p-value", "t_obs", "notes"});
  for (const auto& row : report.at("rows")) {
    std::vector<std::string> line;
    line.push_back(row.at("method").get<std::string>());
    if (row.contains("error")) {
      line.push_back("-");
      line.push_back("-");
      line.push_back("error: " + row.at("error").get<std::string>());
    } else {
      line.push_back(fixed(row.at("p_value").get<double>(), 2));
      line.push_back(fixed(row.at("t_obs").get<double>(), 3));
      std::string notes;
      for (const auto& w : row.at("warnings"))
        notes += (notes.empty() ? "" : "; ") + w.get<std::string>();
      line.push_back(notes);
    }
    table.push_back(std::move(line));
  }
  print_table(table);
}

void render_simulation_text(const json& report) {
  std::vector<std::vector<std::string>> table;
  table.push_back({"model/scenario", "type I error (95% CI)", "result"});
  for (const auto& row : report.at("rows")) {
    std::vector<std::string> line;
    line.push_back(row.at("label").get<std::string>());
    if (row.contains("error")) {
      line.push_back("-");
      line.push_back("error: " + row.at("error").get<std::string>());
    } else {
      line.push_back(fixed(row.at("rate").get<double>(), 3) + " (" +
                     fixed(row.at("ci_low").get<double>(), 3) + "-" +
                     fixed(row.at("ci_high").get<double>(), 3) + ")");
      line.push_back(row.at("classification").get<std::string>());
    }
    table.push_back(std::move(line));
  }
  print_table(table);
}

void render_verification_text(const json& report) {
  for (const auto& c : report.at("checks")) {
    std::cout << (c.at("passed").get<bool>() ? "PASS" : "FAIL") << "  "
              << c.at("name").get<std::string>() << "  "
              << c.at("detail").get<std::string>() << "\n";
  }
  std::cout << (report.at("all_passed").get<bool>() ? "all checks passed"
                                                    : "some checks FAILED")
            << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Permutation-based inference for two-predictor regression"};
  app.require_subcommand(1);

  // analyze
  std::string input, response, covariate, treatment, family;
  std::string methods = "all";
  std::string cluster_mode = "auto";
  std::string format = "text";
  std::uint64_t permutations = 2000;
  std::uint64_t seed = 1;

  auto* analyze = app.add_subcommand("analyze", "Hypothesis tests on a CSV");
  analyze->add_option("--input", input, "CSV file")->required();
  analyze->add_option("--response", response, "response column")->required();
  analyze->add_option("--covariate", covariate, "covariate column")->required();
  analyze->add_option("--treatment", treatment, "treatment column")->required();
  analyze->add_option("--family", family, "family/cluster column");
  analyze->add_option("--method", methods,
                      "comma-separated: manly,draper-stoneman,freedman-lane,"
                      "terbraak,ols,all");
  analyze->add_option("--permutations", permutations, "draws per method");
  analyze->add_option("--seed", seed, "master seed");
  analyze->add_option("--cluster-mode", cluster_mode,
                      "independent|homogeneous|heterogeneous|auto");
  analyze->add_option("--format", format, "text|json");

  // simulate
  std::string sim_config;
  auto* simulate = app.add_subcommand("simulate", "Type I error simulations");
  simulate->add_option("--config", sim_config, "JSON config file")->required();
  simulate->add_option("--format", format, "text|json");

  // verify
  double tol_rho = 0.05, tol_var = 0.05;
  std::uint64_t vseed = 20230901;
  auto* verify = app.add_subcommand("verify", "Numerical theory checks");
  verify->add_option("--seed", vseed, "seed");
  verify->add_option("--tolerance-rho", tol_rho, "rho formula tolerance");
  verify->add_option("--tolerance-var", tol_var, "variance ratio tolerance");
  verify->add_option("--format", format, "text|json");

  CLI11_PARSE(app, argc, argv);

  if (format != "text" && format != "json") {
    std::cerr << "error: unknown format '" << format << "'\n";
    return 1;
  }

  if (analyze->parsed()) {
    plm_dataset* d = nullptr;
    plm_status st = plm_dataset_from_csv(
        input.c_str(), response.c_str(), covariate.c_str(), treatment.c_str(),
        family.empty() ? nullptr : family.c_str(), &d);
    if (st != PLM_OK) return fail(st);

    json cfg;
    cfg["methods"] = json::array();
    std::stringstream ss(methods);
    std::string m;
    while (std::getline(ss, m, ','))
      if (!m.empty()) cfg["methods"].push_back(m);
    cfg["permutations"] = permutations;
    cfg["seed"] = seed;
    cfg["cluster_mode"] = cluster_mode;

    OwnedString out;
    st = plm_analyze(d, cfg.dump().c_str(), &out.ptr);
    plm_dataset_free(d);
    if (st != PLM_OK) return fail(st);
    if (format == "json")
      std::cout << out.str() << "\n";
    else
      render_analysis_text(json::parse(out.str()));
    return 0;
  }

  if (simulate->parsed()) {
    std::ifstream in(sim_config);
    if (!in) {
      std::cerr << "error: cannot open '" << sim_config << "'\n";
      return 1;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    OwnedString out;
    const plm_status st = plm_simulate(buf.str().c_str(), &out.ptr);
    if (st != PLM_OK) return fail(st);
    if (format == "json")
      std::cout << out.str() << "\n";
    else
      render_simulation_text(json::parse(out.str()));
    return 0;
  }

  // verify
  json opts;
  opts["seed"] = vseed;
  opts["tolerance_rho"] = tol_rho;
  opts["tolerance_var"] = tol_var;
  OwnedString out;
  const plm_status st = plm_verify(opts.dump().c_str(), &out.ptr);
  if (st != PLM_OK) return fail(st);
  if (format == "json")
    std::cout << out.str() << "\n";
  else
    render_verification_text(json::parse(out.str()));
  return 0;
}
