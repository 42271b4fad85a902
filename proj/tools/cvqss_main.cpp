#include "cvqss/circuit.hpp"
#include "cvqss/scheme.hpp"
#include "cvqss/scheme_io.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace cvqss;

std::vector<int> parse_share_list(const std::string& text) {
  std::vector<int> shares;
  std::stringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(tok, &used);
      if (used != tok.size() || v < 1) throw std::invalid_argument(tok);
      shares.push_back(v);
    } catch (const std::exception&) {
      throw std::invalid_argument("expected a comma-separated share list, got '" +
                                  text + "'");
    }
  }
  if (shares.empty()) throw std::invalid_argument("empty share list");
  return shares;
}

Complex parse_complex(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos)
    throw std::invalid_argument("expected 're,im', got '" + text + "'");
  try {
    return Complex(std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1)));
  } catch (const std::exception&) {
    throw std::invalid_argument("expected 're,im', got '" + text + "'");
  }
}

std::vector<double> parse_grid(const std::string& text) {
  double start = 0, stop = 0, step = 0;
  const auto c1 = text.find(':'), c2 = text.rfind(':');
  if (c1 == std::string::npos || c2 == c1)
    throw std::invalid_argument("expected 'start:stop:step', got '" + text + "'");
  try {
    start = std::stod(text.substr(0, c1));
    stop = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
    step = std::stod(text.substr(c2 + 1));
  } catch (const std::exception&) {
    throw std::invalid_argument("expected 'start:stop:step', got '" + text + "'");
  }
  if (step <= 0.0) throw std::invalid_argument("grid step must be positive");
  std::vector<double> grid;
  for (int i = 0;; ++i) {
    const double r = start + i * step;
    if (r > stop + 1e-9) break;
    grid.push_back(r);
  }
  return grid;
}

int cmd_validate(const std::string& scheme_path) {
  const SchemeFile file = load_scheme_file(scheme_path);
  const ValidationReport report = validate(file.spec);
  std::cout << "subsets_checked = " << report.subsets_checked << "\n";
  std::cout << "min_subset_det = " << format_sig12(report.min_abs_det) << "\n";
  if (report.pass) {
    std::cout << "PASS\n";
    return 0;
  }
  std::cout << "FAIL: " << report.message << "\n";
  return report.no_cloning_violation ? 3 : 2;
}

int cmd_sweep(const std::string& scheme_path, const std::string& collaborators,
              const std::string& alpha_text, const std::string& grid_text,
              const std::string& out_path) {
  const SchemeFile file = load_scheme_file(scheme_path);
  const std::vector<int> shares = parse_share_list(collaborators);
  const Complex alpha = alpha_text.empty() ? file.secret : parse_complex(alpha_text);
  std::vector<double> grid = file.r_grid;
  if (!grid_text.empty()) grid = parse_grid(grid_text);
  if (grid.empty() && grid_text.empty()) grid = parse_grid("0:3:0.25");

  ResultTable table;
  table.headers = {"r", "F_measured", "F_formula", "abs_error"};
  for (const SweepRow& row : fidelity_sweep(file.spec, shares, alpha, grid))
    table.rows.push_back({row.r, row.measured, row.formula, row.abs_error});
  write_file_atomic(out_path, to_csv(table));
  std::cout << "wrote " << out_path << " (" << table.rows.size() << " rows)\n";
  return 0;
}

int cmd_leakage(const std::string& scheme_path, const std::string& subset_text,
                const std::string& alpha0_text, const std::string& alpha1_text,
                const std::string& grid_text, const std::string& out_path) {
  const SchemeFile file = load_scheme_file(scheme_path);
  const std::vector<int> subset = parse_share_list(subset_text);
  const Complex alpha0 = parse_complex(alpha0_text);
  const Complex alpha1 = parse_complex(alpha1_text);
  std::vector<double> grid = file.r_grid;
  if (!grid_text.empty()) grid = parse_grid(grid_text);
  if (grid.empty() && grid_text.empty()) grid = parse_grid("0:3:0.25");

  ResultTable table;
  table.headers = {"r", "leakage_fidelity"};
  for (double r : grid) {
    const EncodedSecret enc = encode(alpha0, file.spec, r);
    table.rows.push_back({r, leakage(enc, subset, alpha0, alpha1)});
  }
  write_file_atomic(out_path, to_csv(table));
  std::cout << "wrote " << out_path << " (" << table.rows.size() << " rows)\n";
  return 0;
}

int cmd_compile(const std::string& scheme_path, const std::string& collaborators,
                const std::string& out_path) {
  const SchemeFile file = load_scheme_file(scheme_path);
  const std::vector<int> shares = parse_share_list(collaborators);
  const ReconstructionPlan plan = solve_T(file.spec, shares);
  const Circuit circuit = compile(plan.S);
  write_file_atomic(out_path, write_netlist(circuit));
  const double error = (replay(circuit).matrix() - plan.S.matrix()).norm();
  std::cout << "wrote " << out_path << " (" << circuit.elements.size()
            << " elements)\n";
  std::cout << "recomposition_error = " << format_sig12(error) << "\n";
  return 0;
}

int cmd_roundtrip(const std::string& scheme_path, const std::string& collaborators,
                  const std::string& alpha_text, double r, bool have_r) {
  const SchemeFile file = load_scheme_file(scheme_path);
  const std::vector<int> shares = parse_share_list(collaborators);
  const Complex alpha = alpha_text.empty() ? file.secret : parse_complex(alpha_text);
  const double r_used = have_r ? r : file.r;
  const ReconstructionPlan plan = solve_T(file.spec, shares);
  const GaussianState result = reconstruct(encode(alpha, file.spec, r_used), plan);
  std::cout << "F = " << format_sig12(fidelity_coherent(result, alpha)) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Continuous-variable threshold secret sharing: scheme validation,\n"
      "encode/reconstruct experiments, fidelity and leakage tables, and\n"
      "interferometer netlist compilation."};
  app.require_subcommand(1);
  int seed = 0;
  app.add_option("--seed", seed,
                 "seed for randomized subcommands (all current verbs are "
                 "deterministic; accepted for script compatibility)");

  std::string scheme_path, out_path, collaborators, subset, alpha_text, alpha0_text,
      alpha1_text, grid_text;
  double r_value = 0.0;

  auto* validate_cmd = app.add_subcommand("validate", "check a scheme file");
  validate_cmd->add_option("--scheme", scheme_path, "scheme file")->required();

  auto* sweep_cmd = app.add_subcommand("sweep", "fidelity vs squeezing table");
  sweep_cmd->add_option("--scheme", scheme_path, "scheme file")->required();
  sweep_cmd->add_option("--collaborators", collaborators, "share list i,j,...")
      ->required();
  sweep_cmd->add_option("--alpha", alpha_text, "secret amplitude re,im");
  sweep_cmd->add_option("--grid", grid_text, "r grid start:stop:step");
  sweep_cmd->add_option("--out", out_path, "output CSV path")->required();

  auto* leakage_cmd = app.add_subcommand("leakage", "adversary-subset leakage table");
  leakage_cmd->add_option("--scheme", scheme_path, "scheme file")->required();
  leakage_cmd->add_option("--subset", subset, "adversary share list")->required();
  leakage_cmd->add_option("--alpha0", alpha0_text, "first secret re,im")->required();
  leakage_cmd->add_option("--alpha1", alpha1_text, "second secret re,im")->required();
  leakage_cmd->add_option("--grid", grid_text, "r grid start:stop:step");
  leakage_cmd->add_option("--out", out_path, "output CSV path")->required();

  auto* compile_cmd = app.add_subcommand("compile", "emit a reconstruction netlist");
  compile_cmd->add_option("--scheme", scheme_path, "scheme file")->required();
  compile_cmd->add_option("--collaborators", collaborators, "share list i,j,...")
      ->required();
  compile_cmd->add_option("--out", out_path, "output netlist path")->required();

  auto* roundtrip_cmd =
      app.add_subcommand("roundtrip", "encode, reconstruct, print fidelity");
  roundtrip_cmd->add_option("--scheme", scheme_path, "scheme file")->required();
  roundtrip_cmd->add_option("--collaborators", collaborators, "share list i,j,...")
      ->required();
  roundtrip_cmd->add_option("--alpha", alpha_text, "secret amplitude re,im");
  auto* r_opt = roundtrip_cmd->add_option("--r", r_value, "dealer squeezing");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate_cmd->parsed()) return cmd_validate(scheme_path);
    if (sweep_cmd->parsed())
      return cmd_sweep(scheme_path, collaborators, alpha_text, grid_text, out_path);
    if (leakage_cmd->parsed())
      return cmd_leakage(scheme_path, subset, alpha0_text, alpha1_text, grid_text,
                         out_path);
    if (compile_cmd->parsed()) return cmd_compile(scheme_path, collaborators, out_path);
    if (roundtrip_cmd->parsed())
      return cmd_roundtrip(scheme_path, collaborators, alpha_text, r_value,
                           r_opt->count() > 0);
  } catch (const cvqss::SchemeParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const cvqss::NoCloningError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
