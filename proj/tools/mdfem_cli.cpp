// Command-line driver: convergence studies, single solves with field export,
// cochain-complex diagnostics, and discretization-compatibility reports.
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mdfem/derham.hpp"
#include "mdfem/solver.hpp"
#include "mdfem/study.hpp"

namespace {

using namespace mdfem;

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot open output file " + p.string());
  return f;
}

int run_study_cmd(const std::string& method, const std::vector<int>& levels, int ref_level,
                  const std::string& config, const std::string& out, const std::string& format) {
  StudyConfig cfg;
  if (!config.empty()) apply_config_file(cfg, config);
  cfg.method = method_from_string(method);
  if (!levels.empty()) cfg.levels = levels;
  if (ref_level > 0) cfg.ref_level = ref_level;

  const StudyResult res = run_study(cfg);

  std::filesystem::create_directories(out);
  const std::string stem = "study_" + to_string(cfg.method);
  for (const std::string& f : split_commas(format)) {
    if (f == "csv") {
      auto os = open_out(std::filesystem::path(out) / (stem + ".csv"));
      write_csv(os, res);
    } else if (f == "table") {
      auto os = open_out(std::filesystem::path(out) / (stem + ".txt"));
      write_table(os, res);
    } else if (f == "svg") {
      auto os = open_out(std::filesystem::path(out) / (stem + ".svg"));
      write_rate_svg(os, res);
    } else {
      std::cerr << "unknown format '" << f << "' (expected csv, table, svg)\n";
      return 2;
    }
  }
  write_table(std::cout, res);
  return 0;
}

int run_solve_cmd(const std::string& method, int level, const std::string& config,
                  const std::string& out, const std::string& format) {
  StudyConfig cfg;
  if (!config.empty()) apply_config_file(cfg, config);
  cfg.method = method_from_string(method);

  std::filesystem::create_directories(out);
  char stem[64];
  std::snprintf(stem, sizeof stem, "solution_%s_level%d", to_string(cfg.method).c_str(), level);

  bool want_csv = false, want_svg = false;
  for (const std::string& f : split_commas(format)) {
    if (f == "csv") want_csv = true;
    else if (f == "svg") want_svg = true;
    else {
      std::cerr << "unknown format '" << f << "' (expected csv, svg)\n";
      return 2;
    }
  }
  const std::filesystem::path csv_path = std::filesystem::path(out) / (std::string(stem) + ".csv");
  const std::filesystem::path svg_path = std::filesystem::path(out) / (std::string(stem) + ".svg");
  std::ostringstream csv_buf, svg_buf;
  solve_and_export(cfg, level, csv_buf, want_svg ? &svg_buf : nullptr);
  if (want_csv) open_out(csv_path) << csv_buf.str();
  if (want_svg) open_out(svg_path) << svg_buf.str();
  if (want_csv) std::cout << "wrote " << csv_path.string() << "\n";
  if (want_svg) std::cout << "wrote " << svg_path.string() << "\n";
  if (!want_csv && !want_svg) std::cout << csv_buf.str();
  return 0;
}

int run_diagnose_cmd(const std::string& method, int level, const std::string& config,
                     const std::string& out, bool dump) {
  StudyConfig cfg;
  if (!config.empty()) apply_config_file(cfg, config);
  const int order = method_from_string(method) == Method::Mixed2 ? 2 : 1;

  const StratifiedGeometry g = geometry_for(cfg);
  const MixedMesh mm = build_mesh(g, level);
  const MixedComplex cx = assemble_complex(mm, canonical_assignment(g, order));

  bool all_ok = true;
  auto report = [&](bool ok, const std::string& what) {
    std::cout << (ok ? "[ok]   " : "[FAIL] ") << what << "\n";
    if (!ok) all_ok = false;
  };
  char line[256];

  // d of d vanishes identically.
  double dd = 0;
  {
    const SpMat P = (cx.D[1] * cx.D[0]).pruned(0.0);
    for (int k = 0; k < P.outerSize(); ++k)
      for (SpMat::InnerIterator it(P, k); it; ++it) dd = std::max(dd, std::abs(it.value()));
  }
  std::snprintf(line, sizeof line, "composition of consecutive differentials: max |entry| = %.3e",
                dd);
  report(dd == 0.0, line);

  // Cohomology matches the topology of the fractured square.
  const std::array<int, 3> betti = cohomology_dims(cx);
  std::snprintf(line, sizeof line, "cohomology dimensions: (%d, %d, %d), expected (1, 0, 0)",
                betti[0], betti[1], betti[2]);
  report(betti[0] == 1 && betti[1] == 0 && betti[2] == 0, line);

  // Codifferential adjointness against random cochains.
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int k = 1; k <= 2; ++k) {
    const int n = cx.space[static_cast<size_t>(k)].total;
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = uni(rng);
    const Eigen::VectorXd r = codifferential_apply(cx, k, v);
    const Eigen::VectorXd lhs = cx.M[static_cast<size_t>(k - 1)] * r;
    const Eigen::VectorXd rhs = cx.D[static_cast<size_t>(k - 1)].transpose() *
                                (cx.M[static_cast<size_t>(k)] * v);
    const double err = (lhs - rhs).lpNorm<Eigen::Infinity>() /
                       std::max(1.0, rhs.lpNorm<Eigen::Infinity>());
    std::snprintf(line, sizeof line, "codifferential adjointness at degree %d: residual %.3e", k,
                  err);
    report(err <= 1e-12, line);
  }

  // Helmholtz decomposition of a random degree-1 cochain.
  {
    const int n = cx.space[1].total;
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = uni(rng);
    const HelmholtzParts parts = helmholtz_decompose(cx, 1, v);
    const double recon =
        (v - parts.exact - parts.coexact - parts.harmonic).lpNorm<Eigen::Infinity>() /
        std::max(1.0, v.lpNorm<Eigen::Infinity>());
    const double ortho = std::abs(parts.exact.dot(cx.M[1] * parts.coexact)) /
                         std::max(1.0, v.dot(cx.M[1] * v));
    std::snprintf(line, sizeof line,
                  "Helmholtz decomposition: reconstruction %.3e, orthogonality %.3e", recon, ortho);
    report(recon <= 1e-10 && ortho <= 1e-10, line);
  }

  // Poincare-type constants per degree.
  for (int k = 0; k <= 2; ++k) {
    const double c = poincare_estimate(cx, k);
    std::snprintf(line, sizeof line, "Poincare constant estimate, degree %d: %.6f", k, c);
    report(std::isfinite(c) && c > 0, line);
  }

  // Discrete inf-sup constant of the divergence pairing.
  {
    const double beta = infsup_witness(cx);
    std::snprintf(line, sizeof line, "inf-sup witness: %.6f", beta);
    report(std::isfinite(beta) && beta > 0, line);
  }

  if (dump) {
    std::filesystem::create_directories(out);
    const std::filesystem::path dir(out);
    for (int k = 0; k < 2; ++k) {
      auto os = open_out(dir / ("D" + std::to_string(k) + ".coo"));
      dump_matrix_coord(os, cx.D[static_cast<size_t>(k)]);
    }
    for (int k = 0; k < 3; ++k) {
      auto os = open_out(dir / ("M" + std::to_string(k) + ".coo"));
      dump_matrix_coord(os, cx.M[static_cast<size_t>(k)]);
    }
    std::cout << "wrote matrix dumps to " << out << "\n";
  }

  return all_ok ? 0 : 1;
}

int run_check_spaces_cmd(const std::string& config) {
  StudyConfig cfg;
  if (!config.empty()) apply_config_file(cfg, config);
  const StratifiedGeometry g = geometry_for(cfg);
  bool all_ok = true;
  for (int order = 1; order <= 2; ++order) {
    const SpaceAssignment a = canonical_assignment(g, order);
    std::cout << "order " << order << " assignment:\n" << format_assignment(g, a);
    const std::vector<CompatibilityIssue> issues = check_compatibility(g, a);
    if (issues.empty()) {
      std::cout << "compatible: yes\n\n";
    } else {
      all_ok = false;
      for (const CompatibilityIssue& is : issues)
        std::cout << "issue: subdomain " << is.subdomain << " degree " << is.degree << ": "
                  << is.what << "\n";
      std::cout << "compatible: NO\n\n";
    }
  }
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mdfem: mixed-dimensional Darcy flow on fractured domains"};
  app.require_subcommand(1);

  std::string method = "primal";
  std::vector<int> levels;
  int ref_level = -1;
  int level = 2;
  std::string config, out = ".", format;
  bool dump = false;

  CLI::App* study = app.add_subcommand("study", "Run a convergence study and write reports");
  study->add_option("--method", method, "primal, mixed1, or mixed2")->required();
  study->add_option("--levels", levels, "refinement levels, e.g. 2,3,4")->delimiter(',');
  study->add_option("--ref-level", ref_level, "reference refinement level");
  study->add_option("--config", config, "key = value configuration file");
  study->add_option("--out", out, "output directory");
  study->add_option("--format", format, "comma list of csv,table,svg")->default_str("");

  CLI::App* solve = app.add_subcommand("solve", "Solve once and export the pressure field");
  solve->add_option("--method", method, "primal, mixed1, or mixed2")->required();
  solve->add_option("--level", level, "refinement level")->required();
  solve->add_option("--config", config, "key = value configuration file");
  solve->add_option("--out", out, "output directory");
  solve->add_option("--format", format, "comma list of csv,svg")->default_str("");

  CLI::App* diag = app.add_subcommand("diagnose", "Check cochain-complex invariants");
  diag->add_option("--method", method, "mixed1 or mixed2 (selects the order)");
  diag->add_option("--level", level, "refinement level");
  diag->add_option("--config", config, "key = value configuration file");
  diag->add_option("--out", out, "output directory for matrix dumps");
  diag->add_flag("--dump-matrices", dump, "write differentials and inner products as .coo files");

  CLI::App* chk = app.add_subcommand("check-spaces", "Report discretization compatibility");
  chk->add_option("--config", config, "key = value configuration file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (study->parsed())
      return run_study_cmd(method, levels, ref_level, config, out,
                           format.empty() ? "csv,table,svg" : format);
    if (solve->parsed())
      return run_solve_cmd(method, level, config, out, format.empty() ? "csv,svg" : format);
    if (diag->parsed()) return run_diagnose_cmd(method, level, config, out, dump);
    if (chk->parsed()) return run_check_spaces_cmd(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
