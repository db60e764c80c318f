#pragma once
/// Convergence-study harness: solves the cross-fracture benchmark on a
/// ladder of refinement levels, measures errors per dimension group against
/// a reference solution one level finer than the finest study level
/// (computed with the same method, transferred exactly through the nested
/// meshes), and emits CSV / plain-text / SVG reports.

#include <iosfwd>
#include <string>
#include <vector>

#include "mdfem/solver.hpp"

namespace mdfem {

struct StudyConfig {
  Method method = Method::Primal;
  std::vector<int> levels = {2, 3, 4, 5, 6};
  int ref_level = 7;
  double fracture_x = 0.5;
  double fracture_y = 0.5;
  double aperture = 1e-3;
  double k_bulk = 1.0;
  double k_tangent = 100.0;
  double k_normal = 100.0;
  double bc_bottom = 0.0;
  double bc_fracture_top = 1.0;
};

/// Apply "key = value" lines (comments start with '#'); unknown keys are an
/// error.  Recognized keys: fracture_x, fracture_y, aperture, k_bulk,
/// k_tangent, k_normal, bc_bottom, bc_fracture_top.
void apply_config_text(StudyConfig& cfg, std::istream& in);
void apply_config_file(StudyConfig& cfg, const std::string& path);

/// Geometry and material data implied by a config.
StratifiedGeometry geometry_for(const StudyConfig& cfg);
ModelCoefficients coefficients_for(const StudyConfig& cfg);

struct ErrorRow {
  std::string method;
  int level = 0;
  double h = 0;
  std::string group;  // "dim2", "dim1", "dim0"
  std::string field;  // "pressure", "flux"
  double error = 0;
  double rate = 0;
  bool has_rate = false;
};

struct StudyResult {
  StudyConfig config;
  std::vector<ErrorRow> rows;
};

StudyResult run_study(const StudyConfig& cfg);

void write_csv(std::ostream& os, const StudyResult& res);
void write_table(std::ostream& os, const StudyResult& res);
void write_rate_svg(std::ostream& os, const StudyResult& res);

/// Least-squares slope of log2(error) against log2(h) for one series;
/// throws when the series has fewer than two points.
double fit_slope(const StudyResult& res, const std::string& group, const std::string& field);

/// Mean of the recorded consecutive-level rates of one series.
double mean_rate(const StudyResult& res, const std::string& group, const std::string& field);

/// Error of one series at one level (throws when absent).
double error_at(const StudyResult& res, int level, const std::string& group,
                const std::string& field);
double rate_at(const StudyResult& res, int level, const std::string& group,
               const std::string& field);

/// Solve once at the given level and write sampled fields as CSV
/// (subdomain, dim, x, y, pressure) and optionally an SVG heat map.
void solve_and_export(const StudyConfig& cfg, int level, std::ostream& csv, std::ostream* svg);

}  // namespace mdfem
