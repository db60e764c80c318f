#include "mdfem/study.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "mdfem/quadrature.hpp"

namespace mdfem {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

// One solved benchmark instance with uniform field access.
class SolvedState {
 public:
  SolvedState(const StudyConfig& cfg, int level) : method_(cfg.method) {
    const StratifiedGeometry g = geometry_for(cfg);
    mesh_ = std::make_unique<MixedMesh>(build_mesh(g, level));
    const ModelCoefficients mc = coefficients_for(cfg);
    if (method_ == Method::Primal) {
      primal_ = solve_primal(*mesh_, mc);
      const int nsub = static_cast<int>(g.subdomains.size());
      for (int i = 0; i < nsub; ++i)
        pcoef_.push_back(primal_.p.segment(primal_.space.offset[static_cast<size_t>(i)],
                                           primal_.space.layout[static_cast<size_t>(i)].size));
    } else {
      const int order = method_ == Method::Mixed1 ? 1 : 2;
      cx_ = std::make_unique<MixedComplex>(
          assemble_complex(*mesh_, canonical_assignment(mesh_->geometry, order)));
      mixed_ = solve_mixed(*mesh_, *cx_, mc);
      const int nsub = static_cast<int>(g.subdomains.size());
      for (int i = 0; i < nsub; ++i) {
        if (cx_->space[2].block[static_cast<size_t>(i)])
          pcoef_.push_back(mixed_.pressure.segment(cx_->space[2].offset[static_cast<size_t>(i)],
                                                   cx_->space[2].block[static_cast<size_t>(i)]->size));
        else
          pcoef_.emplace_back();
        if (cx_->space[1].block[static_cast<size_t>(i)])
          fcoef_.push_back(mixed_.flux.segment(cx_->space[1].offset[static_cast<size_t>(i)],
                                               cx_->space[1].block[static_cast<size_t>(i)]->size));
        else
          fcoef_.emplace_back();
      }
    }
  }

  const MixedMesh& mesh() const { return *mesh_; }
  Method method() const { return method_; }
  bool has_flux() const { return method_ != Method::Primal; }
  const MixedSolution& mixed() const { return mixed_; }
  const PrimalSolution& primal() const { return primal_; }

  double pressure(int sub, int cell, double r0, double r1) const {
    const SimplicialMesh& m = mesh_->meshes[static_cast<size_t>(sub)];
    if (method_ == Method::Primal)
      return evaluate_scalar_field(m, primal_.space.spec, primal_.space.layout[static_cast<size_t>(sub)],
                                   pcoef_[static_cast<size_t>(sub)], cell, r0, r1);
    const SpaceSpec spec = *cx_->assignment.spec[static_cast<size_t>(sub)][2];
    return evaluate_density_field(m, spec, *cx_->space[2].block[static_cast<size_t>(sub)],
                                  pcoef_[static_cast<size_t>(sub)], cell, r0);
  }

  double pressure_at(int sub, Point2 p) const {
    const SimplicialMesh& m = mesh_->meshes[static_cast<size_t>(sub)];
    double r0 = 0, r1 = 0;
    const int cell = locate_cell(m, p, &r0, &r1);
    return pressure(sub, cell, r0, r1);
  }

  Point2 bulk_flux(int sub, int cell, double r0, double r1) const {
    const SimplicialMesh& m = mesh_->meshes[static_cast<size_t>(sub)];
    const SpaceSpec spec = *cx_->assignment.spec[static_cast<size_t>(sub)][1];
    return evaluate_flux_field(m, spec, *cx_->space[1].block[static_cast<size_t>(sub)],
                               fcoef_[static_cast<size_t>(sub)], cell, r0, r1);
  }

  Point2 bulk_flux_at(int sub, Point2 p) const {
    const SimplicialMesh& m = mesh_->meshes[static_cast<size_t>(sub)];
    double r0 = 0, r1 = 0;
    const int cell = locate_cell(m, p, &r0, &r1);
    return bulk_flux(sub, cell, r0, r1);
  }

  double line_flux(int sub, int cell, double r0) const {
    const SimplicialMesh& m = mesh_->meshes[static_cast<size_t>(sub)];
    const SpaceSpec spec = *cx_->assignment.spec[static_cast<size_t>(sub)][1];
    return evaluate_scalar_field(m, spec, *cx_->space[1].block[static_cast<size_t>(sub)],
                                 fcoef_[static_cast<size_t>(sub)], cell, r0, 0);
  }

  double line_flux_at(int sub, Point2 p) const {
    const SimplicialMesh& m = mesh_->meshes[static_cast<size_t>(sub)];
    double r0 = 0, r1 = 0;
    const int cell = locate_cell(m, p, &r0, &r1);
    return line_flux(sub, cell, r0);
  }

 private:
  Method method_;
  std::unique_ptr<MixedMesh> mesh_;
  std::unique_ptr<MixedComplex> cx_;
  PrimalSolution primal_;
  MixedSolution mixed_;
  std::vector<Eigen::VectorXd> pcoef_, fcoef_;
};

struct GroupAcc {
  double pnum = 0, pden = 0, fnum = 0, fden = 0;
  bool has_any = false;
};

// Errors of `coarse` against `ref`, integrated on the reference mesh.
std::array<GroupAcc, 3> accumulate_errors(const SolvedState& ref, const SolvedState& coarse) {
  std::array<GroupAcc, 3> acc;
  const StratifiedGeometry& g = ref.mesh().geometry;
  const bool flux = ref.has_flux();
  for (const Subdomain& sub : g.subdomains) {
    const SimplicialMesh& rm = ref.mesh().meshes[static_cast<size_t>(sub.id)];
    GroupAcc& a = acc[static_cast<size_t>(sub.dim)];
    a.has_any = true;
    if (sub.dim == 2) {
      for (int c = 0; c < rm.num_cells(); ++c) {
        const Point2 p0 = rm.vertices[static_cast<size_t>(rm.cells[static_cast<size_t>(c)][0])];
        const Point2 p1 = rm.vertices[static_cast<size_t>(rm.cells[static_cast<size_t>(c)][1])];
        const Point2 p2 = rm.vertices[static_cast<size_t>(rm.cells[static_cast<size_t>(c)][2])];
        const double meas = rm.cell_measure(c);
        for (const auto& qp : triangle_rule()) {
          const Point2 p{p0.x + qp.x * (p1.x - p0.x) + qp.y * (p2.x - p0.x),
                         p0.y + qp.x * (p1.y - p0.y) + qp.y * (p2.y - p0.y)};
          const double w = qp.w * 2.0 * meas;
          const double pr = ref.pressure(sub.id, c, qp.x, qp.y);
          const double pc = coarse.pressure_at(sub.id, p);
          a.pnum += w * (pc - pr) * (pc - pr);
          a.pden += w * pr * pr;
          if (flux) {
            const Point2 ur = ref.bulk_flux(sub.id, c, qp.x, qp.y);
            const Point2 uc = coarse.bulk_flux_at(sub.id, p);
            const Point2 diff = uc - ur;
            a.fnum += w * dot(diff, diff);
            a.fden += w * dot(ur, ur);
          }
        }
      }
    } else if (sub.dim == 1) {
      for (int c = 0; c < rm.num_cells(); ++c) {
        const Point2 p0 = rm.vertices[static_cast<size_t>(rm.cells[static_cast<size_t>(c)][0])];
        const Point2 p1 = rm.vertices[static_cast<size_t>(rm.cells[static_cast<size_t>(c)][1])];
        const double h = rm.cell_measure(c);
        for (const auto& qp : segment_rule()) {
          const Point2 p{p0.x + qp.x * (p1.x - p0.x), p0.y + qp.x * (p1.y - p0.y)};
          const double w = qp.w * h;
          const double pr = ref.pressure(sub.id, c, qp.x, 0);
          const double pc = coarse.pressure_at(sub.id, p);
          a.pnum += w * (pc - pr) * (pc - pr);
          a.pden += w * pr * pr;
          if (flux) {
            const double ur = ref.line_flux(sub.id, c, qp.x);
            const double uc = coarse.line_flux_at(sub.id, p);
            a.fnum += w * (uc - ur) * (uc - ur);
            a.fden += w * ur * ur;
          }
        }
      }
    } else {
      const double pr = ref.pressure(sub.id, 0, 0, 0);
      const double pc = coarse.pressure(sub.id, 0, 0, 0);
      a.pnum += (pc - pr) * (pc - pr);
      a.pden += pr * pr;
    }
  }
  return acc;
}

double rel(double num, double den) { return den > 1e-300 ? std::sqrt(num / den) : std::sqrt(num); }

const char* group_name(int d) { return d == 2 ? "dim2" : (d == 1 ? "dim1" : "dim0"); }

}  // namespace

void apply_config_text(StudyConfig& cfg, std::istream& in) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string valstr = trim(line.substr(eq + 1));
    double val = 0;
    try {
      size_t used = 0;
      val = std::stod(valstr, &used);
      if (used != valstr.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": bad number '" +
                                  valstr + "'");
    }
    if (key == "fracture_x") cfg.fracture_x = val;
    else if (key == "fracture_y") cfg.fracture_y = val;
    else if (key == "aperture") cfg.aperture = val;
    else if (key == "k_bulk") cfg.k_bulk = val;
    else if (key == "k_tangent") cfg.k_tangent = val;
    else if (key == "k_normal") cfg.k_normal = val;
    else if (key == "bc_bottom") cfg.bc_bottom = val;
    else if (key == "bc_fracture_top") cfg.bc_fracture_top = val;
    else throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
}

void apply_config_file(StudyConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  apply_config_text(cfg, in);
}

StratifiedGeometry geometry_for(const StudyConfig& cfg) {
  return build_cross_geometry(cfg.fracture_x, cfg.fracture_y, cfg.aperture);
}

ModelCoefficients coefficients_for(const StudyConfig& cfg) {
  ModelCoefficients mc;
  mc.k_bulk = cfg.k_bulk;
  mc.k_tangent = cfg.k_tangent;
  mc.k_normal = cfg.k_normal;
  mc.bc = benchmark_bcs();
  mc.bc.bulk[static_cast<size_t>(kTagBottom)].value = cfg.bc_bottom;
  mc.bc.fracture[static_cast<size_t>(kTagBottom)].value = cfg.bc_bottom;
  mc.bc.fracture[static_cast<size_t>(kTagTop)].value = cfg.bc_fracture_top;
  return mc;
}

StudyResult run_study(const StudyConfig& cfg) {
  StudyResult res;
  res.config = cfg;
  std::vector<int> levels = cfg.levels;
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  if (levels.empty()) throw std::invalid_argument("study needs at least one level");
  if (levels.back() >= cfg.ref_level)
    throw std::invalid_argument("reference level must exceed every study level");

  const SolvedState ref(cfg, cfg.ref_level);
  // Per-series previous error for rate computation.
  std::map<std::pair<std::string, std::string>, std::pair<double, double>> prev;  // -> (h, err)
  for (int level : levels) {
    const SolvedState coarse(cfg, level);
    const auto acc = accumulate_errors(ref, coarse);
    const double h = std::ldexp(1.0, -level);
    for (int d = 2; d >= 0; --d) {
      const GroupAcc& a = acc[static_cast<size_t>(d)];
      if (!a.has_any) continue;
      ErrorRow prow;
      prow.method = to_string(cfg.method);
      prow.level = level;
      prow.h = h;
      prow.group = group_name(d);
      prow.field = "pressure";
      prow.error = rel(a.pnum, a.pden);
      const auto key = std::make_pair(prow.group, prow.field);
      if (prev.count(key)) {
        const auto [ph, pe] = prev[key];
        prow.rate = std::log(pe / prow.error) / std::log(ph / h);
        prow.has_rate = true;
      }
      prev[key] = {h, prow.error};
      res.rows.push_back(prow);
      if (ref.has_flux() && d >= 1) {
        ErrorRow frow = prow;
        frow.field = "flux";
        frow.error = rel(a.fnum, a.fden);
        frow.has_rate = false;
        const auto fkey = std::make_pair(frow.group, frow.field);
        if (prev.count(fkey)) {
          const auto [ph, pe] = prev[fkey];
          frow.rate = std::log(pe / frow.error) / std::log(ph / h);
          frow.has_rate = true;
        }
        prev[fkey] = {h, frow.error};
        res.rows.push_back(frow);
      }
    }
  }
  return res;
}

void write_csv(std::ostream& os, const StudyResult& res) {
  os << "method,level,h,group,field,error,rate\n";
  char buf[160];
  for (const ErrorRow& r : res.rows) {
    if (r.has_rate)
      std::snprintf(buf, sizeof buf, "%s,%d,%.10g,%s,%s,%.10e,%.4f\n", r.method.c_str(), r.level,
                    r.h, r.group.c_str(), r.field.c_str(), r.error, r.rate);
    else
      std::snprintf(buf, sizeof buf, "%s,%d,%.10g,%s,%s,%.10e,\n", r.method.c_str(), r.level, r.h,
                    r.group.c_str(), r.field.c_str(), r.error);
    os << buf;
  }
}

void write_table(std::ostream& os, const StudyResult& res) {
  os << "method: " << to_string(res.config.method) << "  (reference level " << res.config.ref_level
     << ")\n";
  os << "level  h            group  field     error          rate\n";
  char buf[160];
  for (const ErrorRow& r : res.rows) {
    if (r.has_rate)
      std::snprintf(buf, sizeof buf, "%-6d %-12.6g %-6s %-9s %-14.6e %.3f\n", r.level, r.h,
                    r.group.c_str(), r.field.c_str(), r.error, r.rate);
    else
      std::snprintf(buf, sizeof buf, "%-6d %-12.6g %-6s %-9s %-14.6e %s\n", r.level, r.h,
                    r.group.c_str(), r.field.c_str(), r.error, "N/A");
    os << buf;
  }
  if (res.config.method == Method::Primal) os << "flux rows: N/A (primal method has no flux unknown)\n";
}

double fit_slope(const StudyResult& res, const std::string& group, const std::string& field) {
  std::vector<double> xs, ys;
  for (const ErrorRow& r : res.rows)
    if (r.group == group && r.field == field && r.error > 0) {
      xs.push_back(std::log2(r.h));
      ys.push_back(std::log2(r.error));
    }
  if (xs.size() < 2) throw std::invalid_argument("series too short for a slope fit");
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double mean_rate(const StudyResult& res, const std::string& group, const std::string& field) {
  double sum = 0;
  int count = 0;
  for (const ErrorRow& r : res.rows)
    if (r.group == group && r.field == field && r.has_rate) {
      sum += r.rate;
      ++count;
    }
  if (count == 0) throw std::invalid_argument("series has no rates");
  return sum / count;
}

double error_at(const StudyResult& res, int level, const std::string& group,
                const std::string& field) {
  for (const ErrorRow& r : res.rows)
    if (r.level == level && r.group == group && r.field == field) return r.error;
  throw std::invalid_argument("no study row for the requested level/group/field");
}

double rate_at(const StudyResult& res, int level, const std::string& group,
               const std::string& field) {
  for (const ErrorRow& r : res.rows)
    if (r.level == level && r.group == group && r.field == field && r.has_rate) return r.rate;
  throw std::invalid_argument("no recorded rate for the requested level/group/field");
}

void write_rate_svg(std::ostream& os, const StudyResult& res) {
  // Collect series.
  std::map<std::pair<std::string, std::string>, std::vector<std::pair<double, double>>> series;
  for (const ErrorRow& r : res.rows)
    if (r.error > 0) series[{r.group, r.field}].push_back({r.h, r.error});
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& kv : series)
    for (const auto& [h, e] : kv.second) {
      xmin = std::min(xmin, std::log10(h));
      xmax = std::max(xmax, std::log10(h));
      ymin = std::min(ymin, std::log10(e));
      ymax = std::max(ymax, std::log10(e));
    }
  if (series.empty()) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\"/>\n";
    return;
  }
  if (xmax - xmin < 1e-9) xmax = xmin + 1;
  if (ymax - ymin < 1e-9) ymax = ymin + 1;
  const double X0 = 80, X1 = 600, Y0 = 420, Y1 = 40;
  auto tx = [&](double lh) { return X0 + (lh - xmin) / (xmax - xmin) * (X1 - X0); };
  auto ty = [&](double le) { return Y0 + (le - ymin) / (ymax - ymin) * (Y1 - Y0); };
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  char buf[256];
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
        "viewBox=\"0 0 640 480\">\n";
  os << "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n", X0, Y0,
                X1, Y0);
  os << buf;
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n", X0, Y0,
                X0, Y1);
  os << buf;
  os << "<text x=\"320\" y=\"460\" font-size=\"14\" text-anchor=\"middle\">log10 h</text>\n";
  os << "<text x=\"20\" y=\"230\" font-size=\"14\" transform=\"rotate(-90 20 230)\" "
        "text-anchor=\"middle\">log10 relative error</text>\n";
  std::snprintf(buf, sizeof buf,
                "<text x=\"320\" y=\"24\" font-size=\"15\" text-anchor=\"middle\">%s convergence"
                "</text>\n",
                to_string(res.config.method).c_str());
  os << buf;
  int ci = 0;
  double legend_y = 60;
  for (const auto& kv : series) {
    const auto& pts = kv.second;
    const char* color = colors[ci % 6];
    std::string path;
    for (size_t i = 0; i < pts.size(); ++i) {
      char seg[64];
      std::snprintf(seg, sizeof seg, "%s%.2f,%.2f", i == 0 ? "M" : " L",
                    tx(std::log10(pts[i].first)), ty(std::log10(pts[i].second)));
      path += seg;
    }
    std::snprintf(buf, sizeof buf, "<path d=\"%s\" fill=\"none\" stroke=\"%s\" stroke-width=\"2\"/>\n",
                  path.c_str(), color);
    os << buf;
    for (const auto& [h, e] : pts) {
      std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"%s\"/>\n",
                    tx(std::log10(h)), ty(std::log10(e)), color);
      os << buf;
    }
    double slope = 0;
    bool have_slope = pts.size() >= 2;
    if (have_slope) slope = fit_slope(res, kv.first.first, kv.first.second);
    if (have_slope)
      std::snprintf(buf, sizeof buf,
                    "<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\" fill=\"%s\">%s %s (slope %.2f)"
                    "</text>\n",
                    X0 + 10, legend_y, color, kv.first.first.c_str(), kv.first.second.c_str(), slope);
    else
      std::snprintf(buf, sizeof buf,
                    "<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\" fill=\"%s\">%s %s</text>\n",
                    X0 + 10, legend_y, color, kv.first.first.c_str(), kv.first.second.c_str());
    os << buf;
    legend_y += 16;
    ++ci;
  }
  os << "</svg>\n";
}

void solve_and_export(const StudyConfig& cfg, int level, std::ostream& csv, std::ostream* svg) {
  const SolvedState st(cfg, level);
  const StratifiedGeometry& g = st.mesh().geometry;
  csv << "subdomain,dim,x,y,pressure\n";
  char buf[200];
  struct Sample {
    int sub, dim;
    Point2 p;
    double val;
  };
  std::vector<Sample> samples;
  for (const Subdomain& sub : g.subdomains) {
    const SimplicialMesh& m = st.mesh().meshes[static_cast<size_t>(sub.id)];
    for (int c = 0; c < m.num_cells(); ++c) {
      const Point2 p = m.cell_centroid(c);
      double val;
      if (sub.dim == 2)
        val = st.pressure(sub.id, c, 1.0 / 3, 1.0 / 3);
      else if (sub.dim == 1)
        val = st.pressure(sub.id, c, 0.5, 0);
      else
        val = st.pressure(sub.id, c, 0, 0);
      samples.push_back({sub.id, sub.dim, p, val});
    }
  }
  for (const Sample& s : samples) {
    std::snprintf(buf, sizeof buf, "%d,%d,%.10g,%.10g,%.10e\n", s.sub, s.dim, s.p.x, s.p.y, s.val);
    csv << buf;
  }
  if (!svg) return;
  double vmin = 1e300, vmax = -1e300;
  for (const Sample& s : samples) {
    vmin = std::min(vmin, s.val);
    vmax = std::max(vmax, s.val);
  }
  if (vmax - vmin < 1e-12) vmax = vmin + 1;
  auto color_of = [&](double v) {
    const double t = std::clamp((v - vmin) / (vmax - vmin), 0.0, 1.0);
    const int r = static_cast<int>(255 * t);
    const int b = static_cast<int>(255 * (1 - t));
    const int gg = static_cast<int>(64 + 80 * (1 - std::abs(2 * t - 1)));
    char c[8];
    std::snprintf(c, sizeof c, "#%02x%02x%02x", r, gg, b);
    return std::string(c);
  };
  const double S = 560, OX = 40, OY = 40;
  auto px = [&](Point2 p) { return OX + p.x * S; };
  auto py = [&](Point2 p) { return OY + (1.0 - p.y) * S; };
  *svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" "
          "viewBox=\"0 0 640 640\">\n<rect width=\"640\" height=\"640\" fill=\"white\"/>\n";
  size_t si = 0;
  for (const Subdomain& sub : g.subdomains) {
    const SimplicialMesh& m = st.mesh().meshes[static_cast<size_t>(sub.id)];
    for (int c = 0; c < m.num_cells(); ++c, ++si) {
      const Sample& s = samples[si];
      if (sub.dim == 2) {
        const auto& cv = m.cells[static_cast<size_t>(c)];
        const Point2 a = m.vertices[static_cast<size_t>(cv[0])];
        const Point2 b = m.vertices[static_cast<size_t>(cv[1])];
        const Point2 d = m.vertices[static_cast<size_t>(cv[2])];
        std::snprintf(buf, sizeof buf,
                      "<polygon points=\"%.2f,%.2f %.2f,%.2f %.2f,%.2f\" fill=\"%s\" "
                      "stroke=\"none\"/>\n",
                      px(a), py(a), px(b), py(b), px(d), py(d), color_of(s.val).c_str());
        *svg << buf;
      } else if (sub.dim == 1) {
        const auto& cv = m.cells[static_cast<size_t>(c)];
        const Point2 a = m.vertices[static_cast<size_t>(cv[0])];
        const Point2 b = m.vertices[static_cast<size_t>(cv[1])];
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"%s\" "
                      "stroke-width=\"5\"/>\n",
                      px(a), py(a), px(b), py(b), color_of(s.val).c_str());
        *svg << buf;
      } else {
        std::snprintf(buf, sizeof buf,
                      "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"6\" fill=\"%s\" stroke=\"black\"/>\n",
                      px(m.vertices[0]), py(m.vertices[0]), color_of(s.val).c_str());
        *svg << buf;
      }
    }
  }
  std::snprintf(buf, sizeof buf,
                "<text x=\"320\" y=\"628\" font-size=\"14\" text-anchor=\"middle\">pressure: "
                "%.4g (blue) to %.4g (red)</text>\n",
                vmin, vmax);
  *svg << buf;
  *svg << "</svg>\n";
}

}  // namespace mdfem
