#include "mdfem/solver.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mdfem/quadrature.hpp"

namespace mdfem {

namespace {

using Trip = Eigen::Triplet<double>;

constexpr double kMatchTol = 1e-12;

bool same_point(Point2 p, Point2 q) {
  return std::abs(p.x - q.x) <= kMatchTol && std::abs(p.y - q.y) <= kMatchTol;
}

void ref_of(const SimplicialMesh& m, int cell, Point2 p, double& r0, double& r1) {
  const auto& cv = m.cells[static_cast<size_t>(cell)];
  const Point2 a = m.vertices[static_cast<size_t>(cv[0])];
  const Point2 b = m.vertices[static_cast<size_t>(cv[1])];
  const Point2 c = m.vertices[static_cast<size_t>(cv[2])];
  const Point2 e1 = b - a, e2 = c - a, rp = p - a;
  const double det = e1.x * e2.y - e1.y * e2.x;
  r0 = (rp.x * e2.y - rp.y * e2.x) / det;
  r1 = (e1.x * rp.y - e1.y * rp.x) / det;
}

// Apply homogeneous essential constraints by filtering assembled triplets.
void eliminate(std::vector<Trip>& trips, Eigen::VectorXd& rhs, const std::vector<char>& fixed,
               const Eigen::VectorXd& values) {
  for (const Trip& t : trips)
    if (!fixed[static_cast<size_t>(t.row())] && fixed[static_cast<size_t>(t.col())])
      rhs[t.row()] -= t.value() * values[t.col()];
  std::vector<Trip> kept;
  kept.reserve(trips.size());
  for (const Trip& t : trips)
    if (!fixed[static_cast<size_t>(t.row())] && !fixed[static_cast<size_t>(t.col())]) kept.push_back(t);
  for (int i = 0; i < static_cast<int>(fixed.size()); ++i)
    if (fixed[static_cast<size_t>(i)]) {
      kept.emplace_back(i, i, 1.0);
      rhs[i] = values[i];
    }
  trips.swap(kept);
}

double relative_residual(const SpMat& A, const Eigen::VectorXd& x, const Eigen::VectorXd& rhs) {
  const Eigen::VectorXd r = A * x - rhs;
  return r.lpNorm<Eigen::Infinity>() / std::max(1.0, rhs.lpNorm<Eigen::Infinity>());
}

int local_edge_index(const SimplicialMesh& m, int cell, int edge) {
  for (int k = 0; k < 3; ++k)
    if (m.cell_edges[static_cast<size_t>(cell)][static_cast<size_t>(k)] == edge) return k;
  throw std::runtime_error("edge not on cell");
}

}  // namespace

Method method_from_string(const std::string& s) {
  if (s == "primal") return Method::Primal;
  if (s == "mixed1") return Method::Mixed1;
  if (s == "mixed2") return Method::Mixed2;
  throw std::invalid_argument("unknown method '" + s + "' (expected primal, mixed1 or mixed2)");
}

std::string to_string(Method m) {
  switch (m) {
    case Method::Primal: return "primal";
    case Method::Mixed1: return "mixed1";
    default: return "mixed2";
  }
}

BcTable benchmark_bcs() {
  BcTable t;
  t.bulk[static_cast<size_t>(kTagBottom)] = {true, 0.0};
  t.bulk[static_cast<size_t>(kTagTop)] = {false, 0.0};
  t.bulk[static_cast<size_t>(kTagLeft)] = {false, 0.0};
  t.bulk[static_cast<size_t>(kTagRight)] = {false, 0.0};
  t.fracture[static_cast<size_t>(kTagBottom)] = {true, 0.0};
  t.fracture[static_cast<size_t>(kTagTop)] = {true, 1.0};
  t.fracture[static_cast<size_t>(kTagLeft)] = {false, 0.0};
  t.fracture[static_cast<size_t>(kTagRight)] = {false, 0.0};
  return t;
}

PrimalSpace build_primal_space(const MixedMesh& mm) {
  PrimalSpace sp;
  sp.layout.reserve(mm.meshes.size());
  sp.offset.reserve(mm.meshes.size());
  for (const SimplicialMesh& m : mm.meshes) {
    sp.layout.push_back(block_layout(m, 0, sp.spec));
    sp.offset.push_back(sp.total);
    sp.total += sp.layout.back().size;
  }
  return sp;
}

PrimalSolution solve_primal(const MixedMesh& mm, const ModelCoefficients& mc) {
  const StratifiedGeometry& g = mm.geometry;
  PrimalSolution sol;
  sol.space = build_primal_space(mm);
  const PrimalSpace& sp = sol.space;

  std::vector<Trip> trips;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(sp.total);
  std::vector<int> dofs;

  for (const Subdomain& sub : g.subdomains) {
    const SimplicialMesh& m = mm.meshes[static_cast<size_t>(sub.id)];
    const BlockLayout& L = sp.layout[static_cast<size_t>(sub.id)];
    const int off = sp.offset[static_cast<size_t>(sub.id)];
    if (sub.dim == 2) {
      const Eigen::Matrix2d K = mc.tensor_for(sub.id);
      double val[3];
      Point2 grad[3];
      for (int c = 0; c < m.num_cells(); ++c) {
        eval_scalar_basis(m, sp.spec, c, 1.0 / 3, 1.0 / 3, val, grad);
        cell_block_dofs(m, L, c, dofs);
        const double meas = m.cell_measure(c);
        for (int i = 0; i < 3; ++i) {
          const Eigen::Vector2d kg = K * Eigen::Vector2d(grad[i].x, grad[i].y);
          for (int j = 0; j < 3; ++j)
            trips.emplace_back(off + dofs[static_cast<size_t>(i)], off + dofs[static_cast<size_t>(j)],
                               meas * (kg[0] * grad[j].x + kg[1] * grad[j].y));
        }
        if (mc.source) {
          const Point2 a = m.vertices[static_cast<size_t>(m.cells[static_cast<size_t>(c)][0])];
          const Point2 b = m.vertices[static_cast<size_t>(m.cells[static_cast<size_t>(c)][1])];
          const Point2 d = m.vertices[static_cast<size_t>(m.cells[static_cast<size_t>(c)][2])];
          for (const auto& qp : triangle_rule()) {
            const Point2 p{a.x + qp.x * (b.x - a.x) + qp.y * (d.x - a.x),
                           a.y + qp.x * (b.y - a.y) + qp.y * (d.y - a.y)};
            eval_scalar_basis(m, sp.spec, c, qp.x, qp.y, val, nullptr);
            for (int i = 0; i < 3; ++i)
              rhs[off + dofs[static_cast<size_t>(i)]] += qp.w * 2.0 * meas * mc.source(p) * val[i];
          }
        }
      }
    } else if (sub.dim == 1) {
      const double eps = sub.aperture;
      for (int c = 0; c < m.num_cells(); ++c) {
        cell_block_dofs(m, L, c, dofs);
        const double h = m.cell_measure(c);
        const double w = eps * mc.k_tangent / h;
        const int d0 = off + dofs[0], d1 = off + dofs[1];
        trips.emplace_back(d0, d0, w);
        trips.emplace_back(d1, d1, w);
        trips.emplace_back(d0, d1, -w);
        trips.emplace_back(d1, d0, -w);
      }
    }
  }

  // Interface gap terms, lumped at facet endpoints.
  for (const TraceMap& tm : mm.traces) {
    const Subdomain& lower = g.sub(tm.lower);
    const SimplicialMesh& lom = mm.meshes[static_cast<size_t>(tm.lower)];
    const SimplicialMesh& upm = mm.meshes[static_cast<size_t>(tm.upper)];
    const BlockLayout& Llo = sp.layout[static_cast<size_t>(tm.lower)];
    const BlockLayout& Lup = sp.layout[static_cast<size_t>(tm.upper)];
    const int off_lo = sp.offset[static_cast<size_t>(tm.lower)];
    const int off_up = sp.offset[static_cast<size_t>(tm.upper)];
    if (lower.dim == 1) {
      const double coef = 2.0 * mc.k_normal / lower.aperture;
      for (const TraceFacetPair& pr : tm.pairs) {
        const int flo = upm.edges[static_cast<size_t>(pr.facet)][0];
        const int fhi = upm.edges[static_cast<size_t>(pr.facet)][1];
        const Point2 a = upm.vertices[static_cast<size_t>(flo)];
        const Point2 b = upm.vertices[static_cast<size_t>(fhi)];
        const double len = std::sqrt(dot(b - a, b - a));
        const auto& cv = lom.cells[static_cast<size_t>(pr.cell)];
        for (int fv : {flo, fhi}) {
          const Point2 p = upm.vertices[static_cast<size_t>(fv)];
          int lv = -1;
          for (int cand : {cv[0], cv[1]})
            if (same_point(lom.vertices[static_cast<size_t>(cand)], p)) lv = cand;
          if (lv < 0) throw std::runtime_error("interface vertices do not coincide");
          const double w = coef * 0.5 * len;
          const int B = off_up + Lup.vertex_base + fv;
          const int bb = off_lo + Llo.vertex_base + lv;
          trips.emplace_back(B, B, w);
          trips.emplace_back(bb, bb, w);
          trips.emplace_back(B, bb, -w);
          trips.emplace_back(bb, B, -w);
        }
      }
    } else {
      const double coef = 2.0 * mc.k_normal;
      const TraceFacetPair& pr = tm.pairs.front();
      const int B = off_up + Lup.vertex_base + pr.facet;
      const int bb = off_lo + Llo.vertex_base;
      trips.emplace_back(B, B, coef);
      trips.emplace_back(bb, bb, coef);
      trips.emplace_back(B, bb, -coef);
      trips.emplace_back(bb, B, -coef);
    }
  }

  // Essential pressure values.
  std::vector<char> fixed(static_cast<size_t>(sp.total), 0);
  Eigen::VectorXd values = Eigen::VectorXd::Zero(sp.total);
  for (const Subdomain& sub : g.subdomains) {
    const SimplicialMesh& m = mm.meshes[static_cast<size_t>(sub.id)];
    const BlockLayout& L = sp.layout[static_cast<size_t>(sub.id)];
    const int off = sp.offset[static_cast<size_t>(sub.id)];
    if (sub.dim == 2) {
      for (int e = 0; e < m.num_edges(); ++e) {
        const int tag = m.boundary_tag[static_cast<size_t>(e)];
        if (tag < 0 || tag >= 4 || !mc.bc.bulk[static_cast<size_t>(tag)].is_pressure) continue;
        for (int v : m.edges[static_cast<size_t>(e)]) {
          fixed[static_cast<size_t>(off + L.vertex_base + v)] = 1;
          values[off + L.vertex_base + v] = mc.bc.bulk[static_cast<size_t>(tag)].value;
        }
      }
    } else if (sub.dim == 1) {
      for (int v : {0, m.num_vertices() - 1}) {
        const int tag = m.boundary_tag[static_cast<size_t>(v)];
        if (tag < 0 || tag >= 4 || !mc.bc.fracture[static_cast<size_t>(tag)].is_pressure) continue;
        fixed[static_cast<size_t>(off + L.vertex_base + v)] = 1;
        values[off + L.vertex_base + v] = mc.bc.fracture[static_cast<size_t>(tag)].value;
      }
    }
  }

  eliminate(trips, rhs, fixed, values);
  SpMat A(sp.total, sp.total);
  A.setFromTriplets(trips.begin(), trips.end());
  Eigen::SimplicialLDLT<SpMat> solver(A);
  if (solver.info() != Eigen::Success) throw std::runtime_error("primal factorization failed");
  sol.p = solver.solve(rhs);
  sol.residual = relative_residual(A, sol.p, rhs);
  return sol;
}

MixedSolution solve_mixed(const MixedMesh& mm, const MixedComplex& cx, const ModelCoefficients& mc) {
  const StratifiedGeometry& g = mm.geometry;
  const int n1 = cx.space[1].total;
  const int n2 = cx.space[2].total;
  const int n = n1 + n2;

  std::vector<Trip> trips;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  std::vector<int> dofs;

  // Flux-flux block.
  for (const Subdomain& sub : g.subdomains) {
    if (!cx.space[1].block[static_cast<size_t>(sub.id)]) continue;
    const SimplicialMesh& m = mm.meshes[static_cast<size_t>(sub.id)];
    const BlockLayout& L = *cx.space[1].block[static_cast<size_t>(sub.id)];
    const int off = cx.space[1].offset[static_cast<size_t>(sub.id)];
    const SpaceSpec spec = *cx.assignment.spec[static_cast<size_t>(sub.id)][1];
    if (sub.dim == 2) {
      const Eigen::Matrix2d Kinv = mc.tensor_for(sub.id).inverse();
      const int nd = local_dof_count(2, 1, spec);
      Point2 val[6];
      for (int c = 0; c < m.num_cells(); ++c) {
        cell_block_dofs(m, L, c, dofs);
        const double meas = m.cell_measure(c);
        for (const auto& qp : triangle_rule()) {
          eval_flux_basis(m, spec, c, qp.x, qp.y, val, nullptr);
          for (int i = 0; i < nd; ++i) {
            const Eigen::Vector2d kv = Kinv * Eigen::Vector2d(val[i].x, val[i].y);
            for (int j = 0; j < nd; ++j)
              trips.emplace_back(off + dofs[static_cast<size_t>(i)], off + dofs[static_cast<size_t>(j)],
                                 qp.w * 2.0 * meas * (kv[0] * val[j].x + kv[1] * val[j].y));
          }
        }
      }
    } else if (sub.dim == 1) {
      const double w0 = 1.0 / (sub.aperture * mc.k_tangent);
      const int nd = local_dof_count(1, 0, spec);
      double val[3];
      for (int c = 0; c < m.num_cells(); ++c) {
        cell_block_dofs(m, L, c, dofs);
        const double h = m.cell_measure(c);
        for (const auto& qp : segment_rule()) {
          eval_scalar_basis(m, spec, c, qp.x, 0, val, nullptr);
          for (int i = 0; i < nd; ++i)
            for (int j = 0; j < nd; ++j)
              trips.emplace_back(off + dofs[static_cast<size_t>(i)], off + dofs[static_cast<size_t>(j)],
                                 qp.w * h * w0 * val[i] * val[j]);
        }
      }
    }
  }

  // Gap Robin terms.
  for (const TraceMap& tm : mm.traces) {
    const Subdomain& lower = g.sub(tm.lower);
    const SimplicialMesh& upm = mm.meshes[static_cast<size_t>(tm.upper)];
    if (!cx.space[1].block[static_cast<size_t>(tm.upper)]) continue;
    const BlockLayout& Lup = *cx.space[1].block[static_cast<size_t>(tm.upper)];
    const int off_up = cx.space[1].offset[static_cast<size_t>(tm.upper)];
    if (lower.dim == 1) {
      const double coef = lower.aperture / (2.0 * mc.k_normal);
      const int pe = Lup.counts.per_edge;
      for (const TraceFacetPair& pr : tm.pairs) {
        const Point2 a = upm.vertices[static_cast<size_t>(upm.edges[static_cast<size_t>(pr.facet)][0])];
        const Point2 b = upm.vertices[static_cast<size_t>(upm.edges[static_cast<size_t>(pr.facet)][1])];
        const double len = std::sqrt(dot(b - a, b - a));
        const int q0 = off_up + Lup.edge_base + pr.facet * pe;
        trips.emplace_back(q0, q0, coef / len);
        if (pe >= 2) trips.emplace_back(q0 + 1, q0 + 1, coef / (12.0 * len));
      }
    } else {
      const double coef = 1.0 / (2.0 * mc.k_normal);
      const TraceFacetPair& pr = tm.pairs.front();
      const int dof = off_up + Lup.vertex_base + pr.facet;
      trips.emplace_back(dof, dof, coef);
    }
  }

  // Divergence coupling: -(M2 D1) and its transpose.
  const SpMat B = cx.M[2] * cx.D[1];
  for (int o = 0; o < B.outerSize(); ++o)
    for (SpMat::InnerIterator it(B, o); it; ++it) {
      trips.emplace_back(n1 + static_cast<int>(it.row()), static_cast<int>(it.col()), -it.value());
      trips.emplace_back(static_cast<int>(it.col()), n1 + static_cast<int>(it.row()), -it.value());
    }

  // Natural pressure data on bulk sides.
  for (const Subdomain& sub : g.subdomains) {
    if (sub.dim != 2 || !cx.space[1].block[static_cast<size_t>(sub.id)]) continue;
    const SimplicialMesh& m = mm.meshes[static_cast<size_t>(sub.id)];
    const BlockLayout& L = *cx.space[1].block[static_cast<size_t>(sub.id)];
    const int off = cx.space[1].offset[static_cast<size_t>(sub.id)];
    for (int e = 0; e < m.num_edges(); ++e) {
      const int tag = m.boundary_tag[static_cast<size_t>(e)];
      if (tag < 0 || tag >= 4 || !mc.bc.bulk[static_cast<size_t>(tag)].is_pressure) continue;
      const double pd = mc.bc.bulk[static_cast<size_t>(tag)].value;
      const int cell = m.edge_cells[static_cast<size_t>(e)][0];
      const int k = local_edge_index(m, cell, e);
      const int sgn = m.cell_edge_outward[static_cast<size_t>(cell)][static_cast<size_t>(k)];
      rhs[off + L.edge_base + e * L.counts.per_edge] -= pd * sgn;
    }
  }
  // Natural pressure data at fracture tips.
  for (const Subdomain& sub : g.subdomains) {
    if (sub.dim != 1 || !cx.space[1].block[static_cast<size_t>(sub.id)]) continue;
    const SimplicialMesh& m = mm.meshes[static_cast<size_t>(sub.id)];
    const BlockLayout& L = *cx.space[1].block[static_cast<size_t>(sub.id)];
    const int off = cx.space[1].offset[static_cast<size_t>(sub.id)];
    const int last = m.num_vertices() - 1;
    for (int v : {0, last}) {
      const int tag = m.boundary_tag[static_cast<size_t>(v)];
      if (tag < 0 || tag >= 4 || !mc.bc.fracture[static_cast<size_t>(tag)].is_pressure) continue;
      const double sigma = (v == last) ? 1.0 : -1.0;
      rhs[off + L.vertex_base + v] -= mc.bc.fracture[static_cast<size_t>(tag)].value * sigma;
    }
  }

  // Source: rhs of the conservation rows is -M2 * (projected source).
  Eigen::VectorXd proj_f = Eigen::VectorXd::Zero(n2);
  if (mc.source) {
    for (const Subdomain& sub : g.subdomains) {
      if (sub.dim != 2 || !cx.space[2].block[static_cast<size_t>(sub.id)]) continue;
      const SpaceSpec spec = *cx.assignment.spec[static_cast<size_t>(sub.id)][2];
      const Eigen::VectorXd loc =
          interpolate_density(mm.meshes[static_cast<size_t>(sub.id)], spec, mc.source);
      proj_f.segment(cx.space[2].offset[static_cast<size_t>(sub.id)], loc.size()) = loc;
    }
  }
  rhs.segment(n1, n2) -= cx.M[2] * proj_f;

  // No-flow sides are essential for the flux.
  std::vector<char> fixed(static_cast<size_t>(n), 0);
  for (const Subdomain& sub : g.subdomains) {
    if (!cx.space[1].block[static_cast<size_t>(sub.id)]) continue;
    const SimplicialMesh& m = mm.meshes[static_cast<size_t>(sub.id)];
    const BlockLayout& L = *cx.space[1].block[static_cast<size_t>(sub.id)];
    const int off = cx.space[1].offset[static_cast<size_t>(sub.id)];
    if (sub.dim == 2) {
      for (int e = 0; e < m.num_edges(); ++e) {
        const int tag = m.boundary_tag[static_cast<size_t>(e)];
        if (tag < 0 || tag >= 4 || mc.bc.bulk[static_cast<size_t>(tag)].is_pressure) continue;
        for (int c = 0; c < L.counts.per_edge; ++c)
          fixed[static_cast<size_t>(off + L.edge_base + e * L.counts.per_edge + c)] = 1;
      }
    } else if (sub.dim == 1) {
      const int last = m.num_vertices() - 1;
      for (int v : {0, last}) {
        const int tag = m.boundary_tag[static_cast<size_t>(v)];
        if (tag < 0 || tag >= 4 || mc.bc.fracture[static_cast<size_t>(tag)].is_pressure) continue;
        fixed[static_cast<size_t>(off + L.vertex_base + v)] = 1;
      }
    }
  }

  Eigen::VectorXd values = Eigen::VectorXd::Zero(n);
  eliminate(trips, rhs, fixed, values);
  SpMat S(n, n);
  S.setFromTriplets(trips.begin(), trips.end());
  S.makeCompressed();
  Eigen::SparseLU<SpMat> solver;
  solver.analyzePattern(S);
  solver.factorize(S);
  if (solver.info() != Eigen::Success) throw std::runtime_error("mixed factorization failed");
  const Eigen::VectorXd x = solver.solve(rhs);

  MixedSolution sol;
  sol.flux = x.head(n1);
  sol.pressure = x.tail(n2);
  sol.residual = relative_residual(S, x, rhs);
  const Eigen::VectorXd cons = cx.D[1] * sol.flux - proj_f;
  sol.conservation_inf = cons.size() > 0 ? cons.lpNorm<Eigen::Infinity>() : 0.0;
  return sol;
}

double interface_jump_measure_mixed(const MixedMesh& mm, const MixedComplex& cx,
                                    const ModelCoefficients& mc, const MixedSolution& sol) {
  const StratifiedGeometry& g = mm.geometry;
  double acc = 0;
  for (const TraceMap& tm : mm.traces) {
    const Subdomain& lower = g.sub(tm.lower);
    if (!cx.space[1].block[static_cast<size_t>(tm.upper)]) continue;
    const BlockLayout& Lup = *cx.space[1].block[static_cast<size_t>(tm.upper)];
    const int off_up = cx.space[1].offset[static_cast<size_t>(tm.upper)];
    const SimplicialMesh& upm = mm.meshes[static_cast<size_t>(tm.upper)];
    if (lower.dim == 1) {
      const double coef = lower.aperture / (2.0 * mc.k_normal);
      const int pe = Lup.counts.per_edge;
      for (const TraceFacetPair& pr : tm.pairs) {
        const Point2 a = upm.vertices[static_cast<size_t>(upm.edges[static_cast<size_t>(pr.facet)][0])];
        const Point2 b = upm.vertices[static_cast<size_t>(upm.edges[static_cast<size_t>(pr.facet)][1])];
        const double len = std::sqrt(dot(b - a, b - a));
        const double q0 = sol.flux[off_up + Lup.edge_base + pr.facet * pe];
        const double q1 = pe >= 2 ? sol.flux[off_up + Lup.edge_base + pr.facet * pe + 1] : 0.0;
        acc += coef * coef * (q0 * q0 + q1 * q1 / 12.0) / len;
      }
    } else {
      const double coef = 1.0 / (2.0 * mc.k_normal);
      const TraceFacetPair& pr = tm.pairs.front();
      const double u = sol.flux[off_up + Lup.vertex_base + pr.facet];
      acc += coef * coef * u * u;
    }
  }
  return std::sqrt(acc);
}

double interface_jump_measure_primal(const MixedMesh& mm, const ModelCoefficients& mc,
                                     const PrimalSolution& sol) {
  (void)mc;
  const StratifiedGeometry& g = mm.geometry;
  const PrimalSpace& sp = sol.space;
  double acc = 0;
  for (const TraceMap& tm : mm.traces) {
    const Subdomain& lower = g.sub(tm.lower);
    const SimplicialMesh& upm = mm.meshes[static_cast<size_t>(tm.upper)];
    const SimplicialMesh& lom = mm.meshes[static_cast<size_t>(tm.lower)];
    const Eigen::VectorXd up_coeff = sol.p.segment(sp.offset[static_cast<size_t>(tm.upper)],
                                                   sp.layout[static_cast<size_t>(tm.upper)].size);
    const Eigen::VectorXd lo_coeff = sol.p.segment(sp.offset[static_cast<size_t>(tm.lower)],
                                                   sp.layout[static_cast<size_t>(tm.lower)].size);
    if (lower.dim == 1) {
      for (const TraceFacetPair& pr : tm.pairs) {
        const Point2 a = upm.vertices[static_cast<size_t>(upm.edges[static_cast<size_t>(pr.facet)][0])];
        const Point2 b = upm.vertices[static_cast<size_t>(upm.edges[static_cast<size_t>(pr.facet)][1])];
        const double len = std::sqrt(dot(b - a, b - a));
        const int cu = upm.edge_cells[static_cast<size_t>(pr.facet)][0];
        const auto& cv = lom.cells[static_cast<size_t>(pr.cell)];
        const Point2 c0 = lom.vertices[static_cast<size_t>(cv[0])];
        const Point2 c1 = lom.vertices[static_cast<size_t>(cv[1])];
        const double hlo = std::sqrt(dot(c1 - c0, c1 - c0));
        for (const auto& qp : segment_rule()) {
          const Point2 p{a.x + qp.x * (b.x - a.x), a.y + qp.x * (b.y - a.y)};
          double r0, r1;
          ref_of(upm, cu, p, r0, r1);
          const double pb = evaluate_scalar_field(upm, sp.spec, sp.layout[static_cast<size_t>(tm.upper)],
                                                  up_coeff, cu, r0, r1);
          const double t = (dot(p - c0, c1 - c0)) / (hlo * hlo);
          const double pf = evaluate_scalar_field(lom, sp.spec, sp.layout[static_cast<size_t>(tm.lower)],
                                                  lo_coeff, pr.cell, t, 0);
          acc += qp.w * len * (pb - pf) * (pb - pf);
        }
      }
    } else {
      const TraceFacetPair& pr = tm.pairs.front();
      const double pf = up_coeff[sp.layout[static_cast<size_t>(tm.upper)].vertex_base + pr.facet];
      const double pn = lo_coeff[0];
      acc += (pf - pn) * (pf - pn);
    }
  }
  return std::sqrt(acc);
}

double infsup_witness(const MixedComplex& cx) {
  const Eigen::MatrixXd M1(cx.M[1]);
  const Eigen::MatrixXd M2(cx.M[2]);
  const Eigen::MatrixXd D1(cx.D[1]);
  const Eigen::MatrixXd B = M2 * D1;
  const Eigen::MatrixXd W = M1 + D1.transpose() * M2 * D1;
  const Eigen::MatrixXd S = B * W.llt().solve(B.transpose());
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (S + S.transpose()), M2);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigen solve failed");
  return std::sqrt(std::max(0.0, es.eigenvalues()[0]));
}

}  // namespace mdfem
