#include "mdfem/derham.hpp"

#include <Eigen/OrderingMethods>
#include <Eigen/SparseQR>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>

#include "mdfem/quadrature.hpp"

namespace mdfem {

namespace {

using Trip = Eigen::Triplet<double>;

constexpr double kMatchTol = 1e-12;

bool same_point(Point2 p, Point2 q) {
  return std::abs(p.x - q.x) <= kMatchTol && std::abs(p.y - q.y) <= kMatchTol;
}

int find_vertex(const SimplicialMesh& m, Point2 p) {
  for (int v = 0; v < m.num_vertices(); ++v)
    if (same_point(m.vertices[static_cast<size_t>(v)], p)) return v;
  throw std::runtime_error("no mesh vertex at the requested point");
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

struct Block {
  bool present = false;
  SpaceSpec spec{};
  BlockLayout layout{};
  int offset = 0;
};

Block block_of(const MixedComplex& cx, int sub, int k) {
  Block b;
  const auto& slot = cx.assignment.spec[static_cast<size_t>(sub)][static_cast<size_t>(k)];
  if (!slot || !cx.space[static_cast<size_t>(k)].block[static_cast<size_t>(sub)]) return b;
  b.present = true;
  b.spec = *slot;
  b.layout = *cx.space[static_cast<size_t>(k)].block[static_cast<size_t>(sub)];
  b.offset = cx.space[static_cast<size_t>(k)].offset[static_cast<size_t>(sub)];
  return b;
}

// Local exterior derivative of one subdomain's block, degree k -> k+1.
// All entries are integers by the choice of dof functionals.
void assemble_local_d(const SimplicialMesh& m, const Block& src, const Block& tgt, int ell_src,
                      std::vector<Trip>& out) {
  if (m.dim == 2 && ell_src == 0) {
    // Gradient (as flux proxy): per edge, q0 = p(hi) - p(lo) and, when the
    // target carries first moments and the source midpoint values,
    // q1 = 4 p(lo) - 8 p(mid) + 4 p(hi).
    const int pe_t = tgt.layout.counts.per_edge;
    for (int e = 0; e < m.num_edges(); ++e) {
      const int lo = m.edges[static_cast<size_t>(e)][0];
      const int hi = m.edges[static_cast<size_t>(e)][1];
      const int row0 = tgt.offset + tgt.layout.edge_base + e * pe_t;
      const int col_lo = src.offset + src.layout.vertex_base + lo;
      const int col_hi = src.offset + src.layout.vertex_base + hi;
      out.emplace_back(row0, col_hi, 1.0);
      out.emplace_back(row0, col_lo, -1.0);
      if (pe_t >= 2 && src.layout.counts.per_edge >= 1) {
        const int col_mid = src.offset + src.layout.edge_base + e;
        out.emplace_back(row0 + 1, col_lo, 4.0);
        out.emplace_back(row0 + 1, col_hi, 4.0);
        out.emplace_back(row0 + 1, col_mid, -8.0);
      }
    }
  } else if (m.dim == 2 && ell_src == 1) {
    // Divergence: cell integral = signed sum of the edge mean-flux dofs.
    const int pe_s = src.layout.counts.per_edge;
    for (int c = 0; c < m.num_cells(); ++c) {
      const int row = tgt.offset + tgt.layout.cell_base + c;
      for (int k = 0; k < 3; ++k) {
        const int e = m.cell_edges[static_cast<size_t>(c)][static_cast<size_t>(k)];
        const int sgn = m.cell_edge_outward[static_cast<size_t>(c)][static_cast<size_t>(k)];
        out.emplace_back(row, src.offset + src.layout.edge_base + e * pe_s, double(sgn));
      }
    }
  } else if (m.dim == 1 && ell_src == 0) {
    // Tangential derivative: per cell, c0 = p(end) - p(start) and, with
    // midpoint values available, c1 = 4 p(start) - 8 p(mid) + 4 p(end).
    const int pc_t = tgt.layout.counts.per_cell;
    for (int c = 0; c < m.num_cells(); ++c) {
      const int v0 = m.cells[static_cast<size_t>(c)][0];
      const int v1 = m.cells[static_cast<size_t>(c)][1];
      const int row0 = tgt.offset + tgt.layout.cell_base + c * pc_t;
      const int col0 = src.offset + src.layout.vertex_base + v0;
      const int col1 = src.offset + src.layout.vertex_base + v1;
      out.emplace_back(row0, col1, 1.0);
      out.emplace_back(row0, col0, -1.0);
      if (pc_t >= 2 && src.layout.counts.per_cell >= 1) {
        const int col_mid = src.offset + src.layout.cell_base + c;
        out.emplace_back(row0 + 1, col0, 4.0);
        out.emplace_back(row0 + 1, col1, 4.0);
        out.emplace_back(row0 + 1, col_mid, -8.0);
      }
    }
  }
}

}  // namespace

MixedComplex assemble_complex(const MixedMesh& mm, const SpaceAssignment& a) {
  {
    const auto issues = check_compatibility(mm.geometry, a);
    if (!issues.empty())
      throw std::invalid_argument("incompatible space assignment: " + issues.front().what +
                                  " (subdomain " + std::to_string(issues.front().subdomain) +
                                  ", degree " + std::to_string(issues.front().degree) + ")");
  }
  MixedComplex cx;
  cx.mesh = &mm;
  cx.assignment = a;
  const StratifiedGeometry& g = mm.geometry;
  const int nsub = static_cast<int>(g.subdomains.size());

  for (int k = 0; k <= 2; ++k) {
    DegreeSpace& sp = cx.space[static_cast<size_t>(k)];
    sp.block.resize(static_cast<size_t>(nsub));
    sp.offset.assign(static_cast<size_t>(nsub), -1);
    for (int i = 0; i < nsub; ++i) {
      const auto& slot = a.spec[static_cast<size_t>(i)][static_cast<size_t>(k)];
      if (!slot) continue;
      const int ell = local_degree(k, g.sub(i).dim);
      sp.block[static_cast<size_t>(i)] = block_layout(mm.meshes[static_cast<size_t>(i)], ell, *slot);
      sp.offset[static_cast<size_t>(i)] = sp.total;
      sp.total += sp.block[static_cast<size_t>(i)]->size;
    }
  }

  // Differentials.
  for (int k = 0; k <= 1; ++k) {
    std::vector<Trip> local_trips, jump_trips;
    std::map<std::pair<int, int>, double> nodal_jump;  // set-once scalar matchings
    for (int i = 0; i < nsub; ++i) {
      const Block src = block_of(cx, i, k);
      const Block tgt = block_of(cx, i, k + 1);
      if (src.present && tgt.present)
        assemble_local_d(mm.meshes[static_cast<size_t>(i)], src, tgt,
                         local_degree(k, g.sub(i).dim), local_trips);
    }
    for (int i = 0; i < nsub; ++i) {
      const Block tgt = block_of(cx, i, k + 1);
      if (!tgt.present) continue;
      const int d_i = g.sub(i).dim;
      const double pref = ((d_i + k) % 2 == 0) ? 1.0 : -1.0;
      for (int s = 0; s < static_cast<int>(g.up[static_cast<size_t>(i)].size()); ++s) {
        const UpNeighbor& un = g.up[static_cast<size_t>(i)][static_cast<size_t>(s)];
        const Block src = block_of(cx, un.neighbor, k);
        if (!src.present) continue;
        const double c = pref * un.sign;
        const SimplicialMesh& upm = mm.meshes[static_cast<size_t>(un.neighbor)];
        const SimplicialMesh& lom = mm.meshes[static_cast<size_t>(i)];
        const TraceMap& tmap = mm.trace_for(i, s);
        const int ell_t = local_degree(k + 1, d_i);
        if (d_i == 1 && ell_t == 1) {
          // Flux pullback onto the line: cell mean gets the oriented edge
          // flux, the first moment carries over orientation-free.
          const int pe = src.layout.counts.per_edge;
          const int pc = tgt.layout.counts.per_cell;
          for (const TraceFacetPair& pr : tmap.pairs) {
            const int row0 = tgt.offset + tgt.layout.cell_base + pr.cell * pc;
            const int col0 = src.offset + src.layout.edge_base + pr.facet * pe;
            jump_trips.emplace_back(row0, col0, c * pr.sign);
            if (pc >= 2 && pe >= 2) jump_trips.emplace_back(row0 + 1, col0 + 1, c);
          }
        } else if (d_i == 1 && ell_t == 0) {
          // Scalar trace: nodal matching (each matching written once).
          for (const TraceFacetPair& pr : tmap.pairs) {
            const int flo = upm.edges[static_cast<size_t>(pr.facet)][0];
            const int fhi = upm.edges[static_cast<size_t>(pr.facet)][1];
            const auto& cv = lom.cells[static_cast<size_t>(pr.cell)];
            for (int fv : {flo, fhi}) {
              const Point2 p = upm.vertices[static_cast<size_t>(fv)];
              int lv = -1;
              for (int cand : {cv[0], cv[1]})
                if (same_point(lom.vertices[static_cast<size_t>(cand)], p)) lv = cand;
              if (lv < 0) throw std::runtime_error("interface vertices do not coincide");
              nodal_jump[{tgt.offset + tgt.layout.vertex_base + lv,
                          src.offset + src.layout.vertex_base + fv}] = c;
            }
            if (tgt.layout.counts.per_cell >= 1) {
              const int row = tgt.offset + tgt.layout.cell_base + pr.cell;
              if (src.layout.counts.per_edge >= 1) {
                nodal_jump[{row, src.offset + src.layout.edge_base + pr.facet}] = c;
              } else {
                nodal_jump[{row, src.offset + src.layout.vertex_base + flo}] = 0.5 * c;
                nodal_jump[{row, src.offset + src.layout.vertex_base + fhi}] = 0.5 * c;
              }
            }
          }
        } else if (d_i == 0) {
          // Point trace of a line scalar: endpoint value.
          const TraceFacetPair& pr = tmap.pairs.front();
          jump_trips.emplace_back(tgt.offset + tgt.layout.vertex_base,
                                  src.offset + src.layout.vertex_base + pr.facet, c);
        }
      }
    }
    for (const auto& kv : nodal_jump) jump_trips.emplace_back(kv.first.first, kv.first.second, kv.second);
    const int rows = cx.space[static_cast<size_t>(k + 1)].total;
    const int cols = cx.space[static_cast<size_t>(k)].total;
    cx.D_local[static_cast<size_t>(k)].resize(rows, cols);
    cx.D_local[static_cast<size_t>(k)].setFromTriplets(local_trips.begin(), local_trips.end());
    cx.D_jump[static_cast<size_t>(k)].resize(rows, cols);
    cx.D_jump[static_cast<size_t>(k)].setFromTriplets(jump_trips.begin(), jump_trips.end());
    cx.D[static_cast<size_t>(k)] = cx.D_local[static_cast<size_t>(k)] + cx.D_jump[static_cast<size_t>(k)];
  }

  // Inner products: own L2 terms plus trace terms onto every subdomain in
  // the closure on which the pullback is defined.
  for (int k = 0; k <= 2; ++k) {
    std::vector<Trip> trips;
    std::vector<int> dofs;
    for (int i = 0; i < nsub; ++i) {
      const Block b = block_of(cx, i, k);
      if (!b.present) continue;
      const SimplicialMesh& m = mm.meshes[static_cast<size_t>(i)];
      const int ell = local_degree(k, g.sub(i).dim);
      const int nd = local_dof_count(m.dim, ell, b.spec);
      if (ell == 0) {
        double val[6];
        for (int cell = 0; cell < m.num_cells(); ++cell) {
          cell_block_dofs(m, b.layout, cell, dofs);
          const double meas = m.cell_measure(cell);
          if (m.dim == 2) {
            for (const auto& qp : triangle_rule()) {
              eval_scalar_basis(m, b.spec, cell, qp.x, qp.y, val, nullptr);
              for (int r = 0; r < nd; ++r)
                for (int cc = 0; cc < nd; ++cc)
                  trips.emplace_back(b.offset + dofs[static_cast<size_t>(r)],
                                     b.offset + dofs[static_cast<size_t>(cc)],
                                     qp.w * 2.0 * meas * val[r] * val[cc]);
            }
          } else if (m.dim == 1) {
            for (const auto& qp : segment_rule()) {
              eval_scalar_basis(m, b.spec, cell, qp.x, 0, val, nullptr);
              for (int r = 0; r < nd; ++r)
                for (int cc = 0; cc < nd; ++cc)
                  trips.emplace_back(b.offset + dofs[static_cast<size_t>(r)],
                                     b.offset + dofs[static_cast<size_t>(cc)],
                                     qp.w * meas * val[r] * val[cc]);
            }
          } else {
            trips.emplace_back(b.offset, b.offset, 1.0);
          }
        }
      } else if (ell == 1 && m.dim == 2) {
        Point2 val[6];
        for (int cell = 0; cell < m.num_cells(); ++cell) {
          cell_block_dofs(m, b.layout, cell, dofs);
          const double meas = m.cell_measure(cell);
          for (const auto& qp : triangle_rule()) {
            eval_flux_basis(m, b.spec, cell, qp.x, qp.y, val, nullptr);
            for (int r = 0; r < nd; ++r)
              for (int cc = 0; cc < nd; ++cc)
                trips.emplace_back(b.offset + dofs[static_cast<size_t>(r)],
                                   b.offset + dofs[static_cast<size_t>(cc)],
                                   qp.w * 2.0 * meas * dot(val[r], val[cc]));
          }
        }
      } else {
        // Densities: diagonal exact mass.
        for (int cell = 0; cell < m.num_cells(); ++cell) {
          const double meas = m.cell_measure(cell);
          const int pc = b.layout.counts.per_cell;
          if (m.dim == 0) {
            trips.emplace_back(b.offset + b.layout.cell_base, b.offset + b.layout.cell_base, 1.0);
            continue;
          }
          const int d0 = b.offset + b.layout.cell_base + cell * pc;
          trips.emplace_back(d0, d0, 1.0 / meas);
          if (pc >= 2) trips.emplace_back(d0 + 1, d0 + 1, 1.0 / (12.0 * meas));
        }
      }
    }
    // One-level trace terms.
    for (int i = 0; i < nsub; ++i) {
      const int d_i = g.sub(i).dim;
      for (int s = 0; s < static_cast<int>(g.up[static_cast<size_t>(i)].size()); ++s) {
        const int j = g.up[static_cast<size_t>(i)][static_cast<size_t>(s)].neighbor;
        const Block bj = block_of(cx, j, k);
        if (!bj.present) continue;
        const int ell_j = local_degree(k, g.sub(j).dim);
        if (ell_j > d_i) continue;  // pullback undefined
        const SimplicialMesh& upm = mm.meshes[static_cast<size_t>(j)];
        const TraceMap& tmap = mm.trace_for(i, s);
        if (d_i == 1 && ell_j == 0) {
          double val[6];
          const int nd = local_dof_count(2, 0, bj.spec);
          for (const TraceFacetPair& pr : tmap.pairs) {
            const int cu = upm.edge_cells[static_cast<size_t>(pr.facet)][0];
            cell_block_dofs(upm, bj.layout, cu, dofs);
            const Point2 a = upm.vertices[static_cast<size_t>(upm.edges[static_cast<size_t>(pr.facet)][0])];
            const Point2 bb = upm.vertices[static_cast<size_t>(upm.edges[static_cast<size_t>(pr.facet)][1])];
            const double len = std::sqrt(dot(bb - a, bb - a));
            for (const auto& qp : segment_rule()) {
              const Point2 p{a.x + qp.x * (bb.x - a.x), a.y + qp.x * (bb.y - a.y)};
              double r0, r1;
              ref_of(upm, cu, p, r0, r1);
              eval_scalar_basis(upm, bj.spec, cu, r0, r1, val, nullptr);
              for (int r = 0; r < nd; ++r)
                for (int cc = 0; cc < nd; ++cc)
                  trips.emplace_back(bj.offset + dofs[static_cast<size_t>(r)],
                                     bj.offset + dofs[static_cast<size_t>(cc)],
                                     qp.w * len * val[r] * val[cc]);
            }
          }
        } else if (d_i == 1 && ell_j == 1) {
          const int pe = bj.layout.counts.per_edge;
          for (const TraceFacetPair& pr : tmap.pairs) {
            const Point2 a = upm.vertices[static_cast<size_t>(upm.edges[static_cast<size_t>(pr.facet)][0])];
            const Point2 bb = upm.vertices[static_cast<size_t>(upm.edges[static_cast<size_t>(pr.facet)][1])];
            const double len = std::sqrt(dot(bb - a, bb - a));
            const int q0 = bj.offset + bj.layout.edge_base + pr.facet * pe;
            trips.emplace_back(q0, q0, 1.0 / len);
            if (pe >= 2) trips.emplace_back(q0 + 1, q0 + 1, 1.0 / (12.0 * len));
          }
        } else if (d_i == 0 && ell_j == 0) {
          const TraceFacetPair& pr = tmap.pairs.front();
          const int dof = bj.offset + bj.layout.vertex_base + pr.facet;
          trips.emplace_back(dof, dof, 1.0);
        }
      }
    }
    // Two-level trace terms: point values of bulk scalars at each point
    // subdomain, one term per bulk neighbour.
    for (int i = 0; i < nsub; ++i) {
      if (g.sub(i).dim != 0) continue;
      std::set<int> bulks;
      for (const auto& un : g.up[static_cast<size_t>(i)])
        for (const auto& un2 : g.up[static_cast<size_t>(un.neighbor)]) bulks.insert(un2.neighbor);
      for (int j : bulks) {
        const Block bj = block_of(cx, j, k);
        if (!bj.present) continue;
        if (local_degree(k, g.sub(j).dim) != 0) continue;
        const int v = find_vertex(mm.meshes[static_cast<size_t>(j)], g.sub(i).shape.a);
        const int dof = bj.offset + bj.layout.vertex_base + v;
        trips.emplace_back(dof, dof, 1.0);
      }
    }
    const int n = cx.space[static_cast<size_t>(k)].total;
    cx.M[static_cast<size_t>(k)].resize(n, n);
    cx.M[static_cast<size_t>(k)].setFromTriplets(trips.begin(), trips.end());
  }
  return cx;
}

Eigen::VectorXd codifferential_apply(const MixedComplex& cx, int k, const Eigen::VectorXd& v) {
  if (k < 1 || k > 2) throw std::invalid_argument("codifferential degree must be 1 or 2");
  const SpMat& Mk = cx.M[static_cast<size_t>(k)];
  const SpMat& Mm = cx.M[static_cast<size_t>(k - 1)];
  const SpMat& D = cx.D[static_cast<size_t>(k - 1)];
  Eigen::SimplicialLDLT<SpMat> solver(Mm);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("inner-product factorization failed");
  return solver.solve(D.transpose() * (Mk * v));
}

namespace {

int rank_of(const SpMat& A, bool sparse) {
  if (A.rows() == 0 || A.cols() == 0) return 0;
  if (!sparse) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr{Eigen::MatrixXd(A)};
    qr.setThreshold(1e-10);
    return static_cast<int>(qr.rank());
  }
  SpMat B = A;
  B.makeCompressed();
  Eigen::SparseQR<SpMat, Eigen::COLAMDOrdering<int>> qr;
  qr.setPivotThreshold(1e-8);
  qr.compute(B);
  if (qr.info() != Eigen::Success) throw std::runtime_error("sparse rank computation failed");
  return static_cast<int>(qr.rank());
}

}  // namespace

std::array<int, 3> cohomology_dims(const MixedComplex& cx, bool force_sparse) {
  int maxn = 0;
  for (int k = 0; k <= 2; ++k) maxn = std::max(maxn, cx.space[static_cast<size_t>(k)].total);
  const bool sparse = force_sparse || maxn > 5000;
  const int r0 = rank_of(cx.D[0], sparse);
  const int r1 = rank_of(cx.D[1], sparse);
  std::array<int, 3> h{};
  h[0] = cx.space[0].total - r0;
  h[1] = (cx.space[1].total - r1) - r0;
  h[2] = cx.space[2].total - r1;
  return h;
}

HelmholtzParts helmholtz_decompose(const MixedComplex& cx, int k, const Eigen::VectorXd& v) {
  const int n = cx.space[static_cast<size_t>(k)].total;
  HelmholtzParts parts;
  parts.exact = Eigen::VectorXd::Zero(n);
  parts.coexact = Eigen::VectorXd::Zero(n);
  const Eigen::MatrixXd Md(cx.M[static_cast<size_t>(k)]);
  Eigen::LLT<Eigen::MatrixXd> llt(Md);
  if (llt.info() != Eigen::Success) throw std::runtime_error("inner product is not positive definite");
  const Eigen::MatrixXd L = llt.matrixL();
  if (k >= 1 && cx.space[static_cast<size_t>(k - 1)].total > 0) {
    const Eigen::MatrixXd Dd(cx.D[static_cast<size_t>(k - 1)]);
    const Eigen::MatrixXd A = L.transpose() * Dd;
    // A is rank deficient (the differential has a kernel); only a complete
    // orthogonal decomposition yields a genuine least-squares minimizer.
    const Eigen::VectorXd b = A.completeOrthogonalDecomposition().solve(L.transpose() * v);
    parts.exact = Dd * b;
  }
  const Eigen::VectorXd r = v - parts.exact;
  if (k <= 1 && cx.space[static_cast<size_t>(k + 1)].total > 0) {
    const Eigen::MatrixXd Dk(cx.D[static_cast<size_t>(k)]);
    const Eigen::MatrixXd Mup(cx.M[static_cast<size_t>(k + 1)]);
    const Eigen::MatrixXd B = Dk.transpose() * Mup;
    const Eigen::MatrixXd A = L.triangularView<Eigen::Lower>().solve(B);
    const Eigen::VectorXd rhs = L.triangularView<Eigen::Lower>().solve(Md * r);
    const Eigen::VectorXd c = A.completeOrthogonalDecomposition().solve(rhs);
    parts.coexact = llt.solve(B * c);
  }
  parts.harmonic = v - parts.exact - parts.coexact;
  return parts;
}

double poincare_estimate(const MixedComplex& cx, int k) {
  const int n = cx.space[static_cast<size_t>(k)].total;
  if (n == 0) throw std::invalid_argument("empty space");
  const Eigen::MatrixXd Md(cx.M[static_cast<size_t>(k)]);
  Eigen::MatrixXd Ld = Eigen::MatrixXd::Zero(n, n);
  if (k <= 1 && cx.space[static_cast<size_t>(k + 1)].total > 0) {
    const Eigen::MatrixXd Dd(cx.D[static_cast<size_t>(k)]);
    const Eigen::MatrixXd Mup(cx.M[static_cast<size_t>(k + 1)]);
    Ld += Dd.transpose() * Mup * Dd;
  }
  if (k >= 1 && cx.space[static_cast<size_t>(k - 1)].total > 0) {
    const Eigen::MatrixXd Dm(cx.D[static_cast<size_t>(k - 1)]);
    const Eigen::MatrixXd Mdown(cx.M[static_cast<size_t>(k - 1)]);
    const Eigen::MatrixXd X = Mdown.llt().solve(Dm.transpose() * Md);
    Ld += X.transpose() * Mdown * X;
  }
  Ld = 0.5 * (Ld + Ld.transpose()).eval();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Ld, Md);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigen solve failed");
  const Eigen::VectorXd ev = es.eigenvalues();
  const double lam_max = ev[n - 1];
  const double thresh = 1e-8 * std::max(1.0, lam_max);
  for (int i = 0; i < n; ++i)
    if (ev[i] > thresh) return 1.0 / std::sqrt(ev[i]);
  throw std::runtime_error("no nonzero eigenvalue found");
}

void dump_matrix_coord(std::ostream& os, const SpMat& A) {
  SpMat B = A;
  B.makeCompressed();
  os << "coo " << B.rows() << " " << B.cols() << " " << B.nonZeros() << "\n";
  char buf[96];
  for (int o = 0; o < B.outerSize(); ++o)
    for (SpMat::InnerIterator it(B, o); it; ++it) {
      std::snprintf(buf, sizeof buf, "%d %d %.17g\n", static_cast<int>(it.row()),
                    static_cast<int>(it.col()), it.value());
      os << buf;
    }
}

}  // namespace mdfem
