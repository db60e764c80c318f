#include "mdfem/elements.hpp"

#include <cmath>
#include <stdexcept>

#include "mdfem/quadrature.hpp"

namespace mdfem {

namespace {

[[noreturn]] void unsupported(int dim, int ell, SpaceSpec s) {
  throw std::invalid_argument("unsupported element: dim " + std::to_string(dim) + ", form degree " +
                              std::to_string(ell) + ", space " + to_string(s));
}

Point2 vertex_of(const SimplicialMesh& m, int cell, int k) {
  return m.vertices[static_cast<size_t>(m.cells[static_cast<size_t>(cell)][static_cast<size_t>(k)])];
}

// Coefficients of the dual basis of the flux element on a physical cell:
// column i holds the monomial coefficients of basis function i.  Monomials
// are (1,0), (0,1), (X,Y) for the reduced family and (1,0), (0,1), (X,0),
// (Y,0), (0,X), (0,Y) for the full family, with (X,Y) = x - centroid.
void flux_dual_basis(const SimplicialMesh& m, SpaceSpec s, int cell, Eigen::MatrixXd& coeff,
                     Point2& centroid, bool& full) {
  const SpaceSpec c = canonical_presentation(s, 1, 2);
  if (c.family == Family::Reduced && c.order == 1)
    full = false;
  else if (c.family == Family::Full && c.order == 1)
    full = true;
  else
    unsupported(2, 1, s);
  centroid = m.cell_centroid(cell);
  const int nd = full ? 6 : 3;
  auto mono = [&](int i, Point2 p) -> Point2 {
    const double X = p.x - centroid.x, Y = p.y - centroid.y;
    switch (i) {
      case 0: return {1, 0};
      case 1: return {0, 1};
      case 2: return full ? Point2{X, 0} : Point2{X, Y};
      case 3: return {Y, 0};
      case 4: return {0, X};
      default: return {0, Y};
    }
  };
  Eigen::MatrixXd A(nd, nd);
  for (int k = 0; k < 3; ++k) {
    const int e = m.cell_edges[static_cast<size_t>(cell)][static_cast<size_t>(k)];
    const Point2 lo = m.vertices[static_cast<size_t>(m.edges[static_cast<size_t>(e)][0])];
    const Point2 hi = m.vertices[static_cast<size_t>(m.edges[static_cast<size_t>(e)][1])];
    const Point2 t = hi - lo;
    const double len = std::sqrt(dot(t, t));
    const Point2 nu{t.y / len, -t.x / len};
    const Point2 mid{0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y)};
    for (int i = 0; i < nd; ++i) {
      // Exact for affine fields: q0 = |F| * v(mid).nu, q1 = |F| * (v(hi)-v(lo)).nu.
      const int row = full ? 2 * k : k;
      A(row, i) = len * dot(mono(i, mid), nu);
      if (full) A(row + 1, i) = len * (dot(mono(i, hi), nu) - dot(mono(i, lo), nu));
    }
  }
  coeff = A.partialPivLu().solve(Eigen::MatrixXd::Identity(nd, nd));
}

}  // namespace

DofCounts dof_counts(int dim, int ell, SpaceSpec s) {
  const SpaceSpec c = canonical_presentation(s, ell, dim);
  if (dim == 2) {
    if (ell == 0) {
      if (c.order == 1) return {1, 0, 0};
      if (c.order == 2) return {1, 1, 0};
    } else if (ell == 1) {
      if (c.family == Family::Reduced && c.order == 1) return {0, 1, 0};
      if (c.family == Family::Full && c.order == 1) return {0, 2, 0};
    } else if (ell == 2) {
      if (c.order == 1) return {0, 0, 1};
    }
  } else if (dim == 1) {
    if (ell == 0) {
      if (c.order == 1) return {1, 0, 0};
      if (c.order == 2) return {1, 0, 1};
    } else if (ell == 1) {
      if (c.order == 1) return {0, 0, 1};
      if (c.order == 2) return {0, 0, 2};
    }
  } else if (dim == 0 && ell == 0) {
    return {1, 0, 0};
  }
  unsupported(dim, ell, s);
}

BlockLayout block_layout(const SimplicialMesh& m, int ell, SpaceSpec s) {
  BlockLayout L;
  L.counts = dof_counts(m.dim, ell, s);
  L.nv = m.num_vertices();
  L.ne = m.dim == 2 ? m.num_edges() : 0;
  L.nc = m.num_cells();
  L.vertex_base = 0;
  L.edge_base = L.nv * L.counts.per_vertex;
  L.cell_base = L.edge_base + L.ne * L.counts.per_edge;
  L.size = L.cell_base + L.nc * L.counts.per_cell;
  return L;
}

void cell_block_dofs(const SimplicialMesh& m, const BlockLayout& L, int cell,
                     std::vector<int>& out) {
  out.clear();
  const auto& cv = m.cells[static_cast<size_t>(cell)];
  const int nvert = m.dim + 1;
  for (int k = 0; k < nvert; ++k)
    for (int c = 0; c < L.counts.per_vertex; ++c)
      out.push_back(L.vertex_base + cv[static_cast<size_t>(k)] * L.counts.per_vertex + c);
  if (m.dim == 2)
    for (int k = 0; k < 3; ++k) {
      const int e = m.cell_edges[static_cast<size_t>(cell)][static_cast<size_t>(k)];
      for (int c = 0; c < L.counts.per_edge; ++c)
        out.push_back(L.edge_base + e * L.counts.per_edge + c);
    }
  for (int c = 0; c < L.counts.per_cell; ++c)
    out.push_back(L.cell_base + cell * L.counts.per_cell + c);
}

int local_dof_count(int dim, int ell, SpaceSpec s) {
  const DofCounts c = dof_counts(dim, ell, s);
  if (dim == 2) return 3 * c.per_vertex + 3 * c.per_edge + c.per_cell;
  if (dim == 1) return 2 * c.per_vertex + c.per_cell;
  return c.per_vertex;
}

void eval_scalar_basis(const SimplicialMesh& m, SpaceSpec s, int cell, double r0, double r1,
                       double* val, Point2* grad) {
  const SpaceSpec c = canonical_presentation(s, 0, m.dim);
  if (m.dim == 2) {
    const Point2 a = vertex_of(m, cell, 0), b = vertex_of(m, cell, 1), d = vertex_of(m, cell, 2);
    const double x1 = b.x - a.x, y1 = b.y - a.y, x2 = d.x - a.x, y2 = d.y - a.y;
    const double det = x1 * y2 - x2 * y1;
    auto phys = [&](double gu, double gv) -> Point2 {
      return {(y2 * gu - y1 * gv) / det, (-x2 * gu + x1 * gv) / det};
    };
    const double lam[3] = {1 - r0 - r1, r0, r1};
    const Point2 glam[3] = {phys(-1, -1), phys(1, 0), phys(0, 1)};
    if (c.order == 1) {
      for (int i = 0; i < 3; ++i) {
        val[i] = lam[i];
        if (grad) grad[i] = glam[i];
      }
      return;
    }
    if (c.order == 2) {
      for (int i = 0; i < 3; ++i) {
        val[i] = lam[i] * (2 * lam[i] - 1);
        if (grad) grad[i] = (4 * lam[i] - 1) * glam[i];
      }
      for (int k = 0; k < 3; ++k) {
        const int i = k, j = (k + 1) % 3;
        val[3 + k] = 4 * lam[i] * lam[j];
        if (grad) grad[3 + k] = 4 * lam[j] * glam[i] + 4 * lam[i] * glam[j];
      }
      return;
    }
  } else if (m.dim == 1) {
    const Point2 a = vertex_of(m, cell, 0), b = vertex_of(m, cell, 1);
    Point2 t = b - a;
    const double h = std::sqrt(dot(t, t));
    t = (1.0 / h) * t;
    if (c.order == 1) {
      val[0] = 1 - r0;
      val[1] = r0;
      if (grad) {
        grad[0] = (-1.0 / h) * t;
        grad[1] = (1.0 / h) * t;
      }
      return;
    }
    if (c.order == 2) {
      val[0] = (1 - r0) * (1 - 2 * r0);
      val[1] = r0 * (2 * r0 - 1);
      val[2] = 4 * r0 * (1 - r0);
      if (grad) {
        grad[0] = ((4 * r0 - 3) / h) * t;
        grad[1] = ((4 * r0 - 1) / h) * t;
        grad[2] = ((4 - 8 * r0) / h) * t;
      }
      return;
    }
  } else {
    val[0] = 1;
    if (grad) grad[0] = {0, 0};
    return;
  }
  unsupported(m.dim, 0, s);
}

void eval_flux_basis(const SimplicialMesh& m, SpaceSpec s, int cell, double r0, double r1,
                     Point2* val, double* div) {
  Eigen::MatrixXd C;
  Point2 cc;
  bool full = false;
  flux_dual_basis(m, s, cell, C, cc, full);
  const Point2 a = vertex_of(m, cell, 0), b = vertex_of(m, cell, 1), d = vertex_of(m, cell, 2);
  const Point2 p{a.x + r0 * (b.x - a.x) + r1 * (d.x - a.x),
                 a.y + r0 * (b.y - a.y) + r1 * (d.y - a.y)};
  const double X = p.x - cc.x, Y = p.y - cc.y;
  const int nd = full ? 6 : 3;
  for (int i = 0; i < nd; ++i) {
    Point2 v{C(0, i), C(1, i)};
    double dv = 0;
    if (full) {
      v.x += C(2, i) * X + C(3, i) * Y;
      v.y += C(4, i) * X + C(5, i) * Y;
      dv = C(2, i) + C(5, i);
    } else {
      v.x += C(2, i) * X;
      v.y += C(2, i) * Y;
      dv = 2 * C(2, i);
    }
    val[i] = v;
    if (div) div[i] = dv;
  }
}

void eval_density_basis(const SimplicialMesh& m, SpaceSpec s, int cell, double r0, double* val) {
  const SpaceSpec c = canonical_presentation(s, m.dim, m.dim);
  const double meas = m.cell_measure(cell);
  if (m.dim == 2) {
    if (c.order == 1) {
      val[0] = 1.0 / meas;
      return;
    }
  } else if (m.dim == 1) {
    if (c.order == 1) {
      val[0] = 1.0 / meas;
      return;
    }
    if (c.order == 2) {
      val[0] = 1.0 / meas;
      val[1] = (r0 - 0.5) / meas;
      return;
    }
  } else {
    val[0] = 1.0;
    return;
  }
  unsupported(m.dim, m.dim, s);
}

Eigen::VectorXd interpolate_scalar(const SimplicialMesh& m, SpaceSpec s, const ScalarFn& f) {
  const BlockLayout L = block_layout(m, 0, s);
  Eigen::VectorXd out(L.size);
  for (int v = 0; v < L.nv; ++v) out[L.vertex_base + v] = f(m.vertices[static_cast<size_t>(v)]);
  if (L.counts.per_edge > 0)
    for (int e = 0; e < L.ne; ++e) {
      const Point2 a = m.vertices[static_cast<size_t>(m.edges[static_cast<size_t>(e)][0])];
      const Point2 b = m.vertices[static_cast<size_t>(m.edges[static_cast<size_t>(e)][1])];
      out[L.edge_base + e] = f({0.5 * (a.x + b.x), 0.5 * (a.y + b.y)});
    }
  if (L.counts.per_cell > 0)
    for (int c = 0; c < L.nc; ++c) out[L.cell_base + c] = f(m.cell_centroid(c));
  return out;
}

Eigen::VectorXd interpolate_flux(const SimplicialMesh& m, SpaceSpec s, const VectorFn& u) {
  const BlockLayout L = block_layout(m, 1, s);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(L.size);
  for (int e = 0; e < L.ne; ++e) {
    const Point2 a = m.vertices[static_cast<size_t>(m.edges[static_cast<size_t>(e)][0])];
    const Point2 b = m.vertices[static_cast<size_t>(m.edges[static_cast<size_t>(e)][1])];
    const Point2 t = b - a;
    const double len = std::sqrt(dot(t, t));
    const Point2 nu{t.y / len, -t.x / len};
    double q0 = 0, q1 = 0;
    for (const auto& qp : segment_rule()) {
      const Point2 p{a.x + qp.x * t.x, a.y + qp.x * t.y};
      const double un = dot(u(p), nu);
      q0 += qp.w * len * un;
      q1 += qp.w * len * 12.0 * un * (qp.x - 0.5);
    }
    out[L.edge_base + e * L.counts.per_edge] = q0;
    if (L.counts.per_edge > 1) out[L.edge_base + e * L.counts.per_edge + 1] = q1;
  }
  return out;
}

Eigen::VectorXd interpolate_density(const SimplicialMesh& m, SpaceSpec s, const ScalarFn& f) {
  const BlockLayout L = block_layout(m, m.dim, s);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(L.size);
  for (int c = 0; c < L.nc; ++c) {
    const double meas = m.cell_measure(c);
    if (m.dim == 2) {
      const Point2 a = vertex_of(m, c, 0), b = vertex_of(m, c, 1), d = vertex_of(m, c, 2);
      double cell_int = 0;
      for (const auto& qp : triangle_rule()) {
        const Point2 p{a.x + qp.x * (b.x - a.x) + qp.y * (d.x - a.x),
                       a.y + qp.x * (b.y - a.y) + qp.y * (d.y - a.y)};
        cell_int += qp.w * 2.0 * meas * f(p);
      }
      out[L.cell_base + c] = cell_int;
    } else if (m.dim == 1) {
      const Point2 a = vertex_of(m, c, 0), b = vertex_of(m, c, 1);
      double c0 = 0, c1 = 0;
      for (const auto& qp : segment_rule()) {
        const Point2 p{a.x + qp.x * (b.x - a.x), a.y + qp.x * (b.y - a.y)};
        c0 += qp.w * meas * f(p);
        c1 += qp.w * meas * 12.0 * f(p) * (qp.x - 0.5);
      }
      out[L.cell_base + c * L.counts.per_cell] = c0;
      if (L.counts.per_cell > 1) out[L.cell_base + c * L.counts.per_cell + 1] = c1;
    } else {
      // Point densities live in the vertex slot (per_cell is zero here).
      out[L.vertex_base + m.cells[static_cast<size_t>(c)][0]] = f(m.vertices[0]);
    }
  }
  return out;
}

double evaluate_scalar_field(const SimplicialMesh& m, SpaceSpec s, const BlockLayout& L,
                             const Eigen::VectorXd& coeff, int cell, double r0, double r1,
                             Point2* grad) {
  const int nd = local_dof_count(m.dim, 0, s);
  double val[6];
  Point2 g[6];
  eval_scalar_basis(m, s, cell, r0, r1, val, grad ? g : nullptr);
  std::vector<int> dofs;
  cell_block_dofs(m, L, cell, dofs);
  double out = 0;
  if (grad) *grad = {0, 0};
  for (int i = 0; i < nd; ++i) {
    const double ci = coeff[dofs[static_cast<size_t>(i)]];
    out += ci * val[i];
    if (grad) *grad = *grad + ci * g[i];
  }
  return out;
}

Point2 evaluate_flux_field(const SimplicialMesh& m, SpaceSpec s, const BlockLayout& L,
                           const Eigen::VectorXd& coeff, int cell, double r0, double r1) {
  const int nd = local_dof_count(m.dim, 1, s);
  Point2 val[6];
  eval_flux_basis(m, s, cell, r0, r1, val, nullptr);
  std::vector<int> dofs;
  cell_block_dofs(m, L, cell, dofs);
  Point2 out{0, 0};
  for (int i = 0; i < nd; ++i) out = out + coeff[dofs[static_cast<size_t>(i)]] * val[i];
  return out;
}

double evaluate_density_field(const SimplicialMesh& m, SpaceSpec s, const BlockLayout& L,
                              const Eigen::VectorXd& coeff, int cell, double r0) {
  const int nd = local_dof_count(m.dim, m.dim, s);
  double val[6];
  eval_density_basis(m, s, cell, r0, val);
  std::vector<int> dofs;
  cell_block_dofs(m, L, cell, dofs);
  double out = 0;
  for (int i = 0; i < nd; ++i) out += coeff[dofs[static_cast<size_t>(i)]] * val[i];
  return out;
}

}  // namespace mdfem
