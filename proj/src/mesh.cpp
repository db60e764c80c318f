#include "mdfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mdfem {

namespace {

constexpr double kSnapTol = 1e-9;   // grid resolvability check
constexpr double kMatchTol = 1e-12; // coordinate coincidence across meshes

double cross2(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }

struct Box {
  double xlo = 0, xhi = 0, ylo = 0, yhi = 0;
};

Box domain_box(const StratifiedGeometry& g) {
  Box b{1e300, -1e300, 1e300, -1e300};
  for (const auto& s : g.subdomains) {
    for (Point2 p : {s.shape.a, s.shape.b}) {
      b.xlo = std::min(b.xlo, p.x);
      b.xhi = std::max(b.xhi, p.x);
      b.ylo = std::min(b.ylo, p.y);
      b.yhi = std::max(b.yhi, p.y);
    }
  }
  return b;
}

// Every shape coordinate must sit on the level grid.
void check_resolved(const StratifiedGeometry& g, double h) {
  for (const auto& s : g.subdomains) {
    const double coords[4] = {s.shape.a.x, s.shape.a.y, s.shape.b.x, s.shape.b.y};
    for (double c : coords) {
      const double q = c / h;
      if (std::abs(q - std::round(q)) > kSnapTol) {
        std::ostringstream msg;
        msg << "coordinate " << c << " of subdomain " << s.id << " (" << s.name
            << ") is not resolved by grid spacing " << h;
        throw std::invalid_argument(msg.str());
      }
    }
  }
}

double snap(double c, double h) { return std::round(c / h) * h; }

// Rebuild edge lists, cell-edge incidence, edge-cell adjacency for a 2d mesh.
void build_edge_structure(SimplicialMesh& m) {
  m.edges.clear();
  m.cell_edges.assign(m.cells.size(), {-1, -1, -1});
  m.cell_edge_outward.assign(m.cells.size(), {0, 0, 0});
  std::map<std::pair<int, int>, int> index;
  for (int c = 0; c < m.num_cells(); ++c) {
    for (int k = 0; k < 3; ++k) {
      const int a = m.cells[static_cast<size_t>(c)][static_cast<size_t>(k)];
      const int b = m.cells[static_cast<size_t>(c)][static_cast<size_t>((k + 1) % 3)];
      const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
      auto it = index.find(key);
      int e;
      if (it == index.end()) {
        e = static_cast<int>(m.edges.size());
        m.edges.push_back({key.first, key.second});
        index.emplace(key, e);
      } else {
        e = it->second;
      }
      m.cell_edges[static_cast<size_t>(c)][static_cast<size_t>(k)] = e;
      // Counterclockwise traversal keeps the cell on the left, so the
      // canonical normal (rot90cw of low->high) is outward exactly when the
      // traversal runs low->high.
      m.cell_edge_outward[static_cast<size_t>(c)][static_cast<size_t>(k)] = (a < b) ? 1 : -1;
    }
  }
  m.edge_cells.assign(m.edges.size(), {-1, -1});
  for (int c = 0; c < m.num_cells(); ++c)
    for (int k = 0; k < 3; ++k) {
      const int e = m.cell_edges[static_cast<size_t>(c)][static_cast<size_t>(k)];
      auto& pair = m.edge_cells[static_cast<size_t>(e)];
      (pair[0] < 0 ? pair[0] : pair[1]) = c;
    }
}

bool on_segment(Point2 p, Point2 a, Point2 b) {
  const Point2 d = b - a;
  const double len2 = dot(d, d);
  if (cross2(d, p - a) * cross2(d, p - a) > kMatchTol * kMatchTol * len2) return false;
  const double t = dot(p - a, d);
  return t >= -kMatchTol && t <= len2 + kMatchTol;
}

bool same_point(Point2 p, Point2 q) {
  return std::abs(p.x - q.x) <= kMatchTol && std::abs(p.y - q.y) <= kMatchTol;
}

// Assign boundary tags: outer box sides by name, interface facets by the
// lower subdomain they coincide with.
void assign_tags(MixedMesh& mm, int sub, const Box& box) {
  SimplicialMesh& m = mm.meshes[static_cast<size_t>(sub)];
  const StratifiedGeometry& g = mm.geometry;
  auto classify = [&](Point2 p) {
    for (int dn : g.down[static_cast<size_t>(sub)]) {
      const Shape& sh = g.sub(dn).shape;
      if (g.sub(dn).dim == 1 && on_segment(p, sh.a, sh.b)) return kInterfaceTagBase + dn;
      if (g.sub(dn).dim == 0 && same_point(p, sh.a)) return kInterfaceTagBase + dn;
    }
    if (std::abs(p.y - box.ylo) <= kMatchTol) return kTagBottom;
    if (std::abs(p.y - box.yhi) <= kMatchTol) return kTagTop;
    if (std::abs(p.x - box.xlo) <= kMatchTol) return kTagLeft;
    if (std::abs(p.x - box.xhi) <= kMatchTol) return kTagRight;
    return kTagNone;
  };
  if (m.dim == 2) {
    m.boundary_tag.assign(m.edges.size(), kTagNone);
    for (int e = 0; e < m.num_edges(); ++e) {
      if (m.edge_cells[static_cast<size_t>(e)][1] >= 0) continue;  // interior
      const Point2 a = m.vertices[static_cast<size_t>(m.edges[static_cast<size_t>(e)][0])];
      const Point2 b = m.vertices[static_cast<size_t>(m.edges[static_cast<size_t>(e)][1])];
      m.boundary_tag[static_cast<size_t>(e)] = classify({0.5 * (a.x + b.x), 0.5 * (a.y + b.y)});
    }
  } else if (m.dim == 1) {
    m.boundary_tag.assign(m.vertices.size(), kTagNone);
    const int last = m.num_vertices() - 1;
    m.boundary_tag[0] = classify(m.vertices[0]);
    m.boundary_tag[static_cast<size_t>(last)] = classify(m.vertices[static_cast<size_t>(last)]);
  } else {
    m.boundary_tag.assign(1, kTagNone);
  }
}

// Match boundary facets of every upper mesh with the cells of each adjacent
// lower mesh; one pair per lower cell (2d->1d) or per endpoint (1d->0d).
void derive_traces(MixedMesh& mm) {
  mm.traces.clear();
  const StratifiedGeometry& g = mm.geometry;
  for (int i = 0; i < static_cast<int>(g.subdomains.size()); ++i) {
    for (int s = 0; s < static_cast<int>(g.up[static_cast<size_t>(i)].size()); ++s) {
      const int j = g.up[static_cast<size_t>(i)][static_cast<size_t>(s)].neighbor;
      TraceMap tm;
      tm.upper = j;
      tm.lower = i;
      tm.side = s;
      const SimplicialMesh& lo = mm.meshes[static_cast<size_t>(i)];
      const SimplicialMesh& up = mm.meshes[static_cast<size_t>(j)];
      if (g.sub(i).dim == 1) {
        const Shape& seg = g.sub(i).shape;
        Point2 t = seg.b - seg.a;
        const double len = std::sqrt(dot(t, t));
        t = (1.0 / len) * t;
        const double hcell = len / lo.num_cells();
        std::vector<int> hits(static_cast<size_t>(lo.num_cells()), 0);
        for (int e = 0; e < up.num_edges(); ++e) {
          if (up.edge_cells[static_cast<size_t>(e)][1] >= 0) continue;
          const Point2 a = up.vertices[static_cast<size_t>(up.edges[static_cast<size_t>(e)][0])];
          const Point2 b = up.vertices[static_cast<size_t>(up.edges[static_cast<size_t>(e)][1])];
          const Point2 mid{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
          if (!on_segment(mid, seg.a, seg.b)) continue;
          const double sp = dot(mid - seg.a, t);
          int cell = static_cast<int>(std::floor(sp / hcell));
          cell = std::max(0, std::min(lo.num_cells() - 1, cell));
          // The matched cell must have the same endpoints as the facet.
          const auto& cv = lo.cells[static_cast<size_t>(cell)];
          const Point2 c0 = lo.vertices[static_cast<size_t>(cv[0])];
          const Point2 c1 = lo.vertices[static_cast<size_t>(cv[1])];
          const bool fwd = same_point(a, c0) && same_point(b, c1);
          const bool bwd = same_point(a, c1) && same_point(b, c0);
          if (!fwd && !bwd)
            throw std::runtime_error("interface facet does not coincide with a fracture cell");
          tm.pairs.push_back({e, cell, dot(b - a, t) > 0 ? 1 : -1});
          hits[static_cast<size_t>(cell)]++;
        }
        for (int c = 0; c < lo.num_cells(); ++c)
          if (hits[static_cast<size_t>(c)] != 1)
            throw std::runtime_error("interface matching is not one facet per fracture cell");
        std::sort(tm.pairs.begin(), tm.pairs.end(),
                  [](const TraceFacetPair& p, const TraceFacetPair& q) { return p.cell < q.cell; });
      } else if (g.sub(i).dim == 0) {
        const Point2 x0 = g.sub(i).shape.a;
        const int last = up.num_vertices() - 1;
        int facet = -1;
        int sign = 0;
        if (same_point(up.vertices[0], x0)) {
          facet = 0;
          sign = -1;
        } else if (same_point(up.vertices[static_cast<size_t>(last)], x0)) {
          facet = last;
          sign = 1;
        }
        if (facet < 0) throw std::runtime_error("branch endpoint does not coincide with its point neighbour");
        tm.pairs.push_back({facet, 0, sign});
      }
      mm.traces.push_back(std::move(tm));
    }
  }
}

SimplicialMesh structured_rect(Point2 lo, Point2 hi, double h, bool main_diagonal) {
  SimplicialMesh m;
  m.dim = 2;
  const int nx = static_cast<int>(std::round((hi.x - lo.x) / h));
  const int ny = static_cast<int>(std::round((hi.y - lo.y) / h));
  m.grid = {lo, h, nx, ny, main_diagonal};
  m.vertices.reserve(static_cast<size_t>((nx + 1) * (ny + 1)));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) m.vertices.push_back({lo.x + i * h, lo.y + j * h});
  auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int v00 = vid(i, j), v10 = vid(i + 1, j), v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      if (main_diagonal) {
        m.cells.push_back({v00, v10, v11});
        m.cells.push_back({v00, v11, v01});
      } else {
        m.cells.push_back({v00, v10, v01});
        m.cells.push_back({v10, v11, v01});
      }
    }
  build_edge_structure(m);
  return m;
}

SimplicialMesh structured_segment(Point2 a, Point2 b, double h) {
  SimplicialMesh m;
  m.dim = 1;
  const double len = std::sqrt(dot(b - a, b - a));
  const int nc = static_cast<int>(std::round(len / h));
  m.grid = {a, h, nc, 0, true};
  const Point2 step = (1.0 / nc) * (b - a);
  for (int k = 0; k <= nc; ++k) m.vertices.push_back({a.x + k * step.x, a.y + k * step.y});
  for (int k = 0; k < nc; ++k) m.cells.push_back({k, k + 1, -1});
  return m;
}

SimplicialMesh point_mesh(Point2 p) {
  SimplicialMesh m;
  m.dim = 0;
  m.vertices.push_back(p);
  m.cells.push_back({0, -1, -1});
  return m;
}

}  // namespace

double SimplicialMesh::cell_measure(int c) const {
  const auto& cv = cells[static_cast<size_t>(c)];
  if (dim == 2) {
    const Point2 a = vertices[static_cast<size_t>(cv[0])];
    const Point2 b = vertices[static_cast<size_t>(cv[1])];
    const Point2 d = vertices[static_cast<size_t>(cv[2])];
    return 0.5 * std::abs(cross2(b - a, d - a));
  }
  if (dim == 1) {
    const Point2 a = vertices[static_cast<size_t>(cv[0])];
    const Point2 b = vertices[static_cast<size_t>(cv[1])];
    return std::sqrt(dot(b - a, b - a));
  }
  return 1.0;
}

Point2 SimplicialMesh::cell_centroid(int c) const {
  const auto& cv = cells[static_cast<size_t>(c)];
  Point2 sum{0, 0};
  const int nv = dim + 1;
  for (int k = 0; k < nv; ++k) {
    const Point2 p = vertices[static_cast<size_t>(cv[static_cast<size_t>(k)])];
    sum = sum + p;
  }
  return (1.0 / nv) * sum;
}

const TraceMap& MixedMesh::trace_for(int lower, int side) const {
  for (const TraceMap& t : traces)
    if (t.lower == lower && t.side == side) return t;
  throw std::out_of_range("no trace map for the requested subdomain side");
}

MixedMesh build_mesh(const StratifiedGeometry& g, int level) {
  if (level < 1) throw std::invalid_argument("mesh level must be at least 1");
  const double h = std::ldexp(1.0, -level);
  check_resolved(g, h);

  MixedMesh mm;
  mm.geometry = g;
  mm.level = level;
  mm.meshes.resize(g.subdomains.size());
  const Box box = domain_box(g);
  for (const auto& s : g.subdomains) {
    SimplicialMesh& m = mm.meshes[static_cast<size_t>(s.id)];
    if (s.dim == 2) {
      const Point2 lo{snap(s.shape.a.x, h), snap(s.shape.a.y, h)};
      const Point2 hi{snap(s.shape.b.x, h), snap(s.shape.b.y, h)};
      m = structured_rect(lo, hi, h, /*main_diagonal=*/true);
    } else if (s.dim == 1) {
      const Point2 a{snap(s.shape.a.x, h), snap(s.shape.a.y, h)};
      const Point2 b{snap(s.shape.b.x, h), snap(s.shape.b.y, h)};
      m = structured_segment(a, b, h);
    } else {
      m = point_mesh(s.shape.a);
    }
    assign_tags(mm, s.id, box);
  }
  derive_traces(mm);
  return mm;
}

MixedMesh refine(const MixedMesh& coarse) {
  MixedMesh mm;
  mm.geometry = coarse.geometry;
  mm.level = coarse.level + 1;
  mm.meshes.resize(coarse.meshes.size());
  const Box box = domain_box(mm.geometry);
  for (size_t si = 0; si < coarse.meshes.size(); ++si) {
    const SimplicialMesh& cm = coarse.meshes[si];
    SimplicialMesh& fm = mm.meshes[si];
    fm.dim = cm.dim;
    if (cm.dim == 2) {
      fm.vertices = cm.vertices;
      std::vector<int> edge_mid(cm.edges.size());
      for (size_t e = 0; e < cm.edges.size(); ++e) {
        const Point2 a = cm.vertices[static_cast<size_t>(cm.edges[e][0])];
        const Point2 b = cm.vertices[static_cast<size_t>(cm.edges[e][1])];
        edge_mid[e] = static_cast<int>(fm.vertices.size());
        fm.vertices.push_back({0.5 * (a.x + b.x), 0.5 * (a.y + b.y)});
      }
      for (int c = 0; c < cm.num_cells(); ++c) {
        const auto& cv = cm.cells[static_cast<size_t>(c)];
        const auto& ce = cm.cell_edges[static_cast<size_t>(c)];
        const int m01 = edge_mid[static_cast<size_t>(ce[0])];
        const int m12 = edge_mid[static_cast<size_t>(ce[1])];
        const int m20 = edge_mid[static_cast<size_t>(ce[2])];
        fm.cells.push_back({cv[0], m01, m20});
        fm.cells.push_back({cv[1], m12, m01});
        fm.cells.push_back({cv[2], m20, m12});
        fm.cells.push_back({m01, m12, m20});
      }
      fm.grid = {cm.grid.origin, cm.grid.h / 2, cm.grid.nx * 2, cm.grid.ny * 2,
                 cm.grid.main_diagonal};
      build_edge_structure(fm);
    } else if (cm.dim == 1) {
      for (int c = 0; c < cm.num_cells(); ++c) {
        const Point2 a = cm.vertices[static_cast<size_t>(cm.cells[static_cast<size_t>(c)][0])];
        const Point2 b = cm.vertices[static_cast<size_t>(cm.cells[static_cast<size_t>(c)][1])];
        fm.vertices.push_back(a);
        fm.vertices.push_back({0.5 * (a.x + b.x), 0.5 * (a.y + b.y)});
      }
      fm.vertices.push_back(cm.vertices.back());
      for (int k = 0; k + 1 < static_cast<int>(fm.vertices.size()); ++k)
        fm.cells.push_back({k, k + 1, -1});
      fm.grid = {cm.grid.origin, cm.grid.h / 2, cm.grid.nx * 2, 0, true};
    } else {
      fm = cm;
    }
    assign_tags(mm, static_cast<int>(si), box);
  }
  derive_traces(mm);
  return mm;
}

int locate_cell(const SimplicialMesh& m, Point2 p, double* ref0, double* ref1) {
  if (m.dim == 0) {
    if (ref0) *ref0 = 0;
    if (ref1) *ref1 = 0;
    return 0;
  }
  const StructuredInfo& gr = m.grid;
  if (m.dim == 1) {
    const Point2 a = m.vertices.front();
    const Point2 b = m.vertices.back();
    Point2 t = b - a;
    const double len = std::sqrt(dot(t, t));
    t = (1.0 / len) * t;
    const double sp = dot(p - a, t);
    const double hc = len / m.num_cells();
    int c = static_cast<int>(std::floor(sp / hc));
    c = std::max(0, std::min(m.num_cells() - 1, c));
    if (ref0) *ref0 = sp / hc - c;
    if (ref1) *ref1 = 0;
    return c;
  }
  int ix = static_cast<int>(std::floor((p.x - gr.origin.x) / gr.h));
  int iy = static_cast<int>(std::floor((p.y - gr.origin.y) / gr.h));
  ix = std::max(0, std::min(gr.nx - 1, ix));
  iy = std::max(0, std::min(gr.ny - 1, iy));
  const double lx = (p.x - gr.origin.x) / gr.h - ix;
  const double ly = (p.y - gr.origin.y) / gr.h - iy;
  int c;
  if (gr.main_diagonal)
    c = (iy * gr.nx + ix) * 2 + (ly <= lx ? 0 : 1);
  else
    c = (iy * gr.nx + ix) * 2 + (lx + ly <= 1.0 ? 0 : 1);
  // Reference coordinates with respect to the cell's first vertex.
  const auto& cv = m.cells[static_cast<size_t>(c)];
  const Point2 a = m.vertices[static_cast<size_t>(cv[0])];
  const Point2 b = m.vertices[static_cast<size_t>(cv[1])];
  const Point2 d = m.vertices[static_cast<size_t>(cv[2])];
  const Point2 e1 = b - a, e2 = d - a, rp = p - a;
  const double det = cross2(e1, e2);
  if (ref0) *ref0 = cross2(rp, e2) / det;
  if (ref1) *ref1 = cross2(e1, rp) / det;
  return c;
}

void write_mesh(std::ostream& os, const MixedMesh& m) {
  char buf[128];
  os << "md-mesh v1\n";
  os << "subdomains " << m.meshes.size() << " level " << m.level << "\n";
  for (size_t si = 0; si < m.meshes.size(); ++si) {
    const SimplicialMesh& sm = m.meshes[si];
    os << "subdomain " << si << " dim " << sm.dim << " vertices " << sm.num_vertices()
       << " cells " << sm.num_cells() << " edges " << (sm.dim == 2 ? sm.num_edges() : 0) << "\n";
    for (const Point2& p : sm.vertices) {
      std::snprintf(buf, sizeof buf, "v %.17g %.17g\n", p.x, p.y);
      os << buf;
    }
    for (const auto& c : sm.cells) {
      os << "c";
      for (int k = 0; k <= sm.dim; ++k) os << " " << c[static_cast<size_t>(k)];
      os << "\n";
    }
    if (sm.dim == 2)
      for (const auto& e : sm.edges) os << "e " << e[0] << " " << e[1] << "\n";
    for (size_t f = 0; f < sm.boundary_tag.size(); ++f)
      if (sm.boundary_tag[f] != kTagNone) os << "t " << f << " " << sm.boundary_tag[f] << "\n";
  }
  for (const TraceMap& t : m.traces) {
    os << "trace upper " << t.upper << " lower " << t.lower << " side " << t.side << " pairs "
       << t.pairs.size() << "\n";
    for (const TraceFacetPair& p : t.pairs)
      os << "p " << p.facet << " " << p.cell << " " << p.sign << "\n";
  }
}

}  // namespace mdfem
