#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "doctest.h"
#include "mdfem/mesh.hpp"

using namespace mdfem;

namespace {

using CoordCell = std::vector<std::pair<double, double>>;

CoordCell coord_cell(const SimplicialMesh& m, int c) {
  CoordCell out;
  for (int k = 0; k <= m.dim; ++k) {
    const Point2 p = m.vertices[static_cast<size_t>(m.cells[static_cast<size_t>(c)][static_cast<size_t>(k)])];
    out.push_back({p.x, p.y});
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Order-independent fingerprint of one subdomain mesh: vertex coordinates,
// cells as coordinate sets, and tagged facets as coordinate sets.
struct Fingerprint {
  std::vector<std::pair<double, double>> verts;
  std::vector<CoordCell> cells;
  std::vector<std::pair<CoordCell, int>> tagged;
};

Fingerprint fingerprint(const SimplicialMesh& m) {
  Fingerprint f;
  for (const Point2& p : m.vertices) f.verts.push_back({p.x, p.y});
  std::sort(f.verts.begin(), f.verts.end());
  for (int c = 0; c < m.num_cells(); ++c) f.cells.push_back(coord_cell(m, c));
  std::sort(f.cells.begin(), f.cells.end());
  const int nfacets = static_cast<int>(m.boundary_tag.size());
  for (int fi = 0; fi < nfacets; ++fi) {
    if (m.boundary_tag[static_cast<size_t>(fi)] == kTagNone) continue;
    CoordCell fc;
    if (m.dim == 2) {
      for (int k = 0; k < 2; ++k) {
        const Point2 p = m.vertices[static_cast<size_t>(m.edges[static_cast<size_t>(fi)][static_cast<size_t>(k)])];
        fc.push_back({p.x, p.y});
      }
    } else {
      const Point2 p = m.vertices[static_cast<size_t>(fi)];
      fc.push_back({p.x, p.y});
    }
    std::sort(fc.begin(), fc.end());
    f.tagged.push_back({fc, m.boundary_tag[static_cast<size_t>(fi)]});
  }
  std::sort(f.tagged.begin(), f.tagged.end());
  return f;
}

}  // namespace

TEST_CASE("level-2 cross mesh: counts and conformity") {
  const StratifiedGeometry g = build_cross_geometry(0.5, 0.5, 1e-3);
  const MixedMesh mm = build_mesh(g, 2);
  REQUIRE(mm.meshes.size() == 9);

  for (int q = 0; q < 4; ++q) {
    const SimplicialMesh& m = mm.meshes[static_cast<size_t>(q)];
    CHECK(m.num_vertices() == 9);   // 3x3 grid of a 0.5-size quadrant at h=0.25
    CHECK(m.num_cells() == 8);      // 2x2 squares, 2 triangles each
    CHECK(m.num_edges() == 16);     // 12 grid edges + 4 diagonals
    // Triangles are counterclockwise with measure h^2/2.
    for (int c = 0; c < m.num_cells(); ++c)
      CHECK(m.cell_measure(c) == doctest::Approx(0.25 * 0.25 / 2).epsilon(1e-14));
  }
  for (int b = 4; b < 8; ++b) {
    const SimplicialMesh& m = mm.meshes[static_cast<size_t>(b)];
    CHECK(m.num_vertices() == 3);
    CHECK(m.num_cells() == 2);
    for (int c = 0; c < m.num_cells(); ++c)
      CHECK(m.cell_measure(c) == doctest::Approx(0.25).epsilon(1e-14));
  }
  CHECK(mm.meshes[8].num_vertices() == 1);
  CHECK(mm.meshes[8].num_cells() == 1);
}

TEST_CASE("edge structure invariants") {
  const StratifiedGeometry g = build_cross_geometry(0.5, 0.5, 1e-3);
  const MixedMesh mm = build_mesh(g, 2);
  for (int q = 0; q < 4; ++q) {
    const SimplicialMesh& m = mm.meshes[static_cast<size_t>(q)];
    // Canonical edge direction: low vertex id to high vertex id.
    for (const auto& e : m.edges) CHECK(e[0] < e[1]);
    // Each edge belongs to one or two cells; a shared edge is outward for
    // exactly one of the two.
    std::vector<int> outward_sum(static_cast<size_t>(m.num_edges()), 0);
    std::vector<int> uses(static_cast<size_t>(m.num_edges()), 0);
    for (int c = 0; c < m.num_cells(); ++c)
      for (int k = 0; k < 3; ++k) {
        const int e = m.cell_edges[static_cast<size_t>(c)][static_cast<size_t>(k)];
        const int s = m.cell_edge_outward[static_cast<size_t>(c)][static_cast<size_t>(k)];
        CHECK((s == 1 || s == -1));
        outward_sum[static_cast<size_t>(e)] += s;
        uses[static_cast<size_t>(e)] += 1;
      }
    for (int e = 0; e < m.num_edges(); ++e) {
      CHECK((uses[static_cast<size_t>(e)] == 1 || uses[static_cast<size_t>(e)] == 2));
      if (uses[static_cast<size_t>(e)] == 2) CHECK(outward_sum[static_cast<size_t>(e)] == 0);
      // Boundary edges are exactly the tagged ones on a quadrant of the
      // cross (every quadrant side lies on the outer box or an interface).
      const bool tagged = m.boundary_tag[static_cast<size_t>(e)] != kTagNone;
      CHECK(tagged == (uses[static_cast<size_t>(e)] == 1));
      if (uses[static_cast<size_t>(e)] == 1) {
        const int c0 = m.edge_cells[static_cast<size_t>(e)][0];
        CHECK(c0 >= 0);
        CHECK(m.edge_cells[static_cast<size_t>(e)][1] == -1);
      }
    }
  }
}

TEST_CASE("interface facets pair bijectively with fracture cells") {
  const StratifiedGeometry g = build_cross_geometry(0.5, 0.5, 1e-3);
  for (int L : {2, 3}) {
    const MixedMesh mm = build_mesh(g, L);
    const int branch_cells = mm.meshes[4].num_cells();
    int maps_to_branches = 0;
    for (const TraceMap& t : mm.traces) {
      const SimplicialMesh& lower = mm.meshes[static_cast<size_t>(t.lower)];
      if (lower.dim == 1) {
        ++maps_to_branches;
        REQUIRE(static_cast<int>(t.pairs.size()) == branch_cells);
        std::set<int> facets, cells;
        for (const TraceFacetPair& p : t.pairs) {
          facets.insert(p.facet);
          cells.insert(p.cell);
          CHECK((p.sign == 1 || p.sign == -1));
          // Facet midpoint coincides with the branch cell midpoint.
          const SimplicialMesh& um = mm.meshes[static_cast<size_t>(t.upper)];
          const Point2 a = um.vertices[static_cast<size_t>(um.edges[static_cast<size_t>(p.facet)][0])];
          const Point2 b = um.vertices[static_cast<size_t>(um.edges[static_cast<size_t>(p.facet)][1])];
          const Point2 mid = 0.5 * (a + b);
          const Point2 cmid = lower.cell_centroid(p.cell);
          CHECK(mid.x == doctest::Approx(cmid.x).epsilon(1e-14));
          CHECK(mid.y == doctest::Approx(cmid.y).epsilon(1e-14));
        }
        CHECK(static_cast<int>(facets.size()) == branch_cells);
        CHECK(static_cast<int>(cells.size()) == branch_cells);
      } else {
        REQUIRE(t.pairs.size() == 1);
        CHECK(t.pairs[0].cell == 0);
      }
    }
    CHECK(maps_to_branches == 8);  // four branches, two bulk sides each
  }
}

TEST_CASE("refining level L reproduces the built level L+1 mesh") {
  const StratifiedGeometry g = build_cross_geometry(0.5, 0.5, 1e-3);
  for (int L : {1, 2}) {
    const MixedMesh fine = build_mesh(g, L + 1);
    const MixedMesh ref = refine(build_mesh(g, L));
    REQUIRE(ref.level == L + 1);
    for (size_t s = 0; s < fine.meshes.size(); ++s) {
      const Fingerprint a = fingerprint(fine.meshes[s]);
      const Fingerprint b = fingerprint(ref.meshes[s]);
      CHECK(a.verts == b.verts);
      CHECK(a.cells == b.cells);
      CHECK(a.tagged == b.tagged);
    }
    CHECK(fine.traces.size() == ref.traces.size());
    for (const TraceMap& t : fine.traces)
      CHECK(ref.trace_for(t.lower, t.side).pairs.size() == t.pairs.size());
  }
}

TEST_CASE("unresolvable fracture coordinates are rejected with context") {
  const StratifiedGeometry g = build_cross_geometry(1.0 / 3.0, 0.5, 1e-3);
  bool threw = false;
  try {
    build_mesh(g, 2);
  } catch (const std::invalid_argument& e) {
    threw = true;
    const std::string msg = e.what();
    CHECK(msg.find("0.33") != std::string::npos);  // names the coordinate
    CHECK(msg.find("bulk") != std::string::npos);  // names the subdomain
  }
  CHECK(threw);
  CHECK_THROWS_AS(build_mesh(g, 1), std::invalid_argument);
  // Levels below 1 are rejected outright.
  CHECK_THROWS_AS(build_mesh(build_cross_geometry(0.5, 0.5, 1e-3), 0), std::invalid_argument);
}

TEST_CASE("point location inverts cell geometry") {
  const StratifiedGeometry g = build_cross_geometry(0.25, 0.75, 1e-3);
  const MixedMesh mm = build_mesh(g, 3);
  for (const Subdomain& s : g.subdomains) {
    const SimplicialMesh& m = mm.meshes[static_cast<size_t>(s.id)];
    for (int c = 0; c < m.num_cells(); ++c) {
      const Point2 q = m.cell_centroid(c);
      double r0 = -1, r1 = -1;
      const int found = locate_cell(m, q, &r0, &r1);
      CHECK(found == c);
      if (m.dim == 2) {
        const Point2 p0 = m.vertices[static_cast<size_t>(m.cells[static_cast<size_t>(c)][0])];
        const Point2 p1 = m.vertices[static_cast<size_t>(m.cells[static_cast<size_t>(c)][1])];
        const Point2 p2 = m.vertices[static_cast<size_t>(m.cells[static_cast<size_t>(c)][2])];
        const Point2 back = p0 + r0 * (p1 - p0) + r1 * (p2 - p0);
        CHECK(back.x == doctest::Approx(q.x).epsilon(1e-13));
        CHECK(back.y == doctest::Approx(q.y).epsilon(1e-13));
      } else if (m.dim == 1) {
        CHECK(r0 == doctest::Approx(0.5).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("mesh dump format is stable") {
  const StratifiedGeometry g = build_cross_geometry(0.5, 0.5, 1e-3);
  const MixedMesh mm = build_mesh(g, 1);
  std::ostringstream os1, os2;
  write_mesh(os1, mm);
  write_mesh(os2, mm);
  CHECK(os1.str() == os2.str());  // deterministic

  const std::string expected = R"(md-mesh v1
subdomains 9 level 1
subdomain 0 dim 2 vertices 4 cells 2 edges 5
v 0 0
v 0.5 0
v 0 0.5
v 0.5 0.5
c 0 1 3
c 0 3 2
e 0 1
e 1 3
e 0 3
e 2 3
e 0 2
t 0 0
t 1 104
t 3 106
t 4 2
subdomain 1 dim 2 vertices 4 cells 2 edges 5
v 0.5 0
v 1 0
v 0.5 0.5
v 1 0.5
c 0 1 3
c 0 3 2
e 0 1
e 1 3
e 0 3
e 2 3
e 0 2
t 0 0
t 1 3
t 3 107
t 4 104
subdomain 2 dim 2 vertices 4 cells 2 edges 5
v 0.5 0.5
v 1 0.5
v 0.5 1
v 1 1
c 0 1 3
c 0 3 2
e 0 1
e 1 3
e 0 3
e 2 3
e 0 2
t 0 107
t 1 3
t 3 1
t 4 105
subdomain 3 dim 2 vertices 4 cells 2 edges 5
v 0 0.5
v 0.5 0.5
v 0 1
v 0.5 1
c 0 1 3
c 0 3 2
e 0 1
e 1 3
e 0 3
e 2 3
e 0 2
t 0 106
t 1 105
t 3 1
t 4 2
subdomain 4 dim 1 vertices 2 cells 1 edges 0
v 0.5 0
v 0.5 0.5
c 0 1
t 0 0
t 1 108
subdomain 5 dim 1 vertices 2 cells 1 edges 0
v 0.5 0.5
v 0.5 1
c 0 1
t 0 108
t 1 1
subdomain 6 dim 1 vertices 2 cells 1 edges 0
v 0 0.5
v 0.5 0.5
c 0 1
t 0 2
t 1 108
subdomain 7 dim 1 vertices 2 cells 1 edges 0
v 0.5 0.5
v 1 0.5
c 0 1
t 0 108
t 1 3
subdomain 8 dim 0 vertices 1 cells 1 edges 0
v 0.5 0.5
c 0
trace upper 0 lower 4 side 0 pairs 1
p 1 0 1
trace upper 1 lower 4 side 1 pairs 1
p 4 0 1
trace upper 3 lower 5 side 0 pairs 1
p 1 0 1
trace upper 2 lower 5 side 1 pairs 1
p 4 0 1
trace upper 0 lower 6 side 0 pairs 1
p 3 0 1
trace upper 3 lower 6 side 1 pairs 1
p 0 0 1
trace upper 1 lower 7 side 0 pairs 1
p 3 0 1
trace upper 2 lower 7 side 1 pairs 1
p 0 0 1
trace upper 4 lower 8 side 0 pairs 1
p 1 0 1
trace upper 5 lower 8 side 1 pairs 1
p 0 0 -1
trace upper 6 lower 8 side 2 pairs 1
p 1 0 1
trace upper 7 lower 8 side 3 pairs 1
p 0 0 -1
)";
  CHECK(os1.str() == expected);
}

TEST_CASE("boundary tags distinguish outer sides from interfaces") {
  const StratifiedGeometry g = build_cross_geometry(0.5, 0.5, 1e-3);
  const MixedMesh mm = build_mesh(g, 2);
  // South-west quadrant: bottom edges tag 0, left edges tag 2, the x = 0.5
  // side pairs with the lower vertical branch (id 4), the y = 0.5 side with
  // the left horizontal branch (id 6).
  const SimplicialMesh& m = mm.meshes[0];
  std::map<int, int> tag_count;
  for (int e = 0; e < m.num_edges(); ++e) {
    const int tag = m.boundary_tag[static_cast<size_t>(e)];
    if (tag != kTagNone) ++tag_count[tag];
  }
  CHECK(tag_count[kTagBottom] == 2);
  CHECK(tag_count[kTagLeft] == 2);
  CHECK(tag_count[kInterfaceTagBase + 4] == 2);
  CHECK(tag_count[kInterfaceTagBase + 6] == 2);
  CHECK(tag_count.size() == 4);

  // Branch tip vertices carry the outer-box tag they touch; the node end
  // carries the interface tag of the crossing (id 8).
  const SimplicialMesh& vb = mm.meshes[4];
  CHECK(vb.boundary_tag[0] == kTagBottom);
  CHECK(vb.boundary_tag[static_cast<size_t>(vb.num_vertices() - 1)] == kInterfaceTagBase + 8);
}
