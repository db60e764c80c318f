// Conforming simplicial meshes over a stratified geometry: one structured
// mesh per subdomain plus facet-to-cell trace maps along every adjacency.
// Triangulations are right-triangle splits of a uniform grid of spacing
// 2^-level; fracture meshes share that spacing so boundary facets of a bulk
// mesh match branch cells one-to-one.
#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "mdfem/geometry.hpp"

namespace mdfem {

// Boundary facet tags. Outer-boundary tags name the side of the unit square;
// facets on an internal interface carry kInterfaceTagBase + lower subdomain id.
inline constexpr int kTagNone = -1;
inline constexpr int kTagBottom = 0;
inline constexpr int kTagTop = 1;
inline constexpr int kTagLeft = 2;
inline constexpr int kTagRight = 3;
inline constexpr int kInterfaceTagBase = 100;

// Structured-grid metadata kept for point location and nested refinement.
struct StructuredInfo {
  Point2 origin;
  double h = 0.0;
  int nx = 0;  // cells along x (2d) or along the branch (1d)
  int ny = 0;
  bool main_diagonal = true;  // 2d: split each square from lower-left to upper-right
};

struct SimplicialMesh {
  int dim = 0;
  std::vector<Point2> vertices;
  // Triangles store 3 vertex ids (counterclockwise), segments 2, points 1;
  // unused slots are -1.
  std::vector<std::array<int, 3>> cells;

  // 2d only: edges in canonical direction (low vertex id -> high vertex id).
  std::vector<std::array<int, 2>> edges;
  std::vector<std::array<int, 3>> cell_edges;
  // +1 when the canonical edge normal (tangent rotated 90 degrees clockwise)
  // points out of the cell.
  std::vector<std::array<int, 3>> cell_edge_outward;
  std::vector<std::array<int, 2>> edge_cells;  // adjacent cells, -1 when missing

  // Per facet (2d: edge, 1d: vertex, 0d: the point): boundary tag or kTagNone.
  std::vector<int> boundary_tag;

  StructuredInfo grid;

  int num_cells() const { return static_cast<int>(cells.size()); }
  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  double cell_measure(int c) const;
  Point2 cell_centroid(int c) const;
};

// One matched facet/cell pair of a trace map. `sign` relates the facet's
// canonical direction to the lower mesh's cell direction: for 2d->1d it is
// +1 when the edge's low->high direction agrees with the branch tangent; for
// 1d->0d it is +1 when the vertex is the far end of its branch.
struct TraceFacetPair {
  int facet = -1;
  int cell = -1;
  int sign = 0;
};

struct TraceMap {
  int upper = -1;  // higher-dimensional subdomain id
  int lower = -1;  // lower-dimensional subdomain id
  int side = -1;   // index into geometry.up[lower]
  std::vector<TraceFacetPair> pairs;
};

struct MixedMesh {
  StratifiedGeometry geometry;
  int level = 0;
  std::vector<SimplicialMesh> meshes;  // indexed by subdomain id
  std::vector<TraceMap> traces;

  const SimplicialMesh& mesh_of(int sub) const { return meshes[static_cast<size_t>(sub)]; }
  const TraceMap& trace_for(int lower, int side) const;
};

// Build the level-L mesh family (grid spacing 2^-L). Throws
// std::invalid_argument when a fracture coordinate is not resolved by the
// grid (2^L * coordinate not an integer) or level < 1.
MixedMesh build_mesh(const StratifiedGeometry& g, int level);

// One uniform refinement: every triangle splits into four by edge midpoints,
// every segment into two. Produces the level+1 mesh; coarse vertices keep
// their coordinates (grid-snapped, so they coincide with built vertices).
MixedMesh refine(const MixedMesh& m);

// Locate the cell of subdomain mesh `m` containing `p` (structured lookup);
// returns cell id and writes barycentric-style reference coordinates.
int locate_cell(const SimplicialMesh& m, Point2 p, double* ref0, double* ref1);

// Plain-text mesh dump, format "md-mesh v1".
void write_mesh(std::ostream& os, const MixedMesh& m);

}  // namespace mdfem
