#include "mdfem/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace mdfem {

std::vector<int> StratifiedGeometry::ids_of_dim(int d) const {
  std::vector<int> out;
  for (const auto& s : subdomains)
    if (s.dim == d) out.push_back(s.id);
  return out;
}

namespace {

// Relative orientation of a segment-shaped subdomain against the induced
// boundary orientation of an adjacent 2d subdomain: +1 when the 2d
// subdomain's outward normal on the shared side equals the branch tangent
// rotated 90 degrees counterclockwise.
int side_orientation(Point2 tangent, Point2 outward_normal) {
  return dot(rot90ccw(tangent), outward_normal) > 0 ? 1 : -1;
}

}  // namespace

StratifiedGeometry build_cross_geometry(double fx, double fy, double aperture) {
  if (!(fx > 0.0 && fx < 1.0) || !(fy > 0.0 && fy < 1.0))
    throw std::invalid_argument("fracture coordinates must lie strictly inside the unit square");
  if (!(aperture > 0.0)) throw std::invalid_argument("aperture must be positive");

  StratifiedGeometry g;
  g.n = 2;
  g.aperture = aperture;

  auto add = [&g](int dim, double ap, Shape shape, std::string name) {
    Subdomain s;
    s.id = static_cast<int>(g.subdomains.size());
    s.dim = dim;
    s.aperture = ap;
    s.shape = shape;
    s.name = std::move(name);
    g.subdomains.push_back(s);
    return s.id;
  };

  // Bulk quadrants, counterclockwise from lower-left.
  const int q_sw = add(2, 1.0, {ShapeKind::Rect, {0.0, 0.0}, {fx, fy}}, "bulk-sw");
  const int q_se = add(2, 1.0, {ShapeKind::Rect, {fx, 0.0}, {1.0, fy}}, "bulk-se");
  const int q_ne = add(2, 1.0, {ShapeKind::Rect, {fx, fy}, {1.0, 1.0}}, "bulk-ne");
  const int q_nw = add(2, 1.0, {ShapeKind::Rect, {0.0, fy}, {fx, 1.0}}, "bulk-nw");

  // Fracture branches; tangents point along +x / +y.
  const int v_bot = add(1, aperture, {ShapeKind::Segment, {fx, 0.0}, {fx, fy}}, "frac-v-lower");
  const int v_top = add(1, aperture, {ShapeKind::Segment, {fx, fy}, {fx, 1.0}}, "frac-v-upper");
  const int h_left = add(1, aperture, {ShapeKind::Segment, {0.0, fy}, {fx, fy}}, "frac-h-left");
  const int h_right = add(1, aperture, {ShapeKind::Segment, {fx, fy}, {1.0, fy}}, "frac-h-right");

  // Intersection point; its weight is aperture^codim.
  const int node = add(0, aperture * aperture, {ShapeKind::Point, {fx, fy}, {fx, fy}}, "crossing");

  g.up.assign(g.subdomains.size(), {});
  g.down.assign(g.subdomains.size(), {});

  auto link_branch = [&](int branch, int quad, Point2 outward_normal) {
    const Shape& sh = g.sub(branch).shape;
    Point2 t = sh.b - sh.a;
    const double len = std::sqrt(dot(t, t));
    t = (1.0 / len) * t;
    g.up[static_cast<size_t>(branch)].push_back({quad, side_orientation(t, outward_normal)});
    g.down[static_cast<size_t>(quad)].push_back(branch);
  };

  // Each branch sees the two quadrants it separates; the outward normal is
  // the quadrant's, on the shared side.
  link_branch(v_bot, q_sw, {1.0, 0.0});
  link_branch(v_bot, q_se, {-1.0, 0.0});
  link_branch(v_top, q_nw, {1.0, 0.0});
  link_branch(v_top, q_ne, {-1.0, 0.0});
  link_branch(h_left, q_sw, {0.0, 1.0});
  link_branch(h_left, q_nw, {0.0, -1.0});
  link_branch(h_right, q_se, {0.0, 1.0});
  link_branch(h_right, q_ne, {0.0, -1.0});

  // The crossing sees the four branch endpoints: +1 where it is the branch's
  // far end (along the tangent), -1 where it is the start.
  auto link_node = [&](int branch) {
    const Shape& sh = g.sub(branch).shape;
    const bool at_end = (sh.b.x == fx && sh.b.y == fy);
    g.up[static_cast<size_t>(node)].push_back({branch, at_end ? 1 : -1});
    g.down[static_cast<size_t>(branch)].push_back(node);
  };
  link_node(v_bot);
  link_node(v_top);
  link_node(h_left);
  link_node(h_right);

  return g;
}

StratifiedGeometry build_unit_square_geometry() {
  StratifiedGeometry g;
  g.n = 2;
  g.aperture = 1.0;
  Subdomain s;
  s.id = 0;
  s.dim = 2;
  s.aperture = 1.0;
  s.shape = {ShapeKind::Rect, {0.0, 0.0}, {1.0, 1.0}};
  s.name = "bulk";
  g.subdomains.push_back(s);
  g.up.assign(1, {});
  g.down.assign(1, {});
  return g;
}

StratifiedGeometry build_fracture_network_geometry(double fx, double fy, double aperture) {
  StratifiedGeometry full = build_cross_geometry(fx, fy, aperture);
  StratifiedGeometry g;
  g.n = full.n;
  g.aperture = full.aperture;
  // Keep the four branches and the crossing; renumber densely.
  std::vector<int> remap(full.subdomains.size(), -1);
  for (const Subdomain& s : full.subdomains) {
    if (s.dim == 2) continue;
    Subdomain copy = s;
    copy.id = static_cast<int>(g.subdomains.size());
    remap[static_cast<size_t>(s.id)] = copy.id;
    g.subdomains.push_back(copy);
  }
  g.up.assign(g.subdomains.size(), {});
  g.down.assign(g.subdomains.size(), {});
  for (const Subdomain& s : full.subdomains) {
    if (remap[static_cast<size_t>(s.id)] < 0) continue;
    const int ni = remap[static_cast<size_t>(s.id)];
    for (const UpNeighbor& un : full.up[static_cast<size_t>(s.id)]) {
      const int nj = remap[static_cast<size_t>(un.neighbor)];
      if (nj < 0) continue;
      g.up[static_cast<size_t>(ni)].push_back({nj, un.sign});
      g.down[static_cast<size_t>(nj)].push_back(ni);
    }
  }
  return g;
}

std::vector<GeometryViolation> validate(const StratifiedGeometry& g) {
  std::vector<GeometryViolation> v;
  const int nsub = static_cast<int>(g.subdomains.size());
  if (static_cast<int>(g.up.size()) != nsub || static_cast<int>(g.down.size()) != nsub) {
    v.push_back({-1, -1, "adjacency tables do not match the subdomain list"});
    return v;
  }
  for (int i = 0; i < nsub; ++i) {
    if (g.sub(i).id != i) v.push_back({i, -1, "subdomain ids must be dense and ordered"});
    if (g.sub(i).dim < 0 || g.sub(i).dim > g.n)
      v.push_back({i, -1, "subdomain dimension outside [0, n]"});
    if (!(g.sub(i).aperture > 0.0)) v.push_back({i, -1, "nonpositive aperture"});
    if (g.sub(i).dim == g.n && g.sub(i).aperture != 1.0)
      v.push_back({i, -1, "top-dimensional subdomains must have unit weight"});
    for (const UpNeighbor& u : g.up[static_cast<size_t>(i)]) {
      if (u.neighbor < 0 || u.neighbor >= nsub) {
        v.push_back({i, u.neighbor, "dangling upward adjacency"});
        continue;
      }
      if (g.sub(u.neighbor).dim != g.sub(i).dim + 1)
        v.push_back({i, u.neighbor, "upward neighbour is not one dimension higher"});
      if (u.sign != 1 && u.sign != -1)
        v.push_back({i, u.neighbor, "orientation sign must be +1 or -1"});
      bool mirrored = false;
      for (int dn : g.down[static_cast<size_t>(u.neighbor)]) mirrored = mirrored || dn == i;
      if (!mirrored) v.push_back({i, u.neighbor, "upward adjacency missing its downward mirror"});
    }
    for (int dn : g.down[static_cast<size_t>(i)]) {
      if (dn < 0 || dn >= nsub) {
        v.push_back({dn, i, "dangling downward adjacency"});
        continue;
      }
      if (g.sub(dn).dim != g.sub(i).dim - 1)
        v.push_back({dn, i, "downward neighbour is not one dimension lower"});
      bool mirrored = false;
      for (const UpNeighbor& u : g.up[static_cast<size_t>(dn)]) mirrored = mirrored || u.neighbor == i;
      if (!mirrored) v.push_back({dn, i, "downward adjacency missing its upward mirror"});
    }
  }
  return v;
}

}  // namespace mdfem
