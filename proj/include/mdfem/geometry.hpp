// Stratified geometry: a fixed-dimension-n domain decomposed into subdomains of
// descending dimension (bulk patches, fracture branches, intersection points),
// with oriented adjacency between each subdomain and its codimension-one
// neighbours and an aperture-derived volume weight per subdomain.
#pragma once

#include <string>
#include <vector>

namespace mdfem {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
// Rotation by +90 degrees (counterclockwise).
inline Point2 rot90ccw(Point2 a) { return {-a.y, a.x}; }

enum class ShapeKind { Rect, Segment, Point };

// Geometric carrier of a subdomain. Rect: a = lower-left, b = upper-right.
// Segment: directed from a to b (the direction fixes the subdomain's
// intrinsic orientation). Point: a only.
struct Shape {
  ShapeKind kind = ShapeKind::Point;
  Point2 a;
  Point2 b;
};

struct Subdomain {
  int id = -1;
  int dim = 0;
  // Cross-sectional volume weight: 1 for dim == n, the physical aperture for
  // codimension one, aperture^codim in general.
  double aperture = 1.0;
  Shape shape;
  std::string name;
};

// One incidence of a subdomain with a (d+1)-dimensional neighbour along one
// side. `sign` is the relative orientation of the subdomain against the
// induced boundary orientation of the neighbour on that side.
struct UpNeighbor {
  int neighbor = -1;
  int sign = 0;
};

struct StratifiedGeometry {
  int n = 2;  // ambient (top) dimension
  double aperture = 1.0;  // base aperture epsilon of the codim-1 strata
  std::vector<Subdomain> subdomains;
  std::vector<std::vector<UpNeighbor>> up;  // per subdomain: sides, in order
  std::vector<std::vector<int>> down;       // per subdomain: lower neighbours

  const Subdomain& sub(int i) const { return subdomains[static_cast<size_t>(i)]; }
  std::vector<int> ids_of_dim(int d) const;
};

struct GeometryViolation {
  int lower = -1;
  int upper = -1;
  std::string what;
};

// Unit square cut by a vertical fracture {x = fx} and a horizontal fracture
// {y = fy} crossing at (fx, fy): four bulk quadrants, four fracture branches,
// one intersection point. Branch tangents point in +x / +y.
StratifiedGeometry build_cross_geometry(double fx, double fy, double aperture);

// Unit square with no fractures (single bulk subdomain).
StratifiedGeometry build_unit_square_geometry();

/// The four fracture branches and their crossing only, without the bulk
/// quadrants (a stratified geometry whose top dimension is 1).
StratifiedGeometry build_fracture_network_geometry(double fx, double fy, double aperture);

// Structural checks: dimensions graded by exactly one across adjacencies,
// nonzero orientation signs, aperture consistency, symmetric up/down lists.
std::vector<GeometryViolation> validate(const StratifiedGeometry& g);

}  // namespace mdfem
