#pragma once
/// Local finite elements on simplicial meshes, keyed by (mesh dimension,
/// local form degree, space identification).  Degrees of freedom follow
/// fixed conventions chosen so that every differential and trace matrix has
/// integer entries:
///   - 0-forms: values at vertices (order 1) plus facet/cell midpoints
///     (order 2);
///   - bulk 1-forms (flux proxy u, with the form acting as v -> u . rot90cw(v)):
///     per edge, q0 = integral of u . nu over the edge and, for the full
///     order-1 family, q1 = 12 * integral of u . nu * (xi - 1/2), where nu is
///     the clockwise rotation of the low-to-high edge direction and xi the
///     low-to-high arclength parameter;
///   - densities: cell integrals (plus, on lines at order 2, the scaled
///     first moment c1 = 12 * integral of g * (xi - 1/2) dxi of the
///     reference form g dxi).
/// Block layout within one subdomain block: all vertex dofs, then all edge
/// dofs, then all cell dofs, each entity-major.

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "mdfem/mesh.hpp"
#include "mdfem/spaces.hpp"

namespace mdfem {

struct DofCounts {
  int per_vertex = 0;
  int per_edge = 0;
  int per_cell = 0;
};

DofCounts dof_counts(int dim, int ell, SpaceSpec s);

struct BlockLayout {
  DofCounts counts;
  int nv = 0, ne = 0, nc = 0;
  int vertex_base = 0, edge_base = 0, cell_base = 0;
  int size = 0;
};

BlockLayout block_layout(const SimplicialMesh& m, int ell, SpaceSpec s);

/// Block-local dof indices of one cell, in local basis order.
void cell_block_dofs(const SimplicialMesh& m, const BlockLayout& layout, int cell,
                     std::vector<int>& out);

/// Number of local basis functions on a cell.
int local_dof_count(int dim, int ell, SpaceSpec s);

/// 0-form basis: values (and physical gradients when grad != nullptr) at a
/// reference point.  For 1d meshes the gradient is the tangential
/// derivative times the unit tangent; r1 is ignored.
void eval_scalar_basis(const SimplicialMesh& m, SpaceSpec s, int cell, double r0, double r1,
                       double* val, Point2* grad);

/// Bulk flux basis (dim 2, ell = 1): vector values and divergences.
void eval_flux_basis(const SimplicialMesh& m, SpaceSpec s, int cell, double r0, double r1,
                     Point2* val, double* div);

/// Density basis (top-degree forms): pointwise density values.  r0 is the
/// reference coordinate along a 1d cell, ignored for other dimensions.
void eval_density_basis(const SimplicialMesh& m, SpaceSpec s, int cell, double r0, double* val);

using ScalarFn = std::function<double(Point2)>;
using VectorFn = std::function<Point2(Point2)>;

/// Apply the dof functionals of a block to an analytic field.
Eigen::VectorXd interpolate_scalar(const SimplicialMesh& m, SpaceSpec s, const ScalarFn& f);
Eigen::VectorXd interpolate_flux(const SimplicialMesh& m, SpaceSpec s, const VectorFn& u);
Eigen::VectorXd interpolate_density(const SimplicialMesh& m, SpaceSpec s, const ScalarFn& f);

/// Evaluate a coefficient vector (block layout) at a reference point.
double evaluate_scalar_field(const SimplicialMesh& m, SpaceSpec s, const BlockLayout& layout,
                             const Eigen::VectorXd& coeff, int cell, double r0, double r1,
                             Point2* grad = nullptr);
Point2 evaluate_flux_field(const SimplicialMesh& m, SpaceSpec s, const BlockLayout& layout,
                           const Eigen::VectorXd& coeff, int cell, double r0, double r1);
double evaluate_density_field(const SimplicialMesh& m, SpaceSpec s, const BlockLayout& layout,
                              const Eigen::VectorXd& coeff, int cell, double r0);

}  // namespace mdfem
