#pragma once
/// Assembly of the coupled cochain complex on a mixed-dimensional mesh:
/// per-degree dof spaces, differentials split into within-subdomain parts
/// and signed trace (jump) parts, trace-aware inner products, and the
/// derived operations built on them (codifferential, cohomology dimensions,
/// orthogonal three-part decomposition, spectral stability estimates).
///
/// Differential convention: the block of (D a) on a subdomain of dimension
/// d at degree k+1 equals the local exterior derivative of that subdomain's
/// own block plus (-1)^(d+k) times the signed sum of traces from its
/// codimension-one neighbours, the sign of each neighbour side coming from
/// the geometry's orientation data.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <array>
#include <iosfwd>
#include <optional>
#include <vector>

#include "mdfem/elements.hpp"
#include "mdfem/mesh.hpp"
#include "mdfem/spaces.hpp"

namespace mdfem {

using SpMat = Eigen::SparseMatrix<double>;

/// Global dof space at one complex degree: per-subdomain block layouts
/// (absent when the subdomain carries no block) and their global offsets.
struct DegreeSpace {
  std::vector<std::optional<BlockLayout>> block;
  std::vector<int> offset;
  int total = 0;
};

struct MixedComplex {
  const MixedMesh* mesh = nullptr;
  SpaceAssignment assignment;
  std::array<DegreeSpace, 3> space;
  std::array<SpMat, 2> D_local;
  std::array<SpMat, 2> D_jump;
  std::array<SpMat, 2> D;
  std::array<SpMat, 3> M;
};

/// Build spaces, differentials and inner products.  Throws
/// std::invalid_argument when the assignment is not compatible.
MixedComplex assemble_complex(const MixedMesh& mm, const SpaceAssignment& a);

/// Codifferential at degree k (k = 1 or 2): M[k-1]^{-1} D[k-1]^T M[k] v.
Eigen::VectorXd codifferential_apply(const MixedComplex& cx, int k, const Eigen::VectorXd& v);

/// Cohomology space dimensions (dim ker D_k - rank D_{k-1}).  Rank is
/// computed densely for small spaces and by sparse QR otherwise;
/// force_sparse selects the sparse path unconditionally.
std::array<int, 3> cohomology_dims(const MixedComplex& cx, bool force_sparse = false);

/// v = exact + coexact + harmonic, orthogonal in the degree-k inner
/// product: exact lies in the range of D[k-1], coexact in the range of the
/// degree-(k+1) codifferential.
struct HelmholtzParts {
  Eigen::VectorXd exact;
  Eigen::VectorXd coexact;
  Eigen::VectorXd harmonic;
};
HelmholtzParts helmholtz_decompose(const MixedComplex& cx, int k, const Eigen::VectorXd& v);

/// 1/sqrt of the smallest nonzero eigenvalue of the degree-k Hodge
/// Laplacian, generalized against the degree-k inner product.
double poincare_estimate(const MixedComplex& cx, int k);

/// Coordinate-format matrix dump: "coo <rows> <cols> <nnz>" then one
/// "<row> <col> <value>" line per stored entry.
void dump_matrix_coord(std::ostream& os, const SpMat& A);

}  // namespace mdfem
