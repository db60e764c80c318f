#pragma once
/// Steady Darcy flow on a mixed-dimensional geometry, in two formulations:
///   - a primal method with continuous piecewise-linear pressures on every
///     subdomain, interface coupling through lumped penalty-type gap terms
///     (2 k_n / aperture) and point gap terms (2 k_n) at the crossing;
///   - mixed saddle-point methods on the degree-1/degree-2 pair of the
///     cochain complex, with bulk fluxes weighted by the inverse
///     permeability, fracture fluxes by 1/(aperture * k_t), and gap Robin
///     terms aperture/(2 k_n) on interface facets and 1/(2 k_n) at branch
///     ends meeting the crossing.
/// Boundary sides carry either a pressure value (natural for mixed,
/// essential for primal) or a no-flow condition (the reverse).

#include <Eigen/Dense>
#include <array>
#include <string>

#include "mdfem/derham.hpp"
#include "mdfem/mesh.hpp"

namespace mdfem {

enum class Method { Primal, Mixed1, Mixed2 };

Method method_from_string(const std::string& s);
std::string to_string(Method m);

struct BcEntry {
  bool is_pressure = false;
  double value = 0.0;
};

/// One entry per outer side tag (bottom, top, left, right), separately for
/// the bulk boundary and the fracture tips.
struct BcTable {
  std::array<BcEntry, 4> bulk;
  std::array<BcEntry, 4> fracture;
};

/// Flow across the fracture from bottom to top: pressure 0 below, pressure
/// 1 at the fracture's top tip, no-flow everywhere else.
BcTable benchmark_bcs();

struct ModelCoefficients {
  double k_bulk = 1.0;
  std::vector<Eigen::Matrix2d> bulk_tensor;  // optional per-subdomain tensors
  double k_tangent = 100.0;
  double k_normal = 100.0;
  BcTable bc = benchmark_bcs();
  ScalarFn source;  // bulk source density; null means zero

  Eigen::Matrix2d tensor_for(int subdomain) const {
    if (static_cast<size_t>(subdomain) < bulk_tensor.size()) return bulk_tensor[static_cast<size_t>(subdomain)];
    return k_bulk * Eigen::Matrix2d::Identity();
  }
};

/// Scalar pressure space of the primal method: one continuous linear block
/// per subdomain.
struct PrimalSpace {
  std::vector<BlockLayout> layout;
  std::vector<int> offset;
  int total = 0;
  SpaceSpec spec{Family::Full, 1};
};

PrimalSpace build_primal_space(const MixedMesh& mm);

struct PrimalSolution {
  PrimalSpace space;
  Eigen::VectorXd p;
  double residual = 0.0;
};

PrimalSolution solve_primal(const MixedMesh& mm, const ModelCoefficients& mc);

struct MixedSolution {
  Eigen::VectorXd flux;      // degree-1 coefficients of the complex
  Eigen::VectorXd pressure;  // degree-2 coefficients of the complex
  double conservation_inf = 0.0;  // max |(D1 flux - projected source) dof|
  double residual = 0.0;
};

/// Solve the saddle system on a complex assembled from a canonical
/// assignment (order 1 or 2).
MixedSolution solve_mixed(const MixedMesh& mm, const MixedComplex& cx, const ModelCoefficients& mc);

/// Size of the modeled interface pressure jump (the Robin gap terms applied
/// to the computed fluxes), as an L2-type aggregate over all interfaces.
double interface_jump_measure_mixed(const MixedMesh& mm, const MixedComplex& cx,
                                    const ModelCoefficients& mc, const MixedSolution& sol);

/// Direct L2-type aggregate of the trace differences (bulk trace minus
/// fracture pressure, fracture endpoint minus crossing pressure).
double interface_jump_measure_primal(const MixedMesh& mm, const ModelCoefficients& mc,
                                     const PrimalSolution& sol);

/// Discrete inf-sup constant of the divergence pairing: sqrt of the
/// smallest eigenvalue of (M2 D1) W^{-1} (M2 D1)^T against M2, where
/// W = M1 + D1^T M2 D1.
double infsup_witness(const MixedComplex& cx);

}  // namespace mdfem
