#pragma once
/// Polynomial-space bookkeeping for the mixed-dimensional complex: each
/// subdomain of dimension d carries, for complex degree k, a space of local
/// differential forms of degree ell = k - (n - d) whenever 0 <= ell <= d.
/// A space is identified by a family (full polynomial or trimmed/reduced)
/// and a polynomial order r >= 1.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "mdfem/geometry.hpp"

namespace mdfem {

enum class Family { Full, Reduced };

struct SpaceSpec {
  Family family = Family::Full;
  int order = 1;
};

inline bool operator==(SpaceSpec a, SpaceSpec b) {
  return a.family == b.family && a.order == b.order;
}
inline bool operator!=(SpaceSpec a, SpaceSpec b) { return !(a == b); }

/// Local form degree of the degree-k block on a dim-d subdomain (n = 2).
inline int local_degree(int k, int d, int n = 2) { return k - (n - d); }

/// True when the block exists: 0 <= local degree <= d.
inline bool block_exists(int k, int d, int n = 2) {
  const int ell = local_degree(k, d, n);
  return ell >= 0 && ell <= d;
}

/// Printable name, e.g. "P2" (full order 2) or "P2-" (reduced order 2).
std::string to_string(SpaceSpec s);

/// Rewrite the identification in canonical form for degree-ell forms on a
/// dim-d subdomain: at ell = 0 full and reduced coincide (named full), and
/// at top degree ell = d the full space of order r equals the reduced space
/// of order r+1 (named reduced).
SpaceSpec canonical_presentation(SpaceSpec s, int ell, int dim);

/// Containment rank among spaces of degree-ell forms on a dim-d subdomain:
/// the space with the smaller level is contained in the one with the larger.
int space_level(SpaceSpec s, int ell, int dim);

/// Space of pullbacks of degree-ell forms onto a codimension-one subdomain
/// (target dimension = source dimension - 1). Family and order are
/// preserved up to the canonical renaming at extreme degrees.
SpaceSpec trace_space(SpaceSpec s, int ell, int source_dim);

/// Per-subdomain, per complex-degree space choice.  spec[i][k] must be
/// populated exactly when the block exists.
struct SpaceAssignment {
  std::vector<std::array<std::optional<SpaceSpec>, 3>> spec;
};

struct CompatibilityIssue {
  int subdomain = -1;
  int degree = -1;
  std::string what;
};

/// Verify the assignment forms a valid complex: the block pattern matches
/// the geometry, each local differential lands in the next space, and each
/// trace lands in the receiving neighbour's space.
std::vector<CompatibilityIssue> check_compatibility(const StratifiedGeometry& g,
                                                    const SpaceAssignment& a);

/// Stock assignments: order 1 uses the lowest-order flux pair (continuous
/// linears / lowest reduced fluxes / piecewise constants), order 2 the
/// next-order pair (continuous quadratics / full linear fluxes / linear
/// densities on lines).
SpaceAssignment canonical_assignment(const StratifiedGeometry& g, int order);

/// Human-readable table of an assignment.
std::string format_assignment(const StratifiedGeometry& g, const SpaceAssignment& a);

}  // namespace mdfem
