#include "mdfem/spaces.hpp"

#include <sstream>
#include <stdexcept>

namespace mdfem {

std::string to_string(SpaceSpec s) {
  std::ostringstream os;
  os << "P" << s.order;
  if (s.family == Family::Reduced) os << "-";
  return os.str();
}

SpaceSpec canonical_presentation(SpaceSpec s, int ell, int dim) {
  if (ell == 0) {
    // Reduced and full coincide on 0-forms.
    return {Family::Full, s.order};
  }
  if (ell == dim) {
    // At top degree the full space of order r equals the reduced space of
    // order r+1; use the reduced name.
    if (s.family == Family::Full) return {Family::Reduced, s.order + 1};
    return s;
  }
  return s;
}

int space_level(SpaceSpec s, int ell, int dim) {
  const SpaceSpec c = canonical_presentation(s, ell, dim);
  return c.family == Family::Full ? 2 * c.order : 2 * c.order - 1;
}

SpaceSpec trace_space(SpaceSpec s, int ell, int source_dim) {
  if (source_dim < 1) throw std::invalid_argument("trace source must have dimension >= 1");
  const int target_dim = source_dim - 1;
  if (ell < 0 || ell > target_dim)
    throw std::invalid_argument("form degree does not restrict to the target dimension");
  if (ell == 0) return {Family::Full, s.order};
  if (ell == target_dim) {
    // Present at top degree with the exchanged family name.
    if (s.family == Family::Full) return {Family::Reduced, s.order + 1};
    return {Family::Full, s.order - 1};
  }
  return s;
}

std::vector<CompatibilityIssue> check_compatibility(const StratifiedGeometry& g,
                                                    const SpaceAssignment& a) {
  std::vector<CompatibilityIssue> issues;
  const int n = g.n;
  if (a.spec.size() != g.subdomains.size()) {
    issues.push_back({-1, -1, "assignment does not cover every subdomain"});
    return issues;
  }
  for (const auto& sub : g.subdomains) {
    const auto& row = a.spec[static_cast<size_t>(sub.id)];
    for (int k = 0; k <= n; ++k) {
      const bool want = block_exists(k, sub.dim, n);
      const bool have = row[static_cast<size_t>(k)].has_value();
      if (want && !have)
        issues.push_back({sub.id, k, "missing space for an existing block"});
      if (!want && have)
        issues.push_back({sub.id, k, "space given for a block that does not exist"});
      if (want && have && row[static_cast<size_t>(k)]->order < 1)
        issues.push_back({sub.id, k, "polynomial order must be at least 1"});
    }
    // Local differentials must land in the next space: d maps the order-r
    // space (either family) into the full space of order r-1, so the next
    // space must contain that.
    for (int k = 0; k + 1 <= n; ++k) {
      if (!block_exists(k, sub.dim, n) || !block_exists(k + 1, sub.dim, n)) continue;
      if (!row[static_cast<size_t>(k)] || !row[static_cast<size_t>(k + 1)]) continue;
      const SpaceSpec src = *row[static_cast<size_t>(k)];
      const SpaceSpec dst = *row[static_cast<size_t>(k + 1)];
      const int ell_dst = local_degree(k + 1, sub.dim, n);
      const int need = 2 * (src.order - 1);
      if (space_level(dst, ell_dst, sub.dim) < need)
        issues.push_back({sub.id, k, "differential does not land in the next space"});
    }
  }
  // Traces from each upper neighbour must land in the lower space of the
  // next complex degree.
  for (const auto& sub : g.subdomains) {
    for (const auto& up : g.up[static_cast<size_t>(sub.id)]) {
      const Subdomain& upper = g.sub(up.neighbor);
      for (int k = 0; k + 1 <= n; ++k) {
        if (!block_exists(k, upper.dim, n) || !block_exists(k + 1, sub.dim, n)) continue;
        const auto& urow = a.spec[static_cast<size_t>(upper.id)];
        const auto& lrow = a.spec[static_cast<size_t>(sub.id)];
        if (!urow[static_cast<size_t>(k)] || !lrow[static_cast<size_t>(k + 1)]) continue;
        const int ell = local_degree(k + 1, sub.dim, n);  // = local degree of source block
        const SpaceSpec traced = trace_space(*urow[static_cast<size_t>(k)], ell, upper.dim);
        const SpaceSpec target = *lrow[static_cast<size_t>(k + 1)];
        if (space_level(traced, ell, sub.dim) > space_level(target, ell, sub.dim))
          issues.push_back({sub.id, k + 1, "trace from a neighbour is not contained in the receiving space"});
      }
    }
  }
  return issues;
}

SpaceAssignment canonical_assignment(const StratifiedGeometry& g, int order) {
  if (order < 1 || order > 2)
    throw std::invalid_argument("canonical assignments are provided for orders 1 and 2");
  SpaceAssignment a;
  a.spec.resize(g.subdomains.size());
  for (const auto& sub : g.subdomains) {
    auto& row = a.spec[static_cast<size_t>(sub.id)];
    for (int k = 0; k <= g.n; ++k) {
      if (!block_exists(k, sub.dim, g.n)) continue;
      const int ell = local_degree(k, sub.dim, g.n);
      if (ell == 0) {
        row[static_cast<size_t>(k)] = SpaceSpec{Family::Full, order};
      } else if (ell == sub.dim) {
        // Densities: piecewise constants at order 1, linear at order 2 on
        // lines; cell constants on bulk for both stock choices.
        const int r = sub.dim == 1 ? order : 1;
        row[static_cast<size_t>(k)] = SpaceSpec{Family::Reduced, r};
      } else {
        // Bulk fluxes: reduced order 1, then full order 1.
        row[static_cast<size_t>(k)] =
            order == 1 ? SpaceSpec{Family::Reduced, 1} : SpaceSpec{Family::Full, 1};
      }
    }
  }
  return a;
}

std::string format_assignment(const StratifiedGeometry& g, const SpaceAssignment& a) {
  std::ostringstream os;
  os << "subdomain            dim   k=0      k=1      k=2\n";
  for (const auto& sub : g.subdomains) {
    os << sub.name;
    for (size_t p = sub.name.size(); p < 21; ++p) os << ' ';
    os << sub.dim << "    ";
    for (int k = 0; k <= g.n; ++k) {
      const auto& slot = a.spec[static_cast<size_t>(sub.id)][static_cast<size_t>(k)];
      std::string cell = slot ? to_string(*slot) : ".";
      os << cell;
      for (size_t p = cell.size(); p < 9; ++p) os << ' ';
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace mdfem
