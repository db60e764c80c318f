#include <cmath>

#include "doctest.h"
#include "mdfem/solver.hpp"

using namespace mdfem;

namespace {

// Pressure 1 on the bottom, 0 on the top, sealed sides: the exact solution
// on the unfractured square is p = 1 - y with unit upward flux.
ModelCoefficients vertical_flow() {
  ModelCoefficients mc;
  mc.bc.bulk[static_cast<size_t>(kTagBottom)] = {true, 1.0};
  mc.bc.bulk[static_cast<size_t>(kTagTop)] = {true, 0.0};
  mc.bc.bulk[static_cast<size_t>(kTagLeft)] = {false, 0.0};
  mc.bc.bulk[static_cast<size_t>(kTagRight)] = {false, 0.0};
  mc.bc.fracture = mc.bc.bulk;
  return mc;
}

}  // namespace

TEST_CASE("method names round-trip") {
  for (Method m : {Method::Primal, Method::Mixed1, Method::Mixed2})
    CHECK(method_from_string(to_string(m)) == m);
  CHECK(to_string(Method::Primal) == "primal");
  CHECK(to_string(Method::Mixed1) == "mixed1");
  CHECK(to_string(Method::Mixed2) == "mixed2");
  CHECK_THROWS_AS(method_from_string("galerkin"), std::invalid_argument);
}

TEST_CASE("benchmark boundary table drives flow from bottom to fracture top") {
  const BcTable t = benchmark_bcs();
  CHECK(t.bulk[static_cast<size_t>(kTagBottom)].is_pressure);
  CHECK(t.bulk[static_cast<size_t>(kTagBottom)].value == 0.0);
  CHECK_FALSE(t.bulk[static_cast<size_t>(kTagTop)].is_pressure);
  CHECK_FALSE(t.bulk[static_cast<size_t>(kTagLeft)].is_pressure);
  CHECK_FALSE(t.bulk[static_cast<size_t>(kTagRight)].is_pressure);
  CHECK(t.fracture[static_cast<size_t>(kTagBottom)].is_pressure);
  CHECK(t.fracture[static_cast<size_t>(kTagTop)].is_pressure);
  CHECK(t.fracture[static_cast<size_t>(kTagTop)].value == 1.0);
  CHECK_FALSE(t.fracture[static_cast<size_t>(kTagLeft)].is_pressure);
}

TEST_CASE("primal method reproduces an affine pressure exactly") {
  const StratifiedGeometry g = build_unit_square_geometry();
  const MixedMesh mm = build_mesh(g, 3);
  const PrimalSolution ps = solve_primal(mm, vertical_flow());
  const SimplicialMesh& m = mm.meshes[0];
  REQUIRE(ps.space.total == m.num_vertices());
  double err = 0;
  for (int v = 0; v < m.num_vertices(); ++v)
    err = std::max(err, std::abs(ps.p[v] - (1.0 - m.vertices[static_cast<size_t>(v)].y)));
  CHECK(err <= 1e-12);
  CHECK(ps.residual <= 1e-10);
}

TEST_CASE("mixed methods reproduce an affine pressure exactly") {
  const StratifiedGeometry g = build_unit_square_geometry();
  const MixedMesh mm = build_mesh(g, 3);
  const ModelCoefficients mc = vertical_flow();
  const SimplicialMesh& m = mm.meshes[0];
  for (int order = 1; order <= 2; ++order) {
    CAPTURE(order);
    const MixedComplex cx = assemble_complex(mm, canonical_assignment(g, order));
    const MixedSolution ms = solve_mixed(mm, cx, mc);
    const SpaceSpec pspec = *cx.assignment.spec[0][2];
    const SpaceSpec fspec = *cx.assignment.spec[0][1];
    double perr = 0, ferr = 0;
    for (int c = 0; c < m.num_cells(); ++c) {
      for (const Point2 rp : {Point2{0.25, 0.25}, Point2{0.5, 0.25}, Point2{0.25, 0.5}}) {
        const double ph =
            evaluate_density_field(m, pspec, *cx.space[2].block[0],
                                   ms.pressure.segment(cx.space[2].offset[0], cx.space[2].block[0]->size),
                                   c, rp.x);
        // The pressure block is piecewise constant, so it can only match the
        // cell average of the affine field (its centroid value).
        perr = std::max(perr, std::abs(ph - (1.0 - m.cell_centroid(c).y)));
        const Point2 uh =
            evaluate_flux_field(m, fspec, *cx.space[1].block[0],
                                ms.flux.segment(cx.space[1].offset[0], cx.space[1].block[0]->size),
                                c, rp.x, rp.y);
        ferr = std::max(ferr, std::hypot(uh.x, uh.y - 1.0));
      }
    }
    CHECK(perr <= 1e-12);
    CHECK(ferr <= 1e-12);
    CHECK(ms.conservation_inf <= 1e-12);
  }
}

TEST_CASE("discrete conservation holds with a nonzero source") {
  const StratifiedGeometry g = build_unit_square_geometry();
  const MixedMesh mm = build_mesh(g, 3);
  ModelCoefficients mc = vertical_flow();
  mc.source = [](Point2 p) { return 1.0 + p.x; };
  for (int order = 1; order <= 2; ++order) {
    const MixedComplex cx = assemble_complex(mm, canonical_assignment(g, order));
    const MixedSolution ms = solve_mixed(mm, cx, mc);
    CHECK(ms.conservation_inf <= 1e-10);
    CHECK(ms.residual <= 1e-10);
  }
}

TEST_CASE("benchmark pressures obey the maximum principle") {
  const StratifiedGeometry g = build_cross_geometry(0.5, 0.5, 1e-3);
  const MixedMesh mm = build_mesh(g, 3);
  const ModelCoefficients mc;  // benchmark defaults
  const PrimalSolution ps = solve_primal(mm, mc);
  // Boundary data ranges over [0, 1]; the coupled solution must as well.
  CHECK(ps.p.minCoeff() >= -1e-12);
  CHECK(ps.p.maxCoeff() <= 1.0 + 1e-12);
  CHECK(ps.residual <= 1e-10);
}

TEST_CASE("mixed benchmark solves are conservative and deterministic") {
  const StratifiedGeometry g = build_cross_geometry(0.5, 0.5, 1e-3);
  const MixedMesh mm = build_mesh(g, 3);
  const ModelCoefficients mc;
  for (int order = 1; order <= 2; ++order) {
    CAPTURE(order);
    const MixedComplex cx = assemble_complex(mm, canonical_assignment(g, order));
    const MixedSolution a = solve_mixed(mm, cx, mc);
    const MixedSolution b = solve_mixed(mm, cx, mc);
    CHECK(a.conservation_inf <= 1e-10);
    CHECK(a.residual <= 1e-10);
    // Bitwise reproducibility of the direct sparse solve.
    CHECK((a.flux - b.flux).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK((a.pressure - b.pressure).lpNorm<Eigen::Infinity>() == 0.0);
  }
  const PrimalSolution pa = solve_primal(mm, mc);
  const PrimalSolution pb = solve_primal(mm, mc);
  CHECK((pa.p - pb.p).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("sealed sides carry exactly zero flux") {
  const StratifiedGeometry g = build_cross_geometry(0.5, 0.5, 1e-3);
  const MixedMesh mm = build_mesh(g, 3);
  const ModelCoefficients mc;
  for (int order = 1; order <= 2; ++order) {
    CAPTURE(order);
    const MixedComplex cx = assemble_complex(mm, canonical_assignment(g, order));
    const MixedSolution s = solve_mixed(mm, cx, mc);
    double worst = 0;
    for (const Subdomain& sub : g.subdomains) {
      const SimplicialMesh& m = mm.meshes[static_cast<size_t>(sub.id)];
      if (!cx.space[1].block[static_cast<size_t>(sub.id)]) continue;
      const BlockLayout& L = *cx.space[1].block[static_cast<size_t>(sub.id)];
      const int off = cx.space[1].offset[static_cast<size_t>(sub.id)];
      if (sub.dim == 2) {
        for (int e = 0; e < m.num_edges(); ++e) {
          const int tag = m.boundary_tag[static_cast<size_t>(e)];
          if (tag < 0 || tag >= 4 || mc.bc.bulk[static_cast<size_t>(tag)].is_pressure) continue;
          for (int c = 0; c < L.counts.per_edge; ++c)
            worst = std::max(worst,
                             std::abs(s.flux[off + L.edge_base + e * L.counts.per_edge + c]));
        }
      } else if (sub.dim == 1) {
        for (int v : {0, m.num_vertices() - 1}) {
          const int tag = m.boundary_tag[static_cast<size_t>(v)];
          if (tag < 0 || tag >= 4 || mc.bc.fracture[static_cast<size_t>(tag)].is_pressure) continue;
          worst = std::max(worst, std::abs(s.flux[off + L.vertex_base + v]));
        }
      }
    }
    CHECK(worst == 0.0);
  }
}

TEST_CASE("interface jump shrinks as the coupling stiffens") {
  const StratifiedGeometry g = build_cross_geometry(0.5, 0.5, 1e-3);
  const MixedMesh mm = build_mesh(g, 3);
  double prev_p = -1, prev_1 = -1, prev_2 = -1;
  for (double kn : {1e2, 1e4, 1e6, 1e8}) {
    ModelCoefficients mc;
    mc.k_normal = kn;
    const PrimalSolution ps = solve_primal(mm, mc);
    const double jp = interface_jump_measure_primal(mm, mc, ps);
    const MixedComplex cx1 = assemble_complex(mm, canonical_assignment(g, 1));
    const double j1 = interface_jump_measure_mixed(mm, cx1, mc, solve_mixed(mm, cx1, mc));
    const MixedComplex cx2 = assemble_complex(mm, canonical_assignment(g, 2));
    const double j2 = interface_jump_measure_mixed(mm, cx2, mc, solve_mixed(mm, cx2, mc));
    CHECK(jp > 0.0);
    CHECK(j1 > 0.0);
    CHECK(j2 > 0.0);
    if (prev_p >= 0) {
      CHECK(jp < prev_p);
      CHECK(j1 < prev_1);
      CHECK(j2 < prev_2);
    }
    prev_p = jp;
    prev_1 = j1;
    prev_2 = j2;
  }
  // The stiffest coupling pushes the modeled jump to the 1e-10 scale.
  CHECK(prev_1 <= 1e-8);
  CHECK(prev_2 <= 1e-8);
  CHECK(prev_p <= 1e-8);
}

TEST_CASE("divergence pairing stays uniformly inf-sup stable") {
  const StratifiedGeometry g = build_cross_geometry(0.5, 0.5, 1e-3);
  double first = -1;
  for (int level = 2; level <= 3; ++level) {
    const MixedMesh mm = build_mesh(g, level);
    for (int order = 1; order <= 2; ++order) {
      const double w = infsup_witness(assemble_complex(mm, canonical_assignment(g, order)));
      CHECK(w == doctest::Approx(0.8482).epsilon(0.01));
      if (first < 0) first = w;
      CHECK(w == doctest::Approx(first).epsilon(0.02));
    }
  }
}

TEST_CASE("primal space stacks one vertex block per subdomain") {
  const StratifiedGeometry g = build_cross_geometry(0.5, 0.5, 1e-3);
  const MixedMesh mm = build_mesh(g, 2);
  const PrimalSpace ps = build_primal_space(mm);
  int total = 0;
  for (const Subdomain& s : g.subdomains) {
    CHECK(ps.offset[static_cast<size_t>(s.id)] == total);
    CHECK(ps.layout[static_cast<size_t>(s.id)].size ==
          mm.meshes[static_cast<size_t>(s.id)].num_vertices());
    total += ps.layout[static_cast<size_t>(s.id)].size;
  }
  CHECK(ps.total == total);
}
