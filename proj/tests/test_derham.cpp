#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "mdfem/derham.hpp"

using namespace mdfem;

namespace {

double max_abs_entry(const SpMat& A) {
  double m = 0;
  for (int k = 0; k < A.outerSize(); ++k)
    for (SpMat::InnerIterator it(A, k); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

// Global cochain built by interpolating an analytic field into every block
// of the given degree (zero elsewhere).
Eigen::VectorXd scalar_cochain(const MixedComplex& cx, const ScalarFn& f) {
  const MixedMesh& mm = *cx.mesh;
  Eigen::VectorXd v = Eigen::VectorXd::Zero(cx.space[0].total);
  for (const Subdomain& s : mm.geometry.subdomains) {
    if (!cx.space[0].block[static_cast<size_t>(s.id)]) continue;
    const auto spec = *cx.assignment.spec[static_cast<size_t>(s.id)][0];
    v.segment(cx.space[0].offset[static_cast<size_t>(s.id)],
              cx.space[0].block[static_cast<size_t>(s.id)]->size) =
        interpolate_scalar(mm.meshes[static_cast<size_t>(s.id)], spec, f);
  }
  return v;
}

}  // namespace

TEST_CASE("differential of nodal scalars is the interpolated rotated gradient") {
  // On the unfractured square the complex is classical: the degree-0
  // differential of an interpolant must equal the flux interpolant of the
  // rotated gradient (the 1-form proxy), exactly for polynomial inputs.
  const StratifiedGeometry g = build_unit_square_geometry();
  const MixedMesh mm = build_mesh(g, 2);
  for (int order = 1; order <= 2; ++order) {
    const MixedComplex cx = assemble_complex(mm, canonical_assignment(g, order));
    const SimplicialMesh& m = mm.meshes[0];

    // Quadratic for order 2, affine for order 1: p and its gradient.
    ScalarFn p;
    VectorFn rot_grad;
    if (order == 1) {
      p = [](Point2 q) { return 2.0 + 3.0 * q.x - 5.0 * q.y; };
      rot_grad = [](Point2) { return Point2{-5.0, -3.0}; };  // (dp/dy, -dp/dx)
    } else {
      p = [](Point2 q) { return q.x * q.x - 2.0 * q.x * q.y + 3.0 * q.y; };
      rot_grad = [](Point2 q) { return Point2{-2.0 * q.x + 3.0, -(2.0 * q.x - 2.0 * q.y)}; };
    }
    const auto fspec = *cx.assignment.spec[0][1];
    const Eigen::VectorXd a = interpolate_scalar(m, *cx.assignment.spec[0][0], p);
    const Eigen::VectorXd expected = interpolate_flux(m, fspec, rot_grad);
    const Eigen::VectorXd got = cx.D[0] * a;
    REQUIRE(got.size() == expected.size());
    CHECK((got - expected).lpNorm<Eigen::Infinity>() <= 1e-12 * (1 + expected.lpNorm<Eigen::Infinity>()));
  }
}

TEST_CASE("differential of fluxes is the interpolated divergence") {
  const StratifiedGeometry g = build_unit_square_geometry();
  const MixedMesh mm = build_mesh(g, 2);
  for (int order = 1; order <= 2; ++order) {
    const MixedComplex cx = assemble_complex(mm, canonical_assignment(g, order));
    const SimplicialMesh& m = mm.meshes[0];
    const VectorFn u = [](Point2 q) { return Point2{0.5 + q.x - 2.0 * q.y, -1.0 + 3.0 * q.x + q.y}; };
    const ScalarFn divu = [](Point2) { return 2.0; };  // d/dx(...) + d/dy(...) = 1 + 1
    const Eigen::VectorXd b = interpolate_flux(m, *cx.assignment.spec[0][1], u);
    const Eigen::VectorXd expected = interpolate_density(m, *cx.assignment.spec[0][2], divu);
    const Eigen::VectorXd got = cx.D[1] * b;
    CHECK((got - expected).lpNorm<Eigen::Infinity>() <= 1e-12 * (1 + expected.lpNorm<Eigen::Infinity>()));
  }
}

TEST_CASE("classical incidence structure at lowest order") {
  const StratifiedGeometry g = build_unit_square_geometry();
  const MixedMesh mm = build_mesh(g, 2);
  const MixedComplex cx = assemble_complex(mm, canonical_assignment(g, 1));
  // Degree-0 differential: one row per edge with entries -1, +1.
  const Eigen::MatrixXd D0(cx.D[0]);
  for (int r = 0; r < D0.rows(); ++r) {
    int nnz = 0;
    double sum = 0;
    for (int c = 0; c < D0.cols(); ++c)
      if (D0(r, c) != 0) {
        ++nnz;
        sum += D0(r, c);
        CHECK(std::abs(D0(r, c)) == 1.0);
      }
    CHECK(nnz == 2);
    CHECK(sum == 0.0);
  }
  // Degree-1 differential: one row per triangle with three +-1 entries.
  const Eigen::MatrixXd D1(cx.D[1]);
  for (int r = 0; r < D1.rows(); ++r) {
    int nnz = 0;
    for (int c = 0; c < D1.cols(); ++c)
      if (D1(r, c) != 0) {
        ++nnz;
        CHECK(std::abs(D1(r, c)) == 1.0);
      }
    CHECK(nnz == 3);
  }
}

TEST_CASE("composition of consecutive differentials vanishes exactly") {
  const StratifiedGeometry g = build_cross_geometry(0.5, 0.5, 1e-3);
  const MixedMesh mm = build_mesh(g, 2);
  for (int order = 1; order <= 2; ++order) {
    const MixedComplex cx = assemble_complex(mm, canonical_assignment(g, order));
    CHECK(max_abs_entry((cx.D[1] * cx.D[0]).pruned(0.0)) == 0.0);
  }
}

TEST_CASE("interface rows annihilate continuous scalars") {
  // The degree-0 differential's fracture rows hold signed trace differences;
  // a globally continuous interpolant must produce exact zeros there.
  const StratifiedGeometry g = build_cross_geometry(0.5, 0.5, 1e-3);
  const MixedMesh mm = build_mesh(g, 2);
  for (int order = 1; order <= 2; ++order) {
    const MixedComplex cx = assemble_complex(mm, canonical_assignment(g, order));
    const Eigen::VectorXd a =
        scalar_cochain(cx, [](Point2 q) { return 1.0 + 2.0 * q.x - 0.5 * q.y + q.x * q.y; });
    const Eigen::VectorXd da = cx.D[0] * a;
    for (int b : g.ids_of_dim(1)) {
      const auto& blk = cx.space[1].block[static_cast<size_t>(b)];
      REQUIRE(blk.has_value());
      const double sz =
          da.segment(cx.space[1].offset[static_cast<size_t>(b)], blk->size).lpNorm<Eigen::Infinity>();
      CHECK(sz <= 1e-13);
    }
  }
}

TEST_CASE("crossing row annihilates branch scalars that agree at the point") {
  const StratifiedGeometry g = build_cross_geometry(0.5, 0.5, 1e-3);
  const MixedMesh mm = build_mesh(g, 2);
  const MixedComplex cx = assemble_complex(mm, canonical_assignment(g, 1));
  // Degree-1 cochain: branch scalars from one continuous function, zero flux.
  Eigen::VectorXd b = Eigen::VectorXd::Zero(cx.space[1].total);
  for (int br : g.ids_of_dim(1)) {
    const auto spec = *cx.assignment.spec[static_cast<size_t>(br)][1];
    b.segment(cx.space[1].offset[static_cast<size_t>(br)],
              cx.space[1].block[static_cast<size_t>(br)]->size) =
        interpolate_scalar(mm.meshes[static_cast<size_t>(br)], spec,
                           [](Point2 q) { return 3.0 + q.x + 2.0 * q.y; });
  }
  const Eigen::VectorXd db = cx.D[1] * b;
  const int node = g.ids_of_dim(0)[0];
  const double at_node = std::abs(db[cx.space[2].offset[static_cast<size_t>(node)]]);
  CHECK(at_node <= 1e-13);
}

TEST_CASE("inner products weigh constants by measure plus trace terms") {
  const StratifiedGeometry g = build_cross_geometry(0.5, 0.5, 1e-3);
  const MixedMesh mm = build_mesh(g, 2);
  for (int order = 1; order <= 2; ++order) {
    const MixedComplex cx = assemble_complex(mm, canonical_assignment(g, order));

    // Constant scalar 1 on the bulk: bulk area 1, plus a line trace term per
    // branch side (total 4 x 2 x 0.5), plus a point term per quadrant at the
    // crossing (4): 1 + 4 + 4 = 9.
    const Eigen::VectorXd a = scalar_cochain(cx, [](Point2) { return 1.0; });
    CHECK(a.dot(cx.M[0] * a) == doctest::Approx(9.0).epsilon(1e-12));

    // Constant flux (1,0) with unit branch scalars: bulk energy 1, normal
    // traces on the two vertical branches (2 x 2 sides x 0.5), branch masses
    // (4 x 0.5), endpoint terms at the crossing (4): 1 + 2 + 2 + 4 = 9.
    Eigen::VectorXd b = Eigen::VectorXd::Zero(cx.space[1].total);
    for (int q : g.ids_of_dim(2))
      b.segment(cx.space[1].offset[static_cast<size_t>(q)],
                cx.space[1].block[static_cast<size_t>(q)]->size) =
          interpolate_flux(mm.meshes[static_cast<size_t>(q)],
                           *cx.assignment.spec[static_cast<size_t>(q)][1],
                           [](Point2) { return Point2{1.0, 0.0}; });
    for (int br : g.ids_of_dim(1))
      b.segment(cx.space[1].offset[static_cast<size_t>(br)],
                cx.space[1].block[static_cast<size_t>(br)]->size) =
          interpolate_scalar(mm.meshes[static_cast<size_t>(br)],
                             *cx.assignment.spec[static_cast<size_t>(br)][1],
                             [](Point2) { return 1.0; });
    CHECK(b.dot(cx.M[1] * b) == doctest::Approx(9.0).epsilon(1e-12));

    // Constant densities: bulk 1 + branches 4 x 0.5 + point 1 = 4.
    Eigen::VectorXd c = Eigen::VectorXd::Zero(cx.space[2].total);
    for (const Subdomain& s : g.subdomains)
      c.segment(cx.space[2].offset[static_cast<size_t>(s.id)],
                cx.space[2].block[static_cast<size_t>(s.id)]->size) =
          interpolate_density(mm.meshes[static_cast<size_t>(s.id)],
                              *cx.assignment.spec[static_cast<size_t>(s.id)][2],
                              [](Point2) { return 1.0; });
    CHECK(c.dot(cx.M[2] * c) == doctest::Approx(4.0).epsilon(1e-12));

    // All three inner products are symmetric positive definite.
    for (int k = 0; k <= 2; ++k) {
      const SpMat& M = cx.M[static_cast<size_t>(k)];
      CHECK(max_abs_entry(SpMat((M - SpMat(M.transpose())).pruned(0.0))) <= 1e-14);
      Eigen::SimplicialLDLT<SpMat> ldlt(M);
      REQUIRE(ldlt.info() == Eigen::Success);
      CHECK(ldlt.vectorD().minCoeff() > 0.0);
    }
  }
}

TEST_CASE("codifferential is the inner-product adjoint of the differential") {
  const StratifiedGeometry g = build_cross_geometry(0.5, 0.5, 1e-3);
  const MixedMesh mm = build_mesh(g, 2);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int order = 1; order <= 2; ++order) {
    const MixedComplex cx = assemble_complex(mm, canonical_assignment(g, order));
    for (int k = 1; k <= 2; ++k) {
      for (int trial = 0; trial < 5; ++trial) {
        Eigen::VectorXd v(cx.space[static_cast<size_t>(k)].total);
        for (int i = 0; i < v.size(); ++i) v[i] = uni(rng);
        const Eigen::VectorXd r = codifferential_apply(cx, k, v);
        const Eigen::VectorXd lhs = cx.M[static_cast<size_t>(k - 1)] * r;
        const Eigen::VectorXd rhs =
            cx.D[static_cast<size_t>(k - 1)].transpose() * (cx.M[static_cast<size_t>(k)] * v);
        CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() <=
              1e-12 * std::max(1.0, rhs.lpNorm<Eigen::Infinity>()));
      }
    }
    CHECK_THROWS_AS(codifferential_apply(cx, 0, Eigen::VectorXd::Zero(cx.space[0].total)),
                    std::invalid_argument);
  }
}

TEST_CASE("Helmholtz decomposition: reconstruction and orthogonality") {
  const StratifiedGeometry g = build_cross_geometry(0.5, 0.5, 1e-3);
  const MixedMesh mm = build_mesh(g, 2);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int order = 1; order <= 2; ++order) {
    const MixedComplex cx = assemble_complex(mm, canonical_assignment(g, order));
    for (int k = 1; k <= 2; ++k) {
      Eigen::VectorXd v(cx.space[static_cast<size_t>(k)].total);
      for (int i = 0; i < v.size(); ++i) v[i] = uni(rng);
      const HelmholtzParts parts = helmholtz_decompose(cx, k, v);
      const double scale = std::max(1.0, v.lpNorm<Eigen::Infinity>());
      CHECK((v - parts.exact - parts.coexact - parts.harmonic).lpNorm<Eigen::Infinity>() <=
            1e-10 * scale);
      const SpMat& M = cx.M[static_cast<size_t>(k)];
      CHECK(std::abs(parts.exact.dot(M * parts.coexact)) <= 1e-10 * std::max(1.0, v.dot(M * v)));
      // The cross complex has trivial degree-1 cohomology, so the harmonic
      // part is numerically zero.
      if (k == 1)
        CHECK(parts.harmonic.lpNorm<Eigen::Infinity>() <= 1e-8 * scale);
    }
  }
}

TEST_CASE("cohomology dimensions match the domain topology") {
  const StratifiedGeometry cross = build_cross_geometry(0.5, 0.5, 1e-3);
  const MixedMesh mc = build_mesh(cross, 2);
  for (int order = 1; order <= 2; ++order) {
    const MixedComplex cx = assemble_complex(mc, canonical_assignment(cross, order));
    const auto betti = cohomology_dims(cx);
    CHECK(betti[0] == 1);
    CHECK(betti[1] == 0);
    CHECK(betti[2] == 0);
    // Sparse and dense rank paths agree.
    CHECK(cohomology_dims(cx, /*force_sparse=*/true) == betti);
  }

  // A pure fracture network (no bulk): four branch constants constrained
  // once at the crossing leave a 3-dimensional degree-1 kernel.
  const StratifiedGeometry net = build_fracture_network_geometry(0.5, 0.5, 1e-3);
  const MixedMesh mn = build_mesh(net, 2);
  for (int order = 1; order <= 2; ++order) {
    const MixedComplex cx = assemble_complex(mn, canonical_assignment(net, order));
    const auto betti = cohomology_dims(cx);
    CHECK(betti[0] == 0);
    CHECK(betti[1] == 3);
    CHECK(betti[2] == 0);
    CHECK(cohomology_dims(cx, /*force_sparse=*/true) == betti);
  }
}

TEST_CASE("Poincare estimates recover flat-square constants") {
  // On the unfractured unit square the degree-0 estimate approaches the
  // Neumann constant 1/pi and the degree-2 estimate the dual constant
  // 1/(pi sqrt(2)); degrees 0 and 1 share their nonzero spectrum.
  const StratifiedGeometry g = build_unit_square_geometry();
  const MixedMesh mm = build_mesh(g, 3);
  for (int order = 1; order <= 2; ++order) {
    const MixedComplex cx = assemble_complex(mm, canonical_assignment(g, order));
    const double c0 = poincare_estimate(cx, 0);
    const double c1 = poincare_estimate(cx, 1);
    const double c2 = poincare_estimate(cx, 2);
    CHECK(c0 == doctest::Approx(1.0 / M_PI).epsilon(0.05));
    CHECK(c2 == doctest::Approx(1.0 / (M_PI * std::sqrt(2.0))).epsilon(0.05));
    CHECK(c1 == doctest::Approx(c0).epsilon(1e-8));
  }
}

TEST_CASE("assembly rejects incompatible assignments") {
  const StratifiedGeometry g = build_cross_geometry(0.5, 0.5, 1e-3);
  const MixedMesh mm = build_mesh(g, 2);
  SpaceAssignment bad = canonical_assignment(g, 2);
  for (int b : g.ids_of_dim(1)) bad.spec[static_cast<size_t>(b)][2] = SpaceSpec{Family::Reduced, 1};
  CHECK_THROWS_AS(assemble_complex(mm, bad), std::invalid_argument);
}

TEST_CASE("matrix dump uses a parseable coordinate format") {
  const StratifiedGeometry g = build_unit_square_geometry();
  const MixedMesh mm = build_mesh(g, 1);
  const MixedComplex cx = assemble_complex(mm, canonical_assignment(g, 1));
  std::ostringstream os;
  dump_matrix_coord(os, cx.D[0]);
  std::istringstream is(os.str());
  std::string tag;
  int rows = 0, cols = 0, nnz = 0;
  is >> tag >> rows >> cols >> nnz;
  CHECK(tag == "coo");
  CHECK(rows == cx.D[0].rows());
  CHECK(cols == cx.D[0].cols());
  CHECK(nnz == static_cast<int>(cx.D[0].nonZeros()));
  int count = 0;
  int r = 0, c = 0;
  double val = 0;
  while (is >> r >> c >> val) {
    CHECK(r >= 0);
    CHECK(r < rows);
    CHECK(c >= 0);
    CHECK(c < cols);
    ++count;
  }
  CHECK(count == nnz);
}
