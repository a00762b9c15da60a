#include <doctest.h>

#include "test_util.hpp"
#include "wproj/instances.hpp"
#include "wproj/projections.hpp"

using namespace wproj;
using testutil::diff;
using testutil::eye;
using testutil::mat;
using testutil::vec;

namespace {
const ToleranceConfig kTol;

Matrix projection_onto(const PsdOperator& a, std::initializer_list<std::initializer_list<Complex>> span) {
  return distinguished_projection(a, Subspace::span_of(mat(span)), kTol);
}
}  // namespace

TEST_CASE("kernel intersection") {
  CHECK(subspace_gap(kernel_intersection(PsdOperator(mat({{1, 0}, {0, 0}})),
                                         Subspace::span_of(mat({{0}, {1}})), kTol),
                     Subspace::span_of(mat({{0}, {1}}))) < 1e-13);
  CHECK(kernel_intersection(PsdOperator(mat({{2, 1}, {1, 2}})),
                            Subspace::span_of(mat({{1}, {1}})), kTol)
            .dim() == 0);
  const PsdOperator a(mat({{1, 0, 0}, {0, 0, 0}, {0, 0, 0}}));
  const Subspace s = Subspace::span_of(mat({{1, 0}, {1, 0}, {0, 1}}));
  CHECK(subspace_gap(kernel_intersection(a, s, kTol), Subspace::span_of(mat({{0}, {0}, {1}}))) <
        1e-13);
}

TEST_CASE("compatibility certificate") {
  const auto on_identity =
      compatibility_certificate(PsdOperator(eye(3)), Subspace::span_of(mat({{1}, {0}, {1}})), kTol);
  CHECK(on_identity.compatible);
  CHECK(on_identity.residual < 1e-14);
  CHECK(on_identity.degenerate.dim() == 0);

  const auto degenerate = compatibility_certificate(PsdOperator(mat({{1, 0}, {0, 0}})),
                                                    Subspace::span_of(mat({{0}, {1}})), kTol);
  CHECK(degenerate.compatible);
  CHECK(degenerate.degenerate.dim() == 1);

  for (int trial = 0; trial < 20; ++trial) {
    Rng rng(derive_seed(11, 1, std::uint64_t(trial)));
    const Index n = rng.index(1, 8);
    const auto pair = gen::random_pair(rng, n, false);
    const auto cert = compatibility_certificate(pair.a, pair.s, kTol);
    CHECK(cert.compatible);
    CHECK(cert.residual <= kTol.residual_tol);
  }
}

TEST_CASE("distinguished projection on the stated examples") {
  CHECK(diff(projection_onto(PsdOperator(eye(2)), {{1}, {1}}), 0.5 * mat({{1, 1}, {1, 1}})) <
        1e-14);
  CHECK(diff(projection_onto(PsdOperator(mat({{1, 0}, {0, 0}})), {{1}, {1}}),
             mat({{1, 0}, {1, 0}})) < 1e-13);
  CHECK(diff(projection_onto(PsdOperator(mat({{1, 0}, {0, 4}})), {{1}, {1}}),
             0.2 * mat({{1, 4}, {1, 4}})) < 1e-13);
}

TEST_CASE("invertible-case projection") {
  const PsdOperator diag14(mat({{1, 0}, {0, 4}}));
  const Subspace s = Subspace::span_of(mat({{1}, {1}}));
  CHECK(diff(invertible_case_projection(PsdOperator(eye(2)), s, kTol), s.projector()) < 1e-13);
  CHECK(diff(invertible_case_projection(diag14, s, kTol), 0.2 * mat({{1, 4}, {1, 4}})) < 1e-13);
  CHECK_THROWS_AS(invertible_case_projection(PsdOperator(mat({{1, 0}, {0, 0}})), s, kTol),
                  PreconditionError);

  for (int trial = 0; trial < 20; ++trial) {
    Rng rng(derive_seed(11, 2, std::uint64_t(trial)));
    const Index n = rng.index(1, 8);
    const PsdOperator a = gen::random_psd(rng, n, n);
    const Subspace sub = gen::random_subspace(rng, n, rng.index(0, n));
    CHECK(diff(invertible_case_projection(a, sub, kTol), distinguished_projection(a, sub, kTol)) <=
          1e-8 * (1.0 + a.mat().norm()));
  }
}

TEST_CASE("projection families") {
  SUBCASE("identity weight gives a singleton") {
    const Subspace s = Subspace::span_of(mat({{1}, {0}}));
    const auto fam = projection_family(PsdOperator(eye(2)), s, kTol);
    CHECK(fam.param_rows() == 0);
    CHECK(diff(fam.base, s.projector()) < 1e-14);
    const auto pi = weighted_projection_family(PsdOperator(eye(2)), s, kTol);
    CHECK(pi.param_rows() == 0);
  }
  SUBCASE("a stated member of P(A,S)") {
    const PsdOperator a(mat({{1, 0}, {0, 0}}));
    const Subspace s = Subspace::span_of(mat({{0}, {1}}));
    const Matrix q = mat({{0, 0}, {1, 1}});
    CHECK(p_membership_residual(a, s, q, kTol) <= 1e-12);
    const auto fam = projection_family(a, s, kTol);
    CHECK(fam.param_rows() == 1);
    CHECK(fam.param_cols() == 1);
    CHECK(fam.parametrization_residual(q) <= 1e-12);
  }
  SUBCASE("weighted family over a kernel subspace has full freedom") {
    const PsdOperator a(mat({{1, 0}, {0, 0}}));
    const Subspace s = Subspace::span_of(mat({{0}, {1}}));
    const auto fam = weighted_projection_family(a, s, kTol);
    CHECK(fam.param_rows() == 1);
    CHECK(fam.param_cols() == 2);
    // any operator with range inside span{e2} is a member
    CHECK(pi_membership_residual(a, s, mat({{0, 0}, {3, -2}})) <= 1e-12);
  }
  SUBCASE("invertible weight collapses both families") {
    Rng rng(derive_seed(11, 3, 0));
    const PsdOperator a = gen::random_psd(rng, 4, 4);
    const Subspace s = gen::random_subspace(rng, 4, 2);
    const auto p = projection_family(a, s, kTol);
    const auto pi = weighted_projection_family(a, s, kTol);
    CHECK(p.param_rows() == 0);
    CHECK(pi.param_rows() == 0);
    CHECK(diff(p.base, pi.base) < 1e-13);
  }
}

TEST_CASE("classification of the stated operators") {
  SUBCASE("orthogonal projection under the identity weight") {
    const Subspace s = Subspace::span_of(mat({{1}, {0}}));
    const auto rep = classify_operator(PsdOperator(eye(2)), s.projector(), s, kTol);
    CHECK(rep.a_projection);
    CHECK(rep.routes_agree);
    CHECK(*rep.a_projection_into_s);
    CHECK(rep.a_contraction.pass);
    CHECK(rep.a_positive.pass);
    CHECK(rep.seminorm_of_t == doctest::Approx(1.0));
  }
  SUBCASE("hand-assembled weighted projection") {
    const PsdOperator a(mat({{1, 0}, {0, 0}}));
    const Matrix t = mat({{1, 0}, {1, 0}});
    const auto rep = classify_operator(a, t, Subspace::span_of(mat({{1}, {1}})), kTol);
    CHECK(rep.a_projection);
    CHECK(*rep.a_projection_into_s);
    CHECK(rep.seminorm_of_t == doctest::Approx(1.0));
  }
  SUBCASE("idempotent that is not a weighted projection") {
    const Matrix t = mat({{1, 1}, {0, 0}});
    const auto rep = classify_operator(PsdOperator(eye(2)), t, std::nullopt, kTol);
    CHECK(rep.a_idempotent.pass);
    CHECK(!rep.a_selfadjoint.pass);
    CHECK(!rep.a_projection);
    CHECK(rep.routes_agree);
  }
}

TEST_CASE("complement of a weighted projection is a weighted projection") {
  for (int trial = 0; trial < 20; ++trial) {
    Rng rng(derive_seed(11, 4, std::uint64_t(trial)));
    const Index n = rng.index(2, 8);
    const auto pair = gen::random_pair(rng, n, trial % 2 == 0);
    const auto fam = weighted_projection_family(pair.a, pair.s, kTol);
    const Matrix t = fam.member(rng.matrix(fam.param_rows(), fam.param_cols()));
    const auto rep = classify_operator(pair.a, eye(n) - t, std::nullopt, kTol);
    CHECK(rep.a_projection);
    CHECK(rep.routes_agree);
  }
}

TEST_CASE("membership is equivalent to the reduced-space decomposition") {
  for (int trial = 0; trial < 20; ++trial) {
    Rng rng(derive_seed(11, 5, std::uint64_t(trial)));
    const Index n = rng.index(2, 8);
    const auto pair = gen::random_pair(rng, n, true);
    const Subspace nker = kernel_intersection(pair.a, pair.s, kTol);
    const Subspace reduced = subspace_ominus(pair.s, nker, kTol);
    const Matrix p_reduced = distinguished_projection(pair.a, reduced, kTol);
    const Matrix p_full = distinguished_projection(pair.a, pair.s, kTol);

    // P_{A,S} = P_{A,S(-)N} + P_N
    CHECK(diff(p_full, p_reduced + nker.projector()) <= 1e-8 * (1.0 + pair.a.mat().norm()));

    const auto fam = weighted_projection_family(pair.a, pair.s, kTol);
    const Matrix t = fam.member(rng.matrix(fam.param_rows(), fam.param_cols()));
    // member direction: P_{S(-)N} T = P_{A,S(-)N}
    CHECK(diff(reduced.projector() * t, p_reduced) <= 1e-8 * (1.0 + t.norm()));
    // every member multiplies to the same A T
    CHECK(diff(pair.a.mat() * t, pair.a.mat() * p_full) <= 1e-8 * (1.0 + pair.a.mat().norm()));

    // converse direction: prescribing the compression forces membership
    const Matrix glue = nker.projector() * rng.matrix(n, n);
    const Matrix candidate = p_reduced + glue;
    CHECK(pi_membership_residual(pair.a, pair.s, candidate) <= kTol.residual_tol);
  }
}

TEST_CASE("block characterization of the weighted family") {
  // Members are exactly the operators with upper block row (x, y) in the
  // (S, S-perp) frame solving a x = a and a y = b.
  for (int trial = 0; trial < 20; ++trial) {
    Rng rng(derive_seed(11, 8, std::uint64_t(trial)));
    const Index n = rng.index(2, 8);
    const auto pair = gen::random_pair(rng, n, trial % 2 == 0);
    const auto dec = block_decompose(pair.a, pair.s);
    const Matrix& u = dec.subspace.basis();
    const Matrix& v = dec.complement.basis();
    const Index k = u.cols();

    const auto fam = weighted_projection_family(pair.a, pair.s, kTol);
    const Matrix t = fam.member(rng.matrix(fam.param_rows(), fam.param_cols()));
    const Matrix x = u.adjoint() * t * u;
    const Matrix y = u.adjoint() * t * v;
    const double scale = 1.0 + pair.a.mat().norm() + t.norm();
    CHECK(diff(dec.a * x, dec.a) <= 1e-8 * scale);
    CHECK(diff(dec.a * y, dec.b) <= 1e-8 * scale);
    CHECK((v.adjoint() * t).norm() <= 1e-8 * scale);  // lower block row vanishes

    // Converse: assemble a block solution and watch it land in the family.
    const Subspace ker = kernel_intersection(pair.a, pair.s, kTol);
    const Matrix ker_coords = u.adjoint() * ker.basis();  // kernel of a, in S coordinates
    const Matrix d = reduced_solution(dec.a, dec.b, kTol, pair.a.mat().norm());
    const Matrix x_sol = Matrix::Identity(k, k) + ker_coords * rng.matrix(ker.dim(), k);
    const Matrix y_sol = d + ker_coords * rng.matrix(ker.dim(), n - k);
    const Matrix built = u * x_sol * u.adjoint() + u * y_sol * v.adjoint();
    CHECK(pi_membership_residual(pair.a, pair.s, built) <= kTol.residual_tol);
  }
}

TEST_CASE("cardinality dichotomy") {
  for (int trial = 0; trial < 20; ++trial) {
    Rng rng(derive_seed(11, 6, std::uint64_t(trial)));
    const Index n = rng.index(2, 8);
    const auto pair = gen::random_pair(rng, n, trial % 2 == 0);
    const auto pfam = projection_family(pair.a, pair.s, kTol);
    const auto pifam = weighted_projection_family(pair.a, pair.s, kTol);
    const Index deg = kernel_intersection(pair.a, pair.s, kTol).dim();
    CHECK((pfam.param_rows() == 0) == (deg == 0));
    CHECK((pifam.param_rows() == 0) == (deg == 0));
    if (deg > 0) {
      const Matrix witness = pifam.base + pifam.range_space.projector();
      CHECK(pi_membership_residual(pair.a, pair.s, witness) <= kTol.residual_tol);
      CHECK(diff(witness * witness, witness) > 1e-4);
    }
  }
}

TEST_CASE("minimality report") {
  Rng rng(derive_seed(11, 7, 0));
  const PsdOperator a(mat({{1, 0, 0}, {0, 2, 0}, {0, 0, 0}}));
  const Subspace s = Subspace::span_of(mat({{1, 0}, {0, 0}, {0, 1}}));
  const Matrix p = distinguished_projection(a, s, kTol);

  SUBCASE("the base achieves both minima") {
    const auto rep = minimality_report(a, s, p, Vector(vec({1, 2, 3})), kTol);
    CHECK(std::abs(rep.norm_gap) < 1e-12);
    CHECK(std::abs(*rep.pointwise_gap) < 1e-12);
  }
  SUBCASE("members are no better and satisfy the orthogonal split") {
    const auto fam = weighted_projection_family(a, s, kTol);
    REQUIRE(fam.param_rows() == 1);
    for (int k = 0; k < 10; ++k) {
      const Matrix coeff = rng.matrix(1, 3);
      const Matrix t = fam.member(coeff);
      const Vector x = rng.vector(3);
      const auto rep = minimality_report(a, s, t, x, kTol);
      CHECK(rep.norm_gap >= -1e-9);
      CHECK(*rep.pointwise_gap >= -1e-9);
      const Matrix w = t - p;
      const double lhs = ((eye(3) - t) * x).squaredNorm();
      const double rhs = ((eye(3) - p) * x).squaredNorm() + (w * x).squaredNorm();
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
  }
  SUBCASE("non-members are rejected") {
    CHECK_THROWS_AS(minimality_report(a, s, mat({{1, 1, 0}, {0, 1, 0}, {0, 0, 1}}),
                                      std::nullopt, kTol),
                    PreconditionError);
  }
}
