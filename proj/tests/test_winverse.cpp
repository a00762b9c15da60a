#include <doctest.h>

#include "test_util.hpp"
#include "wproj/instances.hpp"
#include "wproj/oracle.hpp"
#include "wproj/winverse.hpp"

using namespace wproj;
using testutil::diff;
using testutil::eye;
using testutil::mat;
using testutil::vec;

namespace {
const ToleranceConfig kTol;

double worst_equation(const InverseCheckReport& rep) {
  double worst = 0.0;
  for (const auto& eq : rep.equations) worst = std::max(worst, eq.residual);
  return worst;
}
}  // namespace

TEST_CASE("weighted least-squares solve") {
  CHECK(diff(Matrix(a_lss_solve(PsdOperator(eye(2)), mat({{1, 0}, {0, 0}}), vec({1, 1}), kTol)),
             Matrix(vec({1, 0}))) < 1e-13);

  const Matrix b = mat({{2, 1}, {0, 1}});
  const Vector y = vec({3, -1});
  CHECK(diff(Matrix(a_lss_solve(PsdOperator(mat({{2, 1}, {1, 3}})), b, y, kTol)),
             Matrix(Vector(b.inverse() * y))) < 1e-12);

  const PsdOperator degenerate(mat({{1, 0}, {0, 0}}));
  CHECK(diff(Matrix(a_lss_solve(degenerate, mat({{1, 0}, {0, 0}}), vec({1, 1}), kTol)),
             Matrix(vec({1, 0}))) < 1e-13);

  SUBCASE("objective value matches the oracle and dominates sampled points") {
    for (int trial = 0; trial < 20; ++trial) {
      Rng rng(derive_seed(17, 1, std::uint64_t(trial)));
      const Index n = rng.index(1, 8);
      const auto triple = gen::random_inverse_triple(rng, n, false);
      const Vector rhs = rng.vector(n);
      const Vector x0 = a_lss_solve(triple.a1, triple.b, rhs, kTol);
      const double attained = seminorm(triple.a1, rhs - triple.b * x0, kTol);
      const auto ref = oracle::oracle_seminorm_lss(triple.a1, triple.b, rhs, kTol);
      CHECK(attained == doctest::Approx(ref.value).epsilon(1e-8));
      for (int k = 0; k < 25; ++k) {
        const Vector other = rng.vector(n);
        CHECK(attained <= seminorm(triple.a1, rhs - triple.b * other, kTol) + 1e-8);
      }
    }
  }

  SUBCASE("solutions hit the coset geometry") {
    // any least-squares solution u satisfies B u = T y for a family member T
    for (int trial = 0; trial < 15; ++trial) {
      Rng rng(derive_seed(17, 2, std::uint64_t(trial)));
      const Index n = rng.index(1, 8);
      const auto triple = gen::random_inverse_triple(rng, n, false);
      Vector y2 = rng.vector(n);
      if (y2.norm() == 0.0) continue;
      const Vector u = a_lss_solve(triple.a1, triple.b, y2, kTol);
      const Subspace range_b = column_space(triple.b, kTol);
      const Matrix p = distinguished_projection(triple.a1, range_b, kTol);
      const Vector defect = triple.b * u - p * y2;
      const Subspace nker = kernel_intersection(triple.a1, range_b, kTol);
      // defect lies in the degeneracy subspace, so a rank-one completion
      // produces the witness member
      CHECK((defect - nker.projector() * defect).norm() <= 1e-7 * (1.0 + y2.norm()));
      const Matrix w = defect * y2.adjoint() / y2.squaredNorm();
      const Matrix t = p + w;
      CHECK(pi_membership_residual(triple.a1, range_b, t) <= 1e-7);
      CHECK((triple.b * u - t * y2).norm() <= 1e-7 * (1.0 + y2.norm()));
    }
  }
}

TEST_CASE("families of weighted inverses") {
  SUBCASE("identity weight reduces to the pseudoinverse") {
    Rng rng(derive_seed(17, 3, 0));
    const Matrix b = gen::random_rank_matrix(rng, 5, 5, 3);
    const auto fam = a_inverse_family(PsdOperator(eye(5)), b, kTol);
    CHECK(diff(fam.base, pseudo_inverse(b, kTol)) < 1e-12);
  }
  SUBCASE("stated members for a diagonal example") {
    const Matrix b = mat({{1, 0}, {0, 0}});
    const auto fam = a_inverse_family(PsdOperator(eye(2)), b, kTol);
    CHECK(fam.param_rows() == 1);
    CHECK(fam.param_cols() == 2);
    for (double w1 : {-2.0, 0.0, 1.5})
      for (double w2 : {-1.0, 3.0}) {
        const Matrix g = mat({{1, 0}, {w1, w2}});
        const auto rep = inverse_check(PsdOperator(eye(2)), std::nullopt, b, g,
                                       InverseKind::a_inverse, std::nullopt, kTol);
        CHECK(rep.pass);
      }
  }
  SUBCASE("degenerate weight frees the kernel directions") {
    const auto fam = a_inverse_family(PsdOperator(mat({{1, 0}, {0, 0}})), eye(2), kTol);
    CHECK(diff(fam.base, mat({{1, 0}, {0, 0}})) < 1e-13);
    CHECK(subspace_gap(fam.range_space, Subspace::span_of(mat({{0}, {1}}))) < 1e-13);
  }
  SUBCASE("existence holds for every triple and members pass the check") {
    for (int trial = 0; trial < 20; ++trial) {
      Rng rng(derive_seed(17, 4, std::uint64_t(trial)));
      const Index n = rng.index(1, 8);
      const auto triple = gen::random_inverse_triple(rng, n, false);
      const auto fam = a_inverse_family(triple.a1, triple.b, kTol);
      const Matrix g = fam.member(rng.matrix(fam.param_rows(), fam.param_cols()));
      for (const Matrix& cand : {fam.base, g}) {
        const auto rep = inverse_check(triple.a1, std::nullopt, triple.b, cand,
                                       InverseKind::a_inverse, std::nullopt, kTol);
        CHECK(rep.pass);
        // B G is a weighted projection into R(B)
        CHECK(pi_membership_residual(triple.a1, column_space(triple.b, kTol), triple.b * cand) <=
              kTol.residual_tol);
      }
    }
  }
}

TEST_CASE("restricted inverses") {
  SUBCASE("plain projection when everything is trivial") {
    const Subspace m = Subspace::span_of(mat({{1}, {0}}));
    CHECK(diff(restricted_a_inverse(PsdOperator(eye(2)), eye(2), m, kTol), m.projector()) < 1e-13);
  }
  SUBCASE("stated diagonal example") {
    const Subspace m = Subspace::span_of(mat({{1}, {1}}));
    const Matrix g = restricted_a_inverse(PsdOperator(eye(2)), mat({{1, 0}, {0, 0}}), m, kTol);
    CHECK(diff(g, mat({{1, 0}, {1, 0}})) < 1e-12);
  }
  SUBCASE("full restriction agrees with the family up to a free direction") {
    for (int trial = 0; trial < 15; ++trial) {
      Rng rng(derive_seed(17, 5, std::uint64_t(trial)));
      const Index n = rng.index(1, 7);
      const auto triple = gen::random_inverse_triple(rng, n, false);
      const Matrix g = restricted_a_inverse(triple.a1, triple.b, Subspace::full(n), kTol);
      const auto fam = a_inverse_family(triple.a1, triple.b, kTol);
      const Matrix gap = g - fam.base;
      CHECK(((eye(n) - fam.range_space.projector()) * gap).norm() <= 1e-7 * (1.0 + g.norm()));
    }
  }
  SUBCASE("defining residuals hold on random instances") {
    for (int trial = 0; trial < 20; ++trial) {
      Rng rng(derive_seed(17, 6, std::uint64_t(trial)));
      const Index n = rng.index(1, 7);
      const auto triple = gen::random_inverse_triple(rng, n, false);
      const Subspace m = gen::random_subspace(rng, n, rng.index(0, n));
      const Matrix g = restricted_a_inverse(triple.a1, triple.b, m, kTol);
      const auto rep =
          inverse_check(triple.a1, std::nullopt, triple.b, g, InverseKind::restricted, m, kTol);
      CHECK(rep.pass);
    }
  }
}

TEST_CASE("two-weight inverses") {
  SUBCASE("identity weights give the pseudoinverse") {
    Rng rng(derive_seed(17, 7, 0));
    const Matrix b = gen::random_rank_matrix(rng, 5, 5, 3);
    const PsdOperator id5(eye(5));
    CHECK(diff(a1a2_inverse(id5, id5, b, kTol), pseudo_inverse(b, kTol)) < 1e-12);
  }
  SUBCASE("stated diagonal example") {
    const PsdOperator a2(mat({{2, 0}, {0, 1}}));
    const Matrix g = a1a2_inverse(PsdOperator(eye(2)), a2, mat({{1, 0}, {0, 0}}), kTol);
    CHECK(diff(g, mat({{1, 0}, {0, 0}})) < 1e-12);
  }
  SUBCASE("stated non-diagonal example with the quadratic oracle") {
    const PsdOperator a2(mat({{2, 1}, {1, 1}}));
    const Matrix b = mat({{1, 0}, {0, 0}});
    const Matrix g = a1a2_inverse(PsdOperator(eye(2)), a2, b, kTol);
    CHECK(diff(g, mat({{1, 0}, {-1, 0}})) < 1e-12);
    // scalar check: 2 + 2t + t^2 is minimal at t = -1
    const auto best = oracle::oracle_min_over_affine(a2, vec({1, 0}),
                                                     Subspace::span_of(mat({{0}, {1}})), kTol);
    CHECK(diff(Matrix(best.point), Matrix(vec({1, -1}))) < 1e-12);
  }
  SUBCASE("characterization, weak equations and oracle minimality") {
    for (int trial = 0; trial < 20; ++trial) {
      Rng rng(derive_seed(17, 8, std::uint64_t(trial)));
      const Index n = rng.index(1, 7);
      const auto triple = gen::random_inverse_triple(rng, n, false);
      const Matrix g = a1a2_inverse(triple.a1, triple.a2, triple.b, kTol);
      CHECK(inverse_check(triple.a1, triple.a2, triple.b, g, InverseKind::a1a2, std::nullopt, kTol)
                .pass);
      CHECK(inverse_check(triple.a1, triple.a2, triple.b, g, InverseKind::weak_a1a2, std::nullopt,
                          kTol)
                .pass);

      const Vector y = rng.vector(n);
      const Vector gy = g * y;
      // minimum A2-seminorm among all least-squares solutions
      const Matrix root1 = psd_sqrt(triple.a1, kTol);
      const Subspace dirs = null_space(root1 * triple.b, kTol, root1.norm() * triple.b.norm());
      const auto lss = oracle::oracle_seminorm_lss(triple.a1, triple.b, y, kTol);
      const auto best = oracle::oracle_min_over_affine(triple.a2, lss.x_min, dirs, kTol);
      CHECK(std::abs(seminorm(triple.a2, gy, kTol) - best.value) <= 1e-8 * (1.0 + y.norm()));
      CHECK(oracle::dominance_sample_test(triple.a2, gy, gy, dirs, 200,
                                          derive_seed(17, 9, std::uint64_t(trial)), kTol));
    }
  }
}

TEST_CASE("weighted generalized inverses") {
  SUBCASE("identity weights and invertible operators") {
    Rng rng(derive_seed(17, 10, 0));
    const Matrix b = gen::random_rank_matrix(rng, 5, 5, 2);
    const PsdOperator id5(eye(5));
    CHECK(diff(weighted_generalized_inverse(id5, id5, b, kTol), pseudo_inverse(b, kTol)) < 1e-12);

    const Matrix inv = gen::random_rank_matrix(rng, 4, 4, 4);
    const PsdOperator w1 = gen::random_psd(rng, 4, 3);
    const PsdOperator w2 = gen::random_psd(rng, 4, 4);
    CHECK(diff(weighted_generalized_inverse(w1, w2, inv, kTol), inv.inverse()) <=
          1e-7 * (1.0 + inv.inverse().norm()));
  }
  SUBCASE("four equations and the projection identities") {
    for (int trial = 0; trial < 20; ++trial) {
      Rng rng(derive_seed(17, 11, std::uint64_t(trial)));
      const Index n = rng.index(1, 7);
      const auto triple = gen::random_inverse_triple(rng, n, true);
      const Matrix c = weighted_generalized_inverse(triple.a1, triple.a2, triple.b, kTol);
      const auto rep =
          inverse_check(triple.a1, triple.a2, triple.b, c, InverseKind::wgi, std::nullopt, kTol);
      CHECK(rep.pass);
      CHECK(worst_equation(rep) <= kTol.residual_tol);
      // B C and I - C B are the distinguished projections
      const Matrix bc = triple.b * c;
      const Matrix p1 = distinguished_projection(triple.a1, column_space(triple.b, kTol), kTol);
      const Matrix p2 = distinguished_projection(triple.a2, null_space(triple.b, kTol), kTol);
      CHECK(diff(bc, p1) <= 1e-8 * (1.0 + p1.norm()));
      CHECK(diff(eye(n) - c * triple.b, p2) <= 1e-8 * (1.0 + p2.norm()));
      // it solves the weak system and the weak equations
      CHECK(inverse_check(triple.a1, triple.a2, triple.b, c, InverseKind::weak_wgi_system,
                          std::nullopt, kTol)
                .pass);
      CHECK(inverse_check(triple.a1, triple.a2, triple.b, c, InverseKind::weak_a1a2, std::nullopt,
                          kTol)
                .pass);
    }
  }
}

TEST_CASE("inverse checks") {
  SUBCASE("stated examples") {
    Rng rng(derive_seed(17, 12, 0));
    const Matrix b = gen::random_rank_matrix(rng, 4, 4, 3);
    const PsdOperator id4(eye(4));
    CHECK(inverse_check(id4, id4, b, pseudo_inverse(b, kTol), InverseKind::wgi, std::nullopt, kTol)
              .pass);

    const PsdOperator id2(eye(2));
    const Matrix diag10 = mat({{1, 0}, {0, 0}});
    CHECK(inverse_check(id2, std::nullopt, diag10, mat({{1, 0}, {5, 0}}), InverseKind::a_inverse,
                        std::nullopt, kTol)
              .pass);
    CHECK(!inverse_check(id2, std::nullopt, diag10, Matrix::Zero(2, 2), InverseKind::a_inverse,
                         std::nullopt, kTol)
               .pass);
  }
  SUBCASE("input validation") {
    const PsdOperator id2(eye(2));
    CHECK_THROWS_AS(inverse_check(id2, std::nullopt, eye(2), eye(2), InverseKind::a1a2,
                                  std::nullopt, kTol),
                    InputError);
    CHECK_THROWS_AS(inverse_check(id2, std::nullopt, eye(2), eye(2), InverseKind::restricted,
                                  std::nullopt, kTol),
                    InputError);
    CHECK_THROWS_AS(inverse_check(id2, id2, eye(2), eye(3), InverseKind::wgi, std::nullopt, kTol),
                    InputError);
  }
  SUBCASE("four weak equations collapse to the two-equation form") {
    for (int trial = 0; trial < 15; ++trial) {
      Rng rng(derive_seed(17, 14, std::uint64_t(trial)));
      const Index n = rng.index(1, 7);
      const auto triple = gen::random_inverse_triple(rng, n, false);
      const Matrix good = a1a2_inverse(triple.a1, triple.a2, triple.b, kTol);
      const Matrix bad = good + rng.matrix(n, n);
      for (const Matrix& g : {good, bad}) {
        const bool four = inverse_check(triple.a1, triple.a2, triple.b, g,
                                        InverseKind::weak_a1a2, std::nullopt, kTol)
                              .pass;
        const Matrix lhs1 = triple.b.adjoint() * triple.a1.mat() * triple.b * g;
        const Matrix rhs1 = triple.b.adjoint() * triple.a1.mat();
        const Matrix lhs2 = g.adjoint() * triple.a2.mat() * g * triple.b;
        const Matrix rhs2 = g.adjoint() * triple.a2.mat();
        const bool two =
            (lhs1 - rhs1).norm() <= kTol.residual_tol * (1.0 + lhs1.norm() + rhs1.norm()) &&
            (lhs2 - rhs2).norm() <= kTol.residual_tol * (1.0 + lhs2.norm() + rhs2.norm());
        CHECK(four == two);
      }
    }
  }

  SUBCASE("weak system agrees with the three-equation form") {
    for (int trial = 0; trial < 20; ++trial) {
      Rng rng(derive_seed(17, 13, std::uint64_t(trial)));
      const Index n = rng.index(1, 7);
      auto triple = gen::random_inverse_triple(rng, n, true);
      for (int attempt = 0; attempt < 64 && triple.b.norm() == 0.0; ++attempt)
        triple = gen::random_inverse_triple(rng, n, true);
      const Matrix pinv = pseudo_inverse(triple.b, kTol);
      const auto fam1 = projection_family(triple.a1, column_space(triple.b, kTol), kTol);
      const auto fam2 = projection_family(triple.a2, null_space(triple.b, kTol), kTol);
      const Matrix member = (eye(n) - fam2.member(rng.matrix(fam2.param_rows(), fam2.param_cols()))) *
                            pinv * fam1.member(rng.matrix(fam1.param_rows(), fam1.param_cols()));
      const auto in = inverse_check(triple.a1, triple.a2, triple.b, member,
                                    InverseKind::weak_wgi_system, std::nullopt, kTol);
      CHECK(in.pass);
      CHECK(in.system_vs_equations_agree.value_or(false));

      const Matrix outsider = member + rng.matrix(n, n);
      const auto out = inverse_check(triple.a1, triple.a2, triple.b, outsider,
                                     InverseKind::weak_wgi_system, std::nullopt, kTol);
      CHECK(!out.pass);
      CHECK(out.system_vs_equations_agree.value_or(false));
    }
  }
}
