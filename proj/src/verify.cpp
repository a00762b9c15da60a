#include "wproj/verify.hpp"

#include <algorithm>
#include <cmath>

#include "wproj/instances.hpp"
#include "wproj/oracle.hpp"
#include "wproj/projections.hpp"
#include "wproj/splines.hpp"
#include "wproj/winverse.hpp"

namespace wproj::verify {

namespace {

constexpr double kResidualTol = 1e-8;
constexpr double kSubspaceTol = 1e-7;
constexpr double kAgreementTol = 1e-7;
constexpr double kSeparationMin = 1e-4;
constexpr double kIdentityPinvTol = 1e-9;

enum Stream : std::uint64_t {
  kStreamProjection = 1,
  kStreamInvertible,
  kStreamEquivalences,
  kStreamFamilies,
  kStreamMinimality,
  kStreamSplines,
  kStreamLss,
  kStreamInverses,
  kStreamWgi,
};

/// Collects residuals against a fixed bound and counts violations.
class Tracker {
 public:
  explicit Tracker(std::string name) { result_.name = std::move(name); }

  void residual(double value, double bound) {
    result_.worst_residual = std::max(result_.worst_residual, value);
    if (!(value <= bound)) ++violations_;
  }

  void require(bool ok) {
    if (!ok) {
      ++violations_;
      result_.worst_residual = std::max(result_.worst_residual, 1.0);
    }
  }

  void trial_done() { ++result_.trials; }

  PropertyResult finish(std::string detail) {
    result_.failures = violations_;
    result_.pass = violations_ == 0;
    result_.detail = std::move(detail);
    return result_;
  }

 private:
  PropertyResult result_;
  int violations_ = 0;
};

Rng trial_rng(const VerifyOptions& opts, Stream stream, int trial) {
  return Rng(derive_seed(opts.seed, stream, std::uint64_t(trial)));
}

Index draw_dim(Rng& rng, const VerifyOptions& opts, Index lo = 1) {
  return rng.index(lo, std::max(lo, opts.max_dim));
}

double fro(const Matrix& m) { return m.norm(); }

Matrix eye(Index n) { return Matrix::Identity(n, n); }

Subspace weighted_kernel_complement(const PsdOperator& a, const Subspace& s,
                                    const ToleranceConfig& tol) {
  // A(S)^perp (-) N, the expected kernel of the distinguished projection.
  const Subspace a_of_s = column_space(a.mat() * s.basis(), tol, a.mat().norm());
  const Subspace n = kernel_intersection(a, s, tol);
  return subspace_ominus(a_of_s.complement(), n, tol);
}

}  // namespace

PropertyResult check_distinguished_projection_contract(const VerifyOptions& opts) {
  Tracker tracker("distinguished-projection-contract");
  const ToleranceConfig tol;
  for (int trial = 0; trial < opts.trials; ++trial) {
    Rng rng = trial_rng(opts, kStreamProjection, trial);
    const Index n = draw_dim(rng, opts);
    const bool degenerate = n >= 2 && trial % 3 == 0;
    const auto pair = gen::random_pair(rng, n, degenerate);
    const Matrix q = distinguished_projection(pair.a, pair.s, tol);
    const double scale = 1.0 + fro(pair.a.mat());
    tracker.residual(fro(q * q - q) / scale, kResidualTol);
    tracker.residual(fro(pair.a.mat() * q - q.adjoint() * pair.a.mat()) / scale, kResidualTol);
    tracker.residual(subspace_gap(column_space(q, tol, 1.0), pair.s), kSubspaceTol);
    tracker.residual(subspace_gap(null_space(q, tol, 1.0),
                                  weighted_kernel_complement(pair.a, pair.s, tol)),
                     kSubspaceTol);
    tracker.trial_done();
  }
  return tracker.finish("idempotency, A-symmetry, range and kernel of P_{A,S}");
}

PropertyResult check_invertible_case_agreement(const VerifyOptions& opts) {
  Tracker tracker("invertible-case-agreement");
  const ToleranceConfig tol;
  for (int trial = 0; trial < opts.trials; ++trial) {
    Rng rng = trial_rng(opts, kStreamInvertible, trial);
    const Index n = draw_dim(rng, opts);
    const PsdOperator a = gen::random_psd(rng, n, n);
    const Subspace s = gen::random_subspace(rng, n, rng.index(0, n));
    const Matrix direct = distinguished_projection(a, s, tol);
    const Matrix viaroot = invertible_case_projection(a, s, tol);
    const double gap = fro(direct - viaroot);
    tracker.residual(s.dim() == 0 ? gap : gap / fro(direct), kSubspaceTol);
    tracker.trial_done();
  }
  return tracker.finish("square-root formula matches the block formula for invertible A");
}

namespace {

struct KreinView {
  bool selfadjoint = false;
  bool contraction = false;
  bool orthogonal = false;   // R(I-T) perp R(AT)
  bool projection = false;
  bool positive = false;
  bool unit_seminorm = false;
  bool seminorm_applicable = false;
  bool decisive = false;
};

KreinView krein_view(const PsdOperator& a, const Matrix& t, const ToleranceConfig& tol) {
  const ClassifyReport rep = classify_operator(a, t, std::nullopt, tol);
  KreinView view;
  view.selfadjoint = rep.a_selfadjoint.pass;
  view.contraction = rep.a_contraction.pass;
  view.projection = rep.a_projection;
  view.positive = rep.a_positive.pass;

  const Index n = a.dim();
  const Matrix at = a.mat() * t;
  const double orth = (at.adjoint() * (eye(n) - t)).norm() /
                      residual_scale({at.norm() * (eye(n) - t).norm()});
  view.orthogonal = orth <= kResidualTol;

  view.seminorm_applicable = at.norm() > kSeparationMin * residual_scale({a.mat().norm()});
  view.unit_seminorm = std::abs(rep.seminorm_of_t - 1.0) <= 1e-6;

  // An instance is decisive when T is numerically A-idempotent and every
  // tested quantity is clearly on one side of its tolerance; borderline
  // draws are resampled by the caller.
  auto clear = [](const Flag& f) {
    return f.pass || f.residual >= kSeparationMin;
  };
  view.decisive = rep.a_idempotent.pass &&
                  clear(rep.a_selfadjoint) && clear(rep.route_defining) && clear(rep.a_positive) &&
                  clear(rep.a_contraction) &&
                  (view.orthogonal || orth >= kSeparationMin) &&
                  (!view.seminorm_applicable || view.unit_seminorm ||
                   std::abs(rep.seminorm_of_t - 1.0) >= kSeparationMin);
  return view;
}

}  // namespace

PropertyResult check_classification_equivalences(const VerifyOptions& opts) {
  Tracker tracker("classification-equivalences");
  const ToleranceConfig tol;

  // Three-route agreement on members and non-members of Pi(A,S).
  for (int trial = 0; trial < opts.trials; ++trial) {
    Rng rng = trial_rng(opts, kStreamEquivalences, trial);
    const Index n = draw_dim(rng, opts, 2);
    const auto pair = gen::random_pair(rng, n, trial % 2 == 0);
    const AffineOperatorFamily fam = weighted_projection_family(pair.a, pair.s, tol);
    const Matrix member = fam.member(rng.matrix(fam.param_rows(), fam.param_cols()));
    const ClassifyReport in = classify_operator(pair.a, member, pair.s, tol);
    tracker.require(in.routes_agree && in.a_projection && *in.a_projection_into_s);

    // A zero weight makes every operator a projection, so the non-member
    // side needs a weight of positive rank.
    auto off_pair = pair;
    for (int attempt = 0; attempt < 64 && off_pair.a.mat().norm() == 0.0; ++attempt)
      off_pair = gen::random_pair(rng, n, false);
    const Matrix outsider =
        weighted_projection_family(off_pair.a, off_pair.s, tol)
            .member(rng.matrix(kernel_intersection(off_pair.a, off_pair.s, tol).dim(), n)) +
        rng.matrix(n, n);
    const ClassifyReport out = classify_operator(off_pair.a, outsider, off_pair.s, tol);
    tracker.require(out.routes_agree && !out.a_projection);
    tracker.trial_done();
  }

  // Krein equivalences and the seminorm/positivity dichotomy on A-idempotents,
  // half of them oblique projections, half members of a weighted family.
  for (int trial = 0; trial < opts.trials; ++trial) {
    Rng rng = trial_rng(opts, kStreamEquivalences, opts.trials + trial);
    const Index n = draw_dim(rng, opts, 2);

    bool found = false;
    KreinView view;
    for (int attempt = 0; attempt < 64 && !found; ++attempt) {
      if (trial % 2 == 0) {
        const PsdOperator a = gen::random_psd(rng, n, rng.index(1, n));
        const Matrix t = gen::random_idempotent(rng, n, rng.index(1, n - 1));
        view = krein_view(a, t, tol);
      } else {
        const auto pair = gen::random_pair(rng, n, false);
        const AffineOperatorFamily fam = weighted_projection_family(pair.a, pair.s, tol);
        const Matrix t = fam.member(rng.matrix(fam.param_rows(), fam.param_cols()));
        view = krein_view(pair.a, t, tol);
      }
      found = view.decisive;
    }
    tracker.require(found);
    if (found) {
      tracker.require(view.contraction == view.selfadjoint);
      tracker.require(view.orthogonal == view.selfadjoint);
      tracker.require(view.projection == view.positive);
      if (view.seminorm_applicable) tracker.require(view.projection == view.unit_seminorm);
    }
    tracker.trial_done();
  }

  return tracker.finish("route agreement, Krein equivalences, seminorm dichotomy");
}

PropertyResult check_affine_family_soundness(const VerifyOptions& opts) {
  Tracker tracker("affine-family-soundness");
  const ToleranceConfig tol;
  for (int trial = 0; trial < opts.trials; ++trial) {
    Rng rng = trial_rng(opts, kStreamFamilies, trial);
    const Index n = draw_dim(rng, opts, 2);
    const auto pair = gen::random_pair(rng, n, trial % 2 == 0);

    const AffineOperatorFamily pi_fam = weighted_projection_family(pair.a, pair.s, tol);
    const Matrix t = pi_fam.member(rng.matrix(pi_fam.param_rows(), pi_fam.param_cols()));
    tracker.residual(pi_membership_residual(pair.a, pair.s, t), kResidualTol);

    const AffineOperatorFamily p_fam = projection_family(pair.a, pair.s, tol);
    const Matrix q = p_fam.member(rng.matrix(p_fam.param_rows(), p_fam.param_cols()));
    tracker.residual(p_membership_residual(pair.a, pair.s, q, tol), kResidualTol);

    const Subspace degenerate = pi_fam.range_space;
    if (degenerate.dim() > 0) {
      // The cardinality separation witness: in Pi(A,S) but not idempotent.
      const Matrix witness = pi_fam.base + degenerate.projector();
      tracker.residual(pi_membership_residual(pair.a, pair.s, witness), kResidualTol);
      tracker.require(fro(witness * witness - witness) > kSeparationMin);
      tracker.require(!pi_fam.singleton());
    } else {
      tracker.require(pi_fam.singleton());
      tracker.residual(fro(pi_fam.base - p_fam.base) / residual_scale({fro(pi_fam.base)}),
                       kResidualTol);
    }
    tracker.trial_done();
  }
  return tracker.finish("Pi and P family members pass their defining residuals");
}

PropertyResult check_minimality(const VerifyOptions& opts) {
  Tracker tracker("minimality");
  const ToleranceConfig tol;
  for (int trial = 0; trial < opts.trials; ++trial) {
    Rng rng = trial_rng(opts, kStreamMinimality, trial);
    const Index n = draw_dim(rng, opts, 2);
    // Degenerate N, but with S reaching outside the kernel of the weight:
    // for S inside N(A) the zero operator is a member of Pi(A,S), so the
    // operator-norm minimum is 0 rather than ||P_{A,S}||.
    auto pair = gen::random_pair(rng, n, true);
    for (int attempt = 0; attempt < 64 && pair.s.dim() <= kernel_intersection(pair.a, pair.s, tol).dim();
         ++attempt)
      pair = gen::random_pair(rng, n, true);
    const AffineOperatorFamily fam = weighted_projection_family(pair.a, pair.s, tol);
    tracker.require(fam.range_space.dim() >= 1 && fam.range_space.dim() < pair.s.dim());
    const Matrix t = fam.member(rng.matrix(fam.param_rows(), fam.param_cols()));
    const MinimalityReport norm_rep = minimality_report(pair.a, pair.s, t, std::nullopt, tol);
    tracker.residual(std::max(0.0, -norm_rep.norm_gap), kResidualTol);
    for (int k = 0; k < 10; ++k) {
      const Vector x = rng.vector(n);
      const MinimalityReport rep = minimality_report(pair.a, pair.s, t, x, tol);
      tracker.residual(std::max(0.0, -*rep.pointwise_gap), kResidualTol);
    }
    tracker.trial_done();
  }
  return tracker.finish("operator norm and pointwise minimality of P_{A,S} in Pi(A,S)");
}

PropertyResult check_spline_optimality(const VerifyOptions& opts) {
  Tracker tracker("spline-optimality");
  const ToleranceConfig tol;
  for (int trial = 0; trial < opts.trials; ++trial) {
    Rng rng = trial_rng(opts, kStreamSplines, trial);
    const Index n = draw_dim(rng, opts);
    Matrix c;
    Subspace s;
    PsdOperator a = PsdOperator::identity(n);
    for (int attempt = 0;; ++attempt) {
      c = gen::random_rank_matrix(rng, n, n, rng.index(0, n));
      s = gen::random_subspace(rng, n, rng.index(0, n));
      a = PsdOperator(c.adjoint() * c);
      if (gen::pair_well_separated(a, s)) break;
      if (attempt > 200) throw InputError("spline suite: no admissible instance");
    }
    const Vector x = rng.vector(n);
    const AffineVectorFamily fam = spline_set(c, s, x, tol);

    const Matrix a_of_s = a.mat() * s.basis();
    const Matrix p_as = column_space(a_of_s, tol, a.mat().norm()).projector();
    for (int k = 0; k < 5; ++k) {
      const Vector y = fam.member(rng.vector(fam.direction_space.dim()));
      tracker.require(oracle::dominance_sample_test(a, y, x, s, 200,
                                                    derive_seed(opts.seed, kStreamSplines + 100,
                                                                std::uint64_t(trial * 8 + k)),
                                                    tol));
      const Vector shift = y - x;  // must lie in S
      tracker.residual(s.containment_residual(shift), kResidualTol);
      tracker.residual((p_as * y).norm() / residual_scale({y.norm()}), kResidualTol);
    }

    const double dist = weighted_distance(c, s, x, tol);
    const auto best = oracle::oracle_min_over_affine(a, x, s, tol);
    tracker.residual(std::abs(dist - best.value) / residual_scale({x.norm()}), kAgreementTol);

    // sp(C, S, 0) degenerates to the kernel intersection.
    const AffineVectorFamily at_zero = spline_set(c, s, Vector::Zero(n), tol);
    tracker.residual(at_zero.representative.norm(), kResidualTol);
    const Subspace expected = subspace_intersection(s, null_space(c, tol), tol);
    tracker.residual(subspace_gap(at_zero.direction_space, expected), kSubspaceTol);
    tracker.trial_done();
  }
  return tracker.finish("interpolant optimality, coset/orthogonality membership, distance oracle");
}

PropertyResult check_lss_oracle_agreement(const VerifyOptions& opts) {
  Tracker tracker("lss-oracle-agreement");
  const ToleranceConfig tol;
  for (int trial = 0; trial < opts.trials; ++trial) {
    Rng rng = trial_rng(opts, kStreamLss, trial);
    const Index n = draw_dim(rng, opts);
    const auto triple = gen::random_inverse_triple(rng, n, false);
    const Vector y = rng.vector(n);
    const Vector x0 = a_lss_solve(triple.a1, triple.b, y, tol);
    const double attained = seminorm(triple.a1, y - triple.b * x0, tol);
    const auto reference = oracle::oracle_seminorm_lss(triple.a1, triple.b, y, tol);
    tracker.residual(std::abs(attained - reference.value) / residual_scale({y.norm()}),
                     kResidualTol);
    tracker.trial_done();
  }
  return tracker.finish("normal-equation objective equals the lifted least-squares objective");
}

PropertyResult check_inverse_characterizations(const VerifyOptions& opts) {
  Tracker tracker("inverse-characterizations");
  const ToleranceConfig tol;
  for (int trial = 0; trial < opts.trials; ++trial) {
    Rng rng = trial_rng(opts, kStreamInverses, trial);
    const Index n = draw_dim(rng, opts);
    const auto triple = gen::random_inverse_triple(rng, n, false);
    const PsdOperator& a1 = triple.a1;
    const PsdOperator& a2 = triple.a2;
    const Matrix& b = triple.b;

    const AffineOperatorFamily fam = a_inverse_family(a1, b, tol);
    auto pass_of = [&](const Matrix& g, InverseKind kind,
                       const std::optional<PsdOperator>& w2 = std::nullopt,
                       const std::optional<Subspace>& m = std::nullopt) {
      const InverseCheckReport rep = inverse_check(a1, w2, b, g, kind, m, tol);
      double worst = 0.0;
      for (const auto& eq : rep.equations) worst = std::max(worst, eq.residual);
      tracker.residual(worst, kResidualTol);
      return rep.pass;
    };
    pass_of(fam.base, InverseKind::a_inverse);
    pass_of(fam.member(rng.matrix(fam.param_rows(), fam.param_cols())), InverseKind::a_inverse);

    const Subspace m = gen::random_subspace(rng, n, rng.index(0, n));
    const Matrix restricted = restricted_a_inverse(a1, b, m, tol);
    pass_of(restricted, InverseKind::restricted, std::nullopt, m);

    const Matrix g12 = a1a2_inverse(a1, a2, b, tol);
    pass_of(g12, InverseKind::a1a2, a2);
    pass_of(g12, InverseKind::weak_a1a2, a2);

    // Minimum A2-seminorm among the A1-least-squares solutions, checked
    // against the oracle minimizer over the normal-equation solution coset.
    const Vector y = rng.vector(n);
    const auto lss = oracle::oracle_seminorm_lss(a1, b, y, tol);
    const Matrix root1 = psd_sqrt(a1, tol);
    const Subspace coset_dirs = null_space(root1 * b, tol, root1.norm() * b.norm());
    const auto best = oracle::oracle_min_over_affine(a2, lss.x_min, coset_dirs, tol);
    const double attained = seminorm(a2, g12 * y, tol);
    tracker.residual(std::abs(attained - best.value) / residual_scale({y.norm()}), kResidualTol);
    tracker.trial_done();
  }
  return tracker.finish("defining equations and oracle minimality of the weighted inverses");
}

PropertyResult check_wgi_contract(const VerifyOptions& opts) {
  Tracker tracker("wgi-contract");
  const ToleranceConfig tol;
  for (int trial = 0; trial < opts.trials; ++trial) {
    Rng rng = trial_rng(opts, kStreamWgi, trial);
    const Index n = draw_dim(rng, opts);
    const auto triple = gen::random_inverse_triple(rng, n, true);
    const PsdOperator& a1 = triple.a1;
    const PsdOperator& a2 = triple.a2;
    const Matrix& b = triple.b;

    const Matrix c = weighted_generalized_inverse(a1, a2, b, tol);
    const InverseCheckReport four = inverse_check(a1, a2, b, c, InverseKind::wgi, std::nullopt, tol);
    for (const auto& eq : four.equations) tracker.residual(eq.residual, kResidualTol);

    const PsdOperator id = PsdOperator::identity(n);
    const Matrix via_identity = weighted_generalized_inverse(id, id, b, tol);
    const Matrix pinv = pseudo_inverse(b, tol);
    tracker.residual(fro(via_identity - pinv) / residual_scale({fro(pinv)}), kIdentityPinvTol);

    // System check vs three-equation check: members and corrupted outsiders.
    // For B = 0 every candidate solves the system, so the separation part
    // draws an operator of positive rank.
    gen::InverseTriple sep = triple;
    for (int attempt = 0; attempt < 64 && sep.b.norm() == 0.0; ++attempt)
      sep = gen::random_inverse_triple(rng, n, true);
    const Matrix sep_pinv = pseudo_inverse(sep.b, tol);
    const AffineOperatorFamily fam1 = projection_family(sep.a1, column_space(sep.b, tol), tol);
    const AffineOperatorFamily fam2 = projection_family(sep.a2, null_space(sep.b, tol), tol);
    const Matrix q1 = fam1.member(rng.matrix(fam1.param_rows(), fam1.param_cols()));
    const Matrix q2 = fam2.member(rng.matrix(fam2.param_rows(), fam2.param_cols()));
    const Matrix member = (eye(n) - q2) * sep_pinv * q1;
    const InverseCheckReport in =
        inverse_check(sep.a1, sep.a2, sep.b, member, InverseKind::weak_wgi_system, std::nullopt, tol);
    tracker.require(in.pass && in.system_vs_equations_agree.value_or(false));

    Matrix outsider = member;
    InverseCheckReport out;
    for (int attempt = 0; attempt < 64; ++attempt) {
      outsider = member + rng.matrix(n, n);
      out = inverse_check(sep.a1, sep.a2, sep.b, outsider, InverseKind::weak_wgi_system,
                          std::nullopt, tol);
      double worst = 0.0;
      for (const auto& eq : out.equations) worst = std::max(worst, eq.residual);
      if (worst >= kSeparationMin) break;  // decisively outside
    }
    tracker.require(!out.pass && out.system_vs_equations_agree.value_or(false));
    tracker.trial_done();
  }
  return tracker.finish("four defining equations, pseudoinverse reduction, system equivalence");
}

std::vector<PropertyResult> run_suite(const VerifyOptions& opts) {
  std::vector<PropertyResult> results;
  results.push_back(check_distinguished_projection_contract(opts));
  results.push_back(check_invertible_case_agreement(opts));
  results.push_back(check_classification_equivalences(opts));
  results.push_back(check_affine_family_soundness(opts));
  results.push_back(check_minimality(opts));
  results.push_back(check_spline_optimality(opts));
  results.push_back(check_lss_oracle_agreement(opts));
  results.push_back(check_inverse_characterizations(opts));
  results.push_back(check_wgi_contract(opts));
  return results;
}

}  // namespace wproj::verify
