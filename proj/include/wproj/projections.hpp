#pragma once

#include <optional>

#include "wproj/numkernel.hpp"

namespace wproj {

/// Affine set of operators base + { N.basis * w * V.basis^H }: members differ
/// from the base by an operator with range in `range_space` that vanishes on
/// the orthogonal complement of `domain_space`. Membership in the concrete
/// families (the projection sets, the weighted-inverse sets) is always decided
/// by their defining residuals, never by recovering w.
struct AffineOperatorFamily {
  Matrix base;
  Subspace range_space;   // N
  Subspace domain_space;  // V

  Index param_rows() const { return range_space.dim(); }
  Index param_cols() const { return domain_space.dim(); }
  bool singleton() const { return param_rows() == 0 || param_cols() == 0; }

  /// base + N.basis * coeff * V.basis^H with coeff of shape param_rows x param_cols.
  Matrix member(const Matrix& coeff) const;

  /// How far T sits from the affine parametrization: the larger of
  /// ||(I-P_N)(T-base)|| and ||(T-base)(I-P_V)||, relative.
  double parametrization_residual(const Matrix& t) const;
};

struct Flag {
  bool pass = false;
  double residual = 0.0;
};

/// Classification of a square operator T against a weight A. The three
/// a_projection routes evaluate the same property through independent
/// identities and are reported separately.
struct ClassifyReport {
  Flag a_selfadjoint;            // AT = T^H A
  Flag a_idempotent;             // A T^2 = A T
  Flag route_defining;           // T^H A T = A T
  Flag route_split;              // selfadjoint and idempotent
  Flag route_oblique;            // P_{R(A)} T idempotent and A-selfadjoint
  bool a_projection = false;     // verdict of the defining route
  bool routes_agree = false;
  std::optional<Flag> range_in_s;          // when S supplied: R(T) <= S
  std::optional<Flag> projects_onto_s;     // when S supplied: P_S A T = P_S A
  std::optional<bool> a_projection_into_s;
  Flag a_contraction;            // T^H A T <= A (residual = negative part)
  Flag a_positive;               // A T Hermitian PSD
  double seminorm_of_t = 0.0;    // sigma_max(A^{1/2} T (A^{1/2})^dagger)
};

struct CompatibilityCertificate {
  bool compatible = false;
  double residual = 0.0;  // relative defect of the reduced solution of a x = b
  Subspace degenerate;    // N = S /\ N(A)
};

struct MinimalityReport {
  double norm_gap = 0.0;  // ||T|| - ||P_{A,S}||, operator norms
  std::optional<double> pointwise_gap;
};

/// N = S /\ N(A), the degeneracy subspace of the pair.
Subspace kernel_intersection(const PsdOperator& a, const Subspace& s,
                             const ToleranceConfig& tol = {});

/// Decides compatibility through the block equation a x = b. At finite
/// dimension every valid pair is compatible; the residual reports the
/// numerical conditioning of the reduced solution.
CompatibilityCertificate compatibility_certificate(const PsdOperator& a, const Subspace& s,
                                                   const ToleranceConfig& tol = {});

/// The distinguished projection P_{A,S}: the unique projection onto S whose
/// kernel is A(S)^perp (-) N, assembled as [[1, d], [0, 0]] in the (S, S^perp)
/// blocks with d the reduced solution of a x = b.
Matrix distinguished_projection(const PsdOperator& a, const Subspace& s,
                                const ToleranceConfig& tol = {});

/// For invertible A: A^{-1/2} P_{A^{1/2}(S)} A^{1/2}. Agrees with
/// distinguished_projection; throws PreconditionError when A is singular.
Matrix invertible_case_projection(const PsdOperator& a, const Subspace& s,
                                  const ToleranceConfig& tol = {});

/// The set of A-selfadjoint idempotents with range exactly S:
/// base P_{A,S}, free part ranging over N and vanishing on S.
AffineOperatorFamily projection_family(const PsdOperator& a, const Subspace& s,
                                       const ToleranceConfig& tol = {});

/// The set of A-projections into S: base P_{A,S}, free part any operator
/// into N (an affine manifold over the full domain).
AffineOperatorFamily weighted_projection_family(const PsdOperator& a, const Subspace& s,
                                                const ToleranceConfig& tol = {});

ClassifyReport classify_operator(const PsdOperator& a, const Matrix& t,
                                 const std::optional<Subspace>& s = std::nullopt,
                                 const ToleranceConfig& tol = {});

/// Relative defect of T as a member of Pi(A,S): range containment plus
/// P_S A T = P_S A.
double pi_membership_residual(const PsdOperator& a, const Subspace& s, const Matrix& t);

/// Relative defect of Q as a member of P(A,S): idempotency, A-selfadjointness
/// and range equality with S.
double p_membership_residual(const PsdOperator& a, const Subspace& s, const Matrix& q,
                             const ToleranceConfig& tol = {});

/// Gaps certifying the minimality of P_{A,S} within Pi(A,S). Throws
/// PreconditionError when T is not a member. The pointwise gap is
/// nonnegative for every pair; the operator-norm gap is nonnegative
/// whenever S reaches outside the kernel of the weight (for S inside the
/// kernel the zero operator is a member of smaller norm).
MinimalityReport minimality_report(const PsdOperator& a, const Subspace& s, const Matrix& t,
                                   const std::optional<Vector>& x = std::nullopt,
                                   const ToleranceConfig& tol = {});

}  // namespace wproj
