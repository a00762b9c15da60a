#pragma once

#include <string>
#include <vector>

#include "wproj/projections.hpp"

namespace wproj {

enum class InverseKind {
  a_inverse,        // B^H A B G = B^H A
  restricted,       // range in M, P_M (B^H A B G - B^H A) = 0
  a1a2,             // A1-inverse with R(A2 G) <= N(A1 B)^perp
  weak_a1a2,        // the four weak equations
  wgi,              // B G B = B, G B G = G plus the two weighted symmetries
  weak_wgi_system,  // B G in Pi(A1, R(B)), I - G B in Pi(A2, N(B))
};

const char* inverse_kind_name(InverseKind kind);

struct EquationCheck {
  std::string name;
  double residual = 0.0;
  bool pass = false;
};

struct InverseCheckReport {
  InverseKind kind = InverseKind::a_inverse;
  bool pass = false;
  std::vector<EquationCheck> equations;
  /// For weak_wgi_system: whether the projection-system verdict matches the
  /// equivalent three-equation verdict.
  std::optional<bool> system_vs_equations_agree;
};

/// A-least-squares solution of B x = y through the normal equation:
/// x0 = (B^H A B)^dagger B^H A y.
Vector a_lss_solve(const PsdOperator& a, const Matrix& b, const Vector& y,
                   const ToleranceConfig& tol = {});

/// All A-inverses of B: base (B^H A B)^dagger B^H A plus any operator into
/// N(B^H A B).
AffineOperatorFamily a_inverse_family(const PsdOperator& a, const Matrix& b,
                                      const ToleranceConfig& tol = {});

/// The A-inverse of B restricted to M built from the distinguished
/// projection onto B(M): the reduced solution of (B P_M) X = P_{A,B(M)}.
Matrix restricted_a_inverse(const PsdOperator& a, const Matrix& b, const Subspace& m,
                            const ToleranceConfig& tol = {});

/// A1A2-inverse (I - T2) B^dagger T1 with T1 = P_{A1,R(B)} and
/// T2 = P_{A2,N(A1 B)}; picks, among the A1-least-squares solutions,
/// the one of minimum A2-seminorm.
Matrix a1a2_inverse(const PsdOperator& a1, const PsdOperator& a2, const Matrix& b,
                    const ToleranceConfig& tol = {});

/// Weighted generalized inverse (I - P_{A2,N(B)}) B^dagger P_{A1,R(B)};
/// satisfies B C B = B, C B C = C and the two weighted symmetry conditions,
/// with B C = P_{A1,R(B)} and C B = I - P_{A2,N(B)}.
Matrix weighted_generalized_inverse(const PsdOperator& a1, const PsdOperator& a2,
                                    const Matrix& b, const ToleranceConfig& tol = {});

/// Evaluates the defining residuals of the requested inverse kind.
InverseCheckReport inverse_check(const PsdOperator& a1, const std::optional<PsdOperator>& a2,
                                 const Matrix& b, const Matrix& g, InverseKind kind,
                                 const std::optional<Subspace>& m = std::nullopt,
                                 const ToleranceConfig& tol = {});

}  // namespace wproj
