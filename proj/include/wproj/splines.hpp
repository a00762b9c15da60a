#pragma once

#include "wproj/projections.hpp"

namespace wproj {

/// Affine set of vectors representative + direction_space.
struct AffineVectorFamily {
  Vector representative;
  Subspace direction_space;

  Vector member(const Vector& coeff) const;
};

/// The interpolants sp(C, S, x): minimizers of ||C y|| over the coset x + S.
/// With A = C^H C the set is (I - P_{A,S}) x + N, which also covers x = 0
/// where it degenerates to the subspace N itself.
AffineVectorFamily spline_set(const Matrix& c, const Subspace& s, const Vector& x,
                              const ToleranceConfig& tol = {});

/// d_A(x, S) with A = C^H C: the distance from x to S in the seminorm,
/// realized by the distinguished projection.
double weighted_distance(const Matrix& c, const Subspace& s, const Vector& x,
                         const ToleranceConfig& tol = {});

}  // namespace wproj
