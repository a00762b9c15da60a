#include "wproj/splines.hpp"

namespace wproj {

Vector AffineVectorFamily::member(const Vector& coeff) const {
  if (coeff.size() != direction_space.dim())
    throw InputError("affine vector family: coefficient dimension mismatch");
  return representative + direction_space.basis() * coeff;
}

namespace {

PsdOperator gram_weight(const Matrix& c, const ToleranceConfig& tol) {
  ensure_finite(c, "factor");
  return PsdOperator(c.adjoint() * c, tol);
}

}  // namespace

AffineVectorFamily spline_set(const Matrix& c, const Subspace& s, const Vector& x,
                              const ToleranceConfig& tol) {
  if (c.cols() != s.ambient_dim() || x.size() != s.ambient_dim())
    throw InputError("spline set: dimension mismatch");
  ensure_finite(x, "vector");
  const PsdOperator a = gram_weight(c, tol);
  const Matrix p = distinguished_projection(a, s, tol);
  AffineVectorFamily fam;
  fam.representative = x - p * x;
  fam.direction_space = kernel_intersection(a, s, tol);
  return fam;
}

double weighted_distance(const Matrix& c, const Subspace& s, const Vector& x,
                         const ToleranceConfig& tol) {
  if (c.cols() != s.ambient_dim() || x.size() != s.ambient_dim())
    throw InputError("weighted distance: dimension mismatch");
  const PsdOperator a = gram_weight(c, tol);
  const Matrix p = distinguished_projection(a, s, tol);
  return seminorm(a, x - p * x, tol);
}

}  // namespace wproj
