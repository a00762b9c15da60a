#include "wproj/oracle.hpp"

#include "wproj/rng.hpp"

namespace wproj::oracle {

SeminormLss oracle_seminorm_lss(const PsdOperator& a, const Matrix& b, const Vector& y,
                                const ToleranceConfig& tol) {
  if (a.dim() != b.rows() || y.size() != b.rows())
    throw InputError("oracle lss: dimension mismatch");
  ensure_finite(b, "operator");
  ensure_finite(y, "right-hand side");
  const Matrix root = psd_sqrt(a, tol);
  SeminormLss out;
  out.x_min = pseudo_inverse(root * b, tol, root.norm() * b.norm()) * (root * y);
  out.value = (root * (y - b * out.x_min)).norm();
  return out;
}

AffineMinimum oracle_min_over_affine(const PsdOperator& a2, const Vector& base,
                                     const Subspace& directions, const ToleranceConfig& tol) {
  if (a2.dim() != base.size() || directions.ambient_dim() != base.size())
    throw InputError("oracle affine minimum: dimension mismatch");
  const Matrix root = psd_sqrt(a2, tol);
  AffineMinimum out;
  if (directions.dim() == 0) {
    out.point = base;
  } else {
    const Matrix lifted = root * directions.basis();
    const Vector t = -(pseudo_inverse(lifted, tol, root.norm()) * (root * base));
    out.point = base + directions.basis() * t;
  }
  out.value = (root * out.point).norm();
  return out;
}

bool dominance_sample_test(const PsdOperator& a, const Vector& candidate,
                           const Vector& coset_base, const Subspace& coset_dirs,
                           int trials, std::uint64_t seed, const ToleranceConfig& tol) {
  if (trials < 1) throw InputError("dominance test: trials must be >= 1");
  if (a.dim() != candidate.size() || coset_base.size() != candidate.size() ||
      coset_dirs.ambient_dim() != candidate.size())
    throw InputError("dominance test: dimension mismatch");
  const Matrix root = psd_sqrt(a, tol);
  const double lhs = (root * candidate).norm();
  Rng rng(seed);
  const Index k = coset_dirs.dim();
  for (int trial = 0; trial < trials; ++trial) {
    const Vector point = k == 0 ? coset_base
                                : Vector(coset_base + coset_dirs.basis() * rng.vector(k));
    const double rhs = (root * point).norm();
    if (lhs > rhs + tol.residual_tol * residual_scale({rhs})) return false;
  }
  return true;
}

}  // namespace wproj::oracle
