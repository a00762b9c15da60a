#include "wproj/projections.hpp"

#include <cmath>

namespace wproj {

namespace {

double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double min_eigenvalue(const Matrix& hermitian) {
  if (hermitian.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitian, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

}  // namespace

Matrix AffineOperatorFamily::member(const Matrix& coeff) const {
  if (coeff.rows() != param_rows() || coeff.cols() != param_cols())
    throw InputError("affine family: coefficient shape mismatch");
  return base + range_space.basis() * coeff * domain_space.basis().adjoint();
}

double AffineOperatorFamily::parametrization_residual(const Matrix& t) const {
  if (t.rows() != base.rows() || t.cols() != base.cols())
    throw InputError("affine family: operator shape mismatch");
  const Matrix diff = t - base;
  const Index n = base.rows();
  const Matrix off_range = (Matrix::Identity(n, n) - range_space.projector()) * diff;
  const Matrix off_domain = diff * (Matrix::Identity(n, n) - domain_space.projector());
  return std::max(off_range.norm(), off_domain.norm()) / residual_scale({t.norm(), base.norm()});
}

Subspace kernel_intersection(const PsdOperator& a, const Subspace& s,
                             const ToleranceConfig& tol) {
  if (a.dim() != s.ambient_dim()) throw InputError("kernel intersection: dimension mismatch");
  return subspace_intersection(s, null_space(a.mat(), tol), tol);
}

CompatibilityCertificate compatibility_certificate(const PsdOperator& a, const Subspace& s,
                                                   const ToleranceConfig& tol) {
  const BlockDecomposition dec = block_decompose(a, s);
  const Matrix d = pseudo_inverse(dec.a, tol, a.mat().norm()) * dec.b;
  CompatibilityCertificate cert;
  cert.residual = (dec.a * d - dec.b).norm() / residual_scale({dec.a.norm(), dec.b.norm()});
  cert.compatible = cert.residual <= tol.residual_tol;
  cert.degenerate = kernel_intersection(a, s, tol);
  return cert;
}

Matrix distinguished_projection(const PsdOperator& a, const Subspace& s,
                                const ToleranceConfig& tol) {
  const BlockDecomposition dec = block_decompose(a, s);
  const Matrix d = reduced_solution(dec.a, dec.b, tol, a.mat().norm());
  const Matrix& u = s.basis();
  const Matrix& v = dec.complement.basis();
  return u * u.adjoint() + u * d * v.adjoint();
}

Matrix invertible_case_projection(const PsdOperator& a, const Subspace& s,
                                  const ToleranceConfig& tol) {
  if (a.dim() != s.ambient_dim()) throw InputError("projection: dimension mismatch");
  if (a.dim() == 0) return Matrix(0, 0);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a.mat(), Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (lo <= tol.rank_rel_tol * hi)
    throw PreconditionError("invertible-case projection: weight is singular");
  const Matrix root = psd_sqrt(a, tol);
  const Matrix projector = column_space(root * s.basis(), tol, root.norm()).projector();
  return pseudo_inverse(root, tol) * projector * root;
}

AffineOperatorFamily projection_family(const PsdOperator& a, const Subspace& s,
                                       const ToleranceConfig& tol) {
  AffineOperatorFamily fam;
  fam.base = distinguished_projection(a, s, tol);
  fam.range_space = kernel_intersection(a, s, tol);
  fam.domain_space = s.complement();
  return fam;
}

AffineOperatorFamily weighted_projection_family(const PsdOperator& a, const Subspace& s,
                                                const ToleranceConfig& tol) {
  AffineOperatorFamily fam;
  fam.base = distinguished_projection(a, s, tol);
  fam.range_space = kernel_intersection(a, s, tol);
  fam.domain_space = Subspace::full(s.ambient_dim());
  return fam;
}

ClassifyReport classify_operator(const PsdOperator& a, const Matrix& t,
                                 const std::optional<Subspace>& s,
                                 const ToleranceConfig& tol) {
  const Index n = a.dim();
  if (t.rows() != n || t.cols() != n) throw InputError("classify: operator dimension mismatch");
  ensure_finite(t, "operator");
  if (s && s->ambient_dim() != n) throw InputError("classify: subspace dimension mismatch");

  ClassifyReport rep;
  const Matrix at = a.mat() * t;
  const double scale = residual_scale({a.mat().norm() * t.norm(), a.mat().norm()});

  rep.a_selfadjoint.residual = (at - t.adjoint() * a.mat()).norm() / scale;
  rep.a_selfadjoint.pass = rep.a_selfadjoint.residual <= tol.residual_tol;

  rep.a_idempotent.residual = (at * t - at).norm() / residual_scale({at.norm() * t.norm(), at.norm()});
  rep.a_idempotent.pass = rep.a_idempotent.residual <= tol.residual_tol;

  rep.route_defining.residual = (t.adjoint() * at - at).norm() / scale;
  rep.route_defining.pass = rep.route_defining.residual <= tol.residual_tol;

  rep.route_split.pass = rep.a_selfadjoint.pass && rep.a_idempotent.pass;
  rep.route_split.residual = std::max(rep.a_selfadjoint.residual, rep.a_idempotent.residual);

  {
    const Matrix pt = column_space(a.mat(), tol).projector() * t;
    const double idem = (pt * pt - pt).norm() / residual_scale({pt.norm() * pt.norm(), pt.norm()});
    const double sadj = (a.mat() * pt - pt.adjoint() * a.mat()).norm() / scale;
    rep.route_oblique.residual = std::max(idem, sadj);
    rep.route_oblique.pass = rep.route_oblique.residual <= tol.residual_tol;
  }

  rep.a_projection = rep.route_defining.pass;
  rep.routes_agree = (rep.route_defining.pass == rep.route_split.pass) &&
                     (rep.route_defining.pass == rep.route_oblique.pass);

  if (s) {
    Flag range_flag;
    range_flag.residual =
        ((Matrix::Identity(n, n) - s->projector()) * t).norm() / residual_scale({t.norm()});
    range_flag.pass = range_flag.residual <= tol.residual_tol;
    rep.range_in_s = range_flag;

    Flag onto_flag;
    const Matrix ps = s->projector();
    onto_flag.residual = (ps * at - ps * a.mat()).norm() / scale;
    onto_flag.pass = onto_flag.residual <= tol.residual_tol;
    rep.projects_onto_s = onto_flag;

    rep.a_projection_into_s = range_flag.pass && onto_flag.pass;
  }

  {
    // Loewner order test: smallest eigenvalue of A - T^H A T against -tol ||A||.
    const Matrix gap = 0.5 * ((a.mat() - t.adjoint() * at) + (a.mat() - t.adjoint() * at).adjoint());
    const double neg = min_eigenvalue(gap);
    rep.a_contraction.residual = std::max(0.0, -neg);
    rep.a_contraction.pass = neg >= -tol.residual_tol * operator_norm(a.mat());
  }

  {
    const Matrix herm = 0.5 * (at + at.adjoint());
    const double herm_defect = (at - at.adjoint()).norm() / residual_scale({at.norm()});
    const double neg = std::max(0.0, -min_eigenvalue(herm));
    rep.a_positive.residual = std::max(herm_defect, neg / residual_scale({at.norm()}));
    rep.a_positive.pass = herm_defect <= tol.residual_tol &&
                          neg <= tol.residual_tol * residual_scale({at.norm()});
  }

  {
    const Matrix root = psd_sqrt(a, tol);
    rep.seminorm_of_t = operator_norm(root * t * pseudo_inverse(root, tol, root.norm()));
  }

  return rep;
}

double pi_membership_residual(const PsdOperator& a, const Subspace& s, const Matrix& t) {
  const Index n = a.dim();
  if (t.rows() != n || t.cols() != n || s.ambient_dim() != n)
    throw InputError("membership: dimension mismatch");
  const Matrix ps = s.projector();
  const double range_defect =
      ((Matrix::Identity(n, n) - ps) * t).norm() / residual_scale({t.norm()});
  const double onto_defect = (ps * a.mat() * t - ps * a.mat()).norm() /
                             residual_scale({a.mat().norm() * t.norm(), a.mat().norm()});
  return std::max(range_defect, onto_defect);
}

double p_membership_residual(const PsdOperator& a, const Subspace& s, const Matrix& q,
                             const ToleranceConfig& tol) {
  const Index n = a.dim();
  if (q.rows() != n || q.cols() != n || s.ambient_dim() != n)
    throw InputError("membership: dimension mismatch");
  const double idem = (q * q - q).norm() / residual_scale({q.norm() * q.norm(), q.norm()});
  const double sadj = (a.mat() * q - q.adjoint() * a.mat()).norm() /
                      residual_scale({a.mat().norm() * q.norm()});
  const double range = subspace_gap(column_space(q, tol), s);
  return std::max({idem, sadj, range});
}

MinimalityReport minimality_report(const PsdOperator& a, const Subspace& s, const Matrix& t,
                                   const std::optional<Vector>& x, const ToleranceConfig& tol) {
  if (pi_membership_residual(a, s, t) > tol.residual_tol)
    throw PreconditionError("minimality: operator is not an A-projection into S");
  const Matrix p = distinguished_projection(a, s, tol);
  MinimalityReport rep;
  rep.norm_gap = operator_norm(t) - operator_norm(p);
  if (x) {
    if (x->size() != a.dim()) throw InputError("minimality: vector dimension mismatch");
    const Index n = a.dim();
    const Matrix eye = Matrix::Identity(n, n);
    rep.pointwise_gap = ((eye - t) * *x).norm() - ((eye - p) * *x).norm();
  }
  return rep;
}

}  // namespace wproj
