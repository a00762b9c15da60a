#include "wproj/numkernel.hpp"

#include <algorithm>
#include <cmath>

namespace wproj {

namespace {

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

Matrix empty_like_cols(Index rows) { return Matrix(rows, 0); }

}  // namespace

void ToleranceConfig::validate() const {
  if (!(rank_rel_tol > 0.0 && rank_rel_tol < 1.0))
    throw InputError("tolerance: rank_rel_tol must lie in (0,1)");
  if (!(residual_tol > 0.0 && residual_tol < 1.0))
    throw InputError("tolerance: residual_tol must lie in (0,1)");
}

double residual_scale(std::initializer_list<double> norms) {
  double s = 1.0;
  for (double n : norms) s += n;
  return s;
}

void ensure_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw InputError(std::string(what) + ": non-finite entries");
}

bool is_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).norm() <= tol * residual_scale({m.norm()});
}

Subspace Subspace::zero(Index ambient_dim) {
  if (ambient_dim < 0) throw InputError("subspace: negative ambient dimension");
  return Subspace(ambient_dim, Matrix(ambient_dim, 0));
}

Subspace Subspace::full(Index ambient_dim) {
  if (ambient_dim < 0) throw InputError("subspace: negative ambient dimension");
  return Subspace(ambient_dim, Matrix::Identity(ambient_dim, ambient_dim));
}

Subspace Subspace::span_of(const Matrix& generators, const ToleranceConfig& tol) {
  ensure_finite(generators, "subspace generators");
  return column_space(generators, tol);
}

Subspace Subspace::from_orthonormal(Matrix basis, const ToleranceConfig& tol) {
  ensure_finite(basis, "subspace basis");
  const Index k = basis.cols();
  if (basis.rows() < k) throw InputError("subspace: more basis vectors than ambient dimension");
  const Matrix gram = basis.adjoint() * basis;
  if ((gram - Matrix::Identity(k, k)).norm() > tol.residual_tol * residual_scale({std::sqrt(double(k))}))
    throw InputError("subspace: basis columns are not orthonormal");
  const Index ambient = basis.rows();
  return Subspace(ambient, std::move(basis));
}

Subspace Subspace::complement() const {
  if (dim() == 0) return Subspace::full(ambient_);
  if (dim() == ambient_) return Subspace::zero(ambient_);
  Eigen::JacobiSVD<Matrix> svd(basis_, Eigen::ComputeFullU);
  return Subspace(ambient_, svd.matrixU().rightCols(ambient_ - dim()));
}

double Subspace::containment_residual(const Vector& v) const {
  if (v.size() != ambient_) throw InputError("subspace: vector dimension mismatch");
  const Vector defect = v - basis_ * (basis_.adjoint() * v);
  return defect.norm() / residual_scale({v.norm()});
}

bool Subspace::contains(const Vector& v, const ToleranceConfig& tol) const {
  return containment_residual(v) <= tol.residual_tol;
}

double subspace_gap(const Subspace& s1, const Subspace& s2) {
  if (s1.ambient_dim() != s2.ambient_dim())
    throw InputError("subspace gap: ambient dimension mismatch");
  return (s1.projector() - s2.projector()).norm();
}

bool subspace_equal(const Subspace& s1, const Subspace& s2, double tol) {
  return subspace_gap(s1, s2) <= tol;
}

PsdOperator::PsdOperator(Matrix mat, const ToleranceConfig& tol) {
  ensure_finite(mat, "weight operator");
  if (mat.rows() != mat.cols()) throw InputError("weight operator: not square");
  if (!is_hermitian(mat, tol.residual_tol))
    throw InputError("weight operator: not Hermitian within tolerance");
  mat_ = hermitian_part(mat);
  if (mat_.rows() > 0) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(mat_, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (lo < -tol.residual_tol * residual_scale({hi}))
      throw InputError("weight operator: not positive semidefinite within tolerance");
  }
}

PsdOperator PsdOperator::identity(Index n) { return PsdOperator(Matrix::Identity(n, n)); }

RankFactorization rank_factorization(const Matrix& m, const ToleranceConfig& tol,
                                     double scale_hint) {
  ensure_finite(m);
  tol.validate();
  const Index rows = m.rows(), cols = m.cols();
  RankFactorization f;
  if (rows == 0 || cols == 0) {
    f.left = empty_like_cols(rows);
    f.right = empty_like_cols(cols);
    f.left_complement = Matrix::Identity(rows, rows);
    f.right_complement = Matrix::Identity(cols, cols);
    return f;
  }
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector& sv = svd.singularValues();
  const double cutoff = tol.rank_rel_tol * std::max(sv(0), scale_hint);
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff && sv(rank) > 0.0) ++rank;
  f.rank = rank;
  f.left = svd.matrixU().leftCols(rank);
  f.right = svd.matrixV().leftCols(rank);
  f.singular_values.assign(sv.data(), sv.data() + rank);
  f.left_complement = svd.matrixU().rightCols(rows - rank);
  f.right_complement = svd.matrixV().rightCols(cols - rank);
  return f;
}

Matrix pseudo_inverse(const Matrix& m, const ToleranceConfig& tol, double scale_hint) {
  const RankFactorization f = rank_factorization(m, tol, scale_hint);
  Matrix pinv = Matrix::Zero(m.cols(), m.rows());
  for (Index i = 0; i < f.rank; ++i)
    pinv += (1.0 / f.singular_values[size_t(i)]) * f.right.col(i) * f.left.col(i).adjoint();
  return pinv;
}

Matrix psd_sqrt(const PsdOperator& a, const ToleranceConfig& tol) {
  const Index n = a.dim();
  if (n == 0) return Matrix(0, 0);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a.mat());
  RealVector lam = eig.eigenvalues();
  const double floor = tol.rank_rel_tol * std::max(lam.maxCoeff(), 0.0);
  for (Index i = 0; i < n; ++i) lam(i) = lam(i) > floor ? std::sqrt(lam(i)) : 0.0;
  return hermitian_part(eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().adjoint());
}

Subspace column_space(const Matrix& m, const ToleranceConfig& tol, double scale_hint) {
  const RankFactorization f = rank_factorization(m, tol, scale_hint);
  return Subspace::from_orthonormal(f.left, tol);
}

Subspace null_space(const Matrix& m, const ToleranceConfig& tol, double scale_hint) {
  const RankFactorization f = rank_factorization(m, tol, scale_hint);
  return Subspace::from_orthonormal(f.right_complement, tol);
}

Matrix orthogonal_projector(const Subspace& s) { return s.projector(); }

Subspace subspace_intersection(const Subspace& m1, const Subspace& m2,
                               const ToleranceConfig& tol) {
  if (m1.ambient_dim() != m2.ambient_dim())
    throw InputError("subspace intersection: ambient dimension mismatch");
  const Index n = m1.ambient_dim();
  // v is in both subspaces iff it annihilates the stacked complement projectors.
  Matrix stacked(2 * n, n);
  stacked.topRows(n) = Matrix::Identity(n, n) - m1.projector();
  stacked.bottomRows(n) = Matrix::Identity(n, n) - m2.projector();
  return null_space(stacked, tol, 1.0);  // unit scale: entries are projector defects
}

Subspace subspace_ominus(const Subspace& m1, const Subspace& m2,
                         const ToleranceConfig& tol) {
  if (m1.ambient_dim() != m2.ambient_dim())
    throw InputError("subspace ominus: ambient dimension mismatch");
  const Subspace common = subspace_intersection(m1, m2, tol);
  if (common.dim() == 0) return m1;
  const Matrix reduced =
      (Matrix::Identity(m1.ambient_dim(), m1.ambient_dim()) - common.projector()) * m1.basis();
  return column_space(reduced, tol, 1.0);  // unit scale: projections of unit vectors
}

Matrix reduced_solution(const Matrix& a, const Matrix& b, const ToleranceConfig& tol,
                        double scale_hint) {
  ensure_finite(a, "left-hand operator");
  ensure_finite(b, "right-hand operator");
  if (a.rows() != b.rows()) throw InputError("reduced solution: row dimension mismatch");
  const Matrix a_pinv = pseudo_inverse(a, tol, scale_hint);
  const Matrix d = a_pinv * b;
  const double defect = (a * d - b).norm();
  if (defect > tol.residual_tol * residual_scale({a.norm(), b.norm()}))
    throw PreconditionError("no solution: range condition fails");
  return d;
}

BlockDecomposition block_decompose(const PsdOperator& a, const Subspace& s) {
  if (a.dim() != s.ambient_dim())
    throw InputError("block decomposition: dimension mismatch");
  BlockDecomposition dec;
  dec.subspace = s;
  dec.complement = s.complement();
  const Matrix& u = s.basis();
  const Matrix& v = dec.complement.basis();
  dec.a = hermitian_part(u.adjoint() * a.mat() * u);
  dec.b = u.adjoint() * a.mat() * v;
  dec.c = hermitian_part(v.adjoint() * a.mat() * v);
  return dec;
}

Matrix assemble_from_blocks(const BlockDecomposition& dec) {
  const Matrix& u = dec.subspace.basis();
  const Matrix& v = dec.complement.basis();
  return u * dec.a * u.adjoint() + u * dec.b * v.adjoint() +
         v * dec.b.adjoint() * u.adjoint() + v * dec.c * v.adjoint();
}

double seminorm(const PsdOperator& a, const Vector& x, const ToleranceConfig& tol) {
  if (x.size() != a.dim()) throw InputError("seminorm: vector dimension mismatch");
  ensure_finite(x, "vector");
  const Complex quad = x.dot(a.mat() * x);  // <Ax, x>
  const double scale = residual_scale({a.mat().norm() * x.squaredNorm()});
  if (quad.real() < -tol.residual_tol * scale || std::abs(quad.imag()) > tol.residual_tol * scale)
    throw PreconditionError("seminorm: weight fails positivity on this vector");
  return (psd_sqrt(a, tol) * x).norm();
}

}  // namespace wproj
