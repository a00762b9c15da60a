#include "wproj/instances.hpp"

#include <algorithm>

namespace wproj::gen {

namespace {

constexpr int kMaxResamples = 256;
constexpr double kCleanLow = 1e-3;   // smallest admissible "nonzero" value
constexpr double kCleanHigh = 1e-8;  // largest admissible "zero" value

bool clean_values(const RealVector& values) {
  for (Index i = 0; i < values.size(); ++i)
    if (values(i) > kCleanHigh && values(i) < kCleanLow) return false;
  return true;
}

RealVector singular_values(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return RealVector(0);
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues();
}

[[noreturn]] void exhausted(const char* what) {
  throw InputError(std::string("instance generator: could not produce ") + what);
}

}  // namespace

Matrix random_unitary(Rng& rng, Index n) {
  if (n == 0) return Matrix(0, 0);
  const Matrix g = rng.matrix(n, n);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  // Fix the phases so the distribution is Haar.
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

PsdOperator random_psd(Rng& rng, Index n, Index rank) {
  if (rank < 0 || rank > n) throw InputError("instance generator: rank out of range");
  const Matrix q = random_unitary(rng, n);
  RealVector lam = RealVector::Zero(n);
  for (Index i = 0; i < rank; ++i) lam(i) = rng.uniform(0.5, 2.0);
  Matrix m = q * lam.asDiagonal() * q.adjoint();
  return PsdOperator(0.5 * (m + m.adjoint()));
}

Subspace random_subspace(Rng& rng, Index n, Index k) {
  if (k < 0 || k > n) throw InputError("instance generator: subspace dimension out of range");
  if (k == 0) return Subspace::zero(n);
  for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
    const Subspace s = Subspace::span_of(rng.matrix(n, k));
    if (s.dim() == k) return s;
  }
  exhausted("a subspace of the requested dimension");
}

Matrix random_rank_matrix(Rng& rng, Index rows, Index cols, Index rank) {
  if (rank < 0 || rank > std::min(rows, cols))
    throw InputError("instance generator: rank out of range");
  if (rank == 0) return Matrix::Zero(rows, cols);
  const Matrix u = random_subspace(rng, rows, rank).basis();
  const Matrix v = random_subspace(rng, cols, rank).basis();
  RealVector sv(rank);
  for (Index i = 0; i < rank; ++i) sv(i) = rng.uniform(0.5, 2.0);
  return u * sv.asDiagonal() * v.adjoint();
}

Matrix random_idempotent(Rng& rng, Index n, Index k) {
  if (k < 1 || k >= n) throw InputError("instance generator: idempotent rank out of range");
  for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
    const Matrix x = random_subspace(rng, n, k).basis();
    const Matrix y = random_subspace(rng, n, k).basis();
    const Matrix cross = y.adjoint() * x;
    const RealVector sv = singular_values(cross);
    if (sv(sv.size() - 1) < 0.2) continue;
    return x * cross.inverse() * y.adjoint();
  }
  exhausted("a well-conditioned idempotent");
}

bool pair_well_separated(const PsdOperator& a, const Subspace& s) {
  const Matrix compressed = s.basis().adjoint() * a.mat() * s.basis();
  if (!clean_values(singular_values(compressed))) return false;
  return clean_values(singular_values(a.mat() * s.basis()));
}

WeightedPair random_pair(Rng& rng, Index n, bool force_degenerate) {
  if (n < 1) throw InputError("instance generator: dimension must be positive");
  if (force_degenerate && n < 2)
    throw InputError("instance generator: degenerate pairs need dimension >= 2");
  for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
    if (!force_degenerate) {
      PsdOperator a = random_psd(rng, n, rng.index(0, n));
      Subspace s = random_subspace(rng, n, rng.index(0, n));
      if (pair_well_separated(a, s)) return {std::move(a), std::move(s)};
      continue;
    }
    const Index rank = rng.index(1, n - 1);
    const Index nullity = n - rank;
    const Index deg = rng.index(1, nullity);
    const Index extra = rng.index(0, rank);
    const Matrix q = random_unitary(rng, n);
    RealVector lam = RealVector::Zero(n);
    for (Index i = 0; i < rank; ++i) lam(i) = rng.uniform(0.5, 2.0);
    PsdOperator a(q * lam.asDiagonal() * q.adjoint());
    // Span: `deg` directions drawn inside N(A) plus `extra` generic ones.
    const Matrix kernel_frame = q.rightCols(nullity);
    Matrix gens(n, deg + extra);
    gens.leftCols(deg) = kernel_frame * random_unitary(rng, nullity).leftCols(deg);
    if (extra > 0) gens.rightCols(extra) = rng.matrix(n, extra);
    Subspace s = Subspace::span_of(gens);
    if (s.dim() != deg + extra) continue;
    if (!pair_well_separated(a, s)) continue;
    const Matrix in_kernel = kernel_frame.adjoint() * s.basis();
    const RealVector sv = singular_values(in_kernel);
    const Index met = Index((sv.array() > 1.0 - 1e-8).count());
    if (met != deg) continue;  // intersection larger or smaller than built
    return {std::move(a), std::move(s)};
  }
  exhausted("a well-separated weighted pair");
}

InverseTriple random_inverse_triple(Rng& rng, Index n, bool include_nullspace_pair) {
  if (n < 1) throw InputError("instance generator: dimension must be positive");
  for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
    PsdOperator a1 = random_psd(rng, n, rng.index(0, n));
    PsdOperator a2 = random_psd(rng, n, rng.index(0, n));
    Matrix b = random_rank_matrix(rng, n, n, rng.index(0, n));
    const Matrix half = psd_sqrt(a1) * b;  // default tolerances: generator-side check
    if (!clean_values(singular_values(half))) continue;
    if (!pair_well_separated(a1, column_space(b))) continue;
    if (!pair_well_separated(a2, null_space(half))) continue;
    if (include_nullspace_pair && !pair_well_separated(a2, null_space(b))) continue;
    return {std::move(a1), std::move(a2), std::move(b)};
  }
  exhausted("a well-separated inverse triple");
}

}  // namespace wproj::gen
