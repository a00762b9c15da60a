#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace wproj {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Malformed or out-of-contract input (non-finite entries, dimension
/// mismatch, invalid weight operator, unreadable document).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A mathematical precondition failed (range condition, singular weight,
/// family membership required by an operation).
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tolerances shared across the suite. Rank decisions use a single relative
/// singular-value cutoff applied once per factorization; every predicate
/// residual is relative: ||X||_F <= residual_tol * (1 + sum of input norms).
struct ToleranceConfig {
  double rank_rel_tol = 1e-10;
  double residual_tol = 1e-8;

  void validate() const;
};

/// 1 + sum of Frobenius norms, the common residual scale.
double residual_scale(std::initializer_list<double> norms);

/// Throws InputError if M contains NaN or Inf.
void ensure_finite(const Matrix& m, const char* what = "matrix");

bool is_hermitian(const Matrix& m, double tol);

/// Closed subspace of C^n stored as an orthonormal column basis.
/// An empty basis (k = 0) is the zero subspace.
class Subspace {
 public:
  Subspace() = default;

  static Subspace zero(Index ambient_dim);
  static Subspace full(Index ambient_dim);

  /// Column space of `generators`, orthonormalized; rank decided by `tol`.
  static Subspace span_of(const Matrix& generators, const ToleranceConfig& tol = {});

  /// Adopts `basis` after checking basis^H basis = I within tolerance.
  static Subspace from_orthonormal(Matrix basis, const ToleranceConfig& tol = {});

  Index ambient_dim() const { return ambient_; }
  Index dim() const { return basis_.cols(); }
  const Matrix& basis() const { return basis_; }

  /// basis * basis^H, the orthogonal projector onto this subspace.
  Matrix projector() const { return basis_ * basis_.adjoint(); }

  /// Orthonormal basis of the orthogonal complement.
  Subspace complement() const;

  /// ||(I - P)v|| relative to (1 + ||v||).
  double containment_residual(const Vector& v) const;
  bool contains(const Vector& v, const ToleranceConfig& tol = {}) const;

 private:
  Subspace(Index ambient, Matrix basis) : ambient_(ambient), basis_(std::move(basis)) {}

  Index ambient_ = 0;
  Matrix basis_;  // ambient_ x k, orthonormal columns
};

/// ||P_S1 - P_S2||_F; subspace equality is a small projector difference.
double subspace_gap(const Subspace& s1, const Subspace& s2);
bool subspace_equal(const Subspace& s1, const Subspace& s2, double tol);

/// Hermitian positive-semidefinite weight. The stored matrix is the
/// Hermitian part of the input; construction rejects inputs that are not
/// Hermitian PSD within tolerance.
class PsdOperator {
 public:
  explicit PsdOperator(Matrix mat, const ToleranceConfig& tol = {});

  static PsdOperator identity(Index n);

  const Matrix& mat() const { return mat_; }
  Index dim() const { return mat_.rows(); }

 private:
  Matrix mat_;
};

/// Truncated SVD M = left * diag(singular_values) * right^H with the rank
/// decided once: sigma kept iff sigma > rank_rel_tol * max(sigma_max,
/// scale_hint). The complements carry orthonormal bases of R(M)^perp and
/// N(M). Pass the natural scale of the inputs as `scale_hint` when M is a
/// derived product that may consist entirely of roundoff noise; 0 means
/// self-scaled.
struct RankFactorization {
  Matrix left;                         // m x rank
  std::vector<double> singular_values; // rank, nonincreasing
  Matrix right;                        // n x rank
  Index rank = 0;
  Matrix left_complement;              // m x (m - rank)
  Matrix right_complement;             // n x (n - rank)
};

RankFactorization rank_factorization(const Matrix& m, const ToleranceConfig& tol = {},
                                     double scale_hint = 0.0);

/// Moore-Penrose inverse; satisfies the four Penrose equations within
/// the residual tolerance.
Matrix pseudo_inverse(const Matrix& m, const ToleranceConfig& tol = {}, double scale_hint = 0.0);

/// Hermitian PSD square root via eigendecomposition. Eigenvalues that are
/// zero or negative within the rank tolerance are clamped to exact zeros, so
/// the root has the same numerical rank as its input.
Matrix psd_sqrt(const PsdOperator& a, const ToleranceConfig& tol = {});

Subspace column_space(const Matrix& m, const ToleranceConfig& tol = {}, double scale_hint = 0.0);
Subspace null_space(const Matrix& m, const ToleranceConfig& tol = {}, double scale_hint = 0.0);

/// P = basis * basis^H.
Matrix orthogonal_projector(const Subspace& s);

Subspace subspace_intersection(const Subspace& m1, const Subspace& m2,
                               const ToleranceConfig& tol = {});

/// M1 (-) M2 = M1 /\ (M1 /\ M2)^perp.
Subspace subspace_ominus(const Subspace& m1, const Subspace& m2,
                         const ToleranceConfig& tol = {});

/// The reduced solution D of A X = B: the unique solution with
/// R(D) contained in R(A^H) (and then N(D) = N(B)). Throws
/// PreconditionError when the range condition R(B) <= R(A) fails.
Matrix reduced_solution(const Matrix& a, const Matrix& b, const ToleranceConfig& tol = {},
                        double scale_hint = 0.0);

/// Blocks of a PSD operator relative to (S, S^perp):
///   A = [U V] [[a, b], [b^H, c]] [U V]^H
/// with U the basis of S and V the complement chosen at decomposition time.
struct BlockDecomposition {
  Subspace subspace;
  Subspace complement;
  Matrix a;  // k x k, Hermitian PSD
  Matrix b;  // k x (n-k)
  Matrix c;  // (n-k) x (n-k), Hermitian PSD
};

BlockDecomposition block_decompose(const PsdOperator& a, const Subspace& s);
Matrix assemble_from_blocks(const BlockDecomposition& dec);

/// ||x||_A = ||A^{1/2} x||. Throws PreconditionError if <Ax,x> is negative
/// or non-real beyond tolerance.
double seminorm(const PsdOperator& a, const Vector& x, const ToleranceConfig& tol = {});

}  // namespace wproj
