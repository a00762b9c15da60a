#include "wproj/winverse.hpp"

#include <algorithm>

namespace wproj {

namespace {

void check_shapes(const PsdOperator& a1, const Matrix& b) {
  ensure_finite(b, "operator B");
  if (a1.dim() != b.rows()) throw InputError("weighted inverse: weight/operator dimension mismatch");
}

}  // namespace

const char* inverse_kind_name(InverseKind kind) {
  switch (kind) {
    case InverseKind::a_inverse: return "a-inverse";
    case InverseKind::restricted: return "restricted";
    case InverseKind::a1a2: return "a1a2";
    case InverseKind::weak_a1a2: return "weak-a1a2";
    case InverseKind::wgi: return "wgi";
    case InverseKind::weak_wgi_system: return "weak-wgi-system";
  }
  return "unknown";
}

Vector a_lss_solve(const PsdOperator& a, const Matrix& b, const Vector& y,
                   const ToleranceConfig& tol) {
  check_shapes(a, b);
  if (y.size() != b.rows()) throw InputError("least squares: vector dimension mismatch");
  ensure_finite(y, "right-hand side");
  const Matrix gram = b.adjoint() * a.mat() * b;
  const double gram_scale = a.mat().norm() * b.norm() * b.norm();
  return pseudo_inverse(gram, tol, gram_scale) * (b.adjoint() * (a.mat() * y));
}

AffineOperatorFamily a_inverse_family(const PsdOperator& a, const Matrix& b,
                                      const ToleranceConfig& tol) {
  check_shapes(a, b);
  const Matrix gram = b.adjoint() * a.mat() * b;
  const double gram_scale = a.mat().norm() * b.norm() * b.norm();
  AffineOperatorFamily fam;
  fam.base = pseudo_inverse(gram, tol, gram_scale) * (b.adjoint() * a.mat());
  fam.range_space = null_space(gram, tol, gram_scale);
  fam.domain_space = Subspace::full(b.rows());
  return fam;
}

Matrix restricted_a_inverse(const PsdOperator& a, const Matrix& b, const Subspace& m,
                            const ToleranceConfig& tol) {
  check_shapes(a, b);
  if (m.ambient_dim() != b.cols()) throw InputError("restricted inverse: subspace dimension mismatch");
  const Matrix bm = b * m.projector();
  const Matrix t = distinguished_projection(a, column_space(bm, tol, b.norm()), tol);
  return reduced_solution(bm, t, tol, b.norm());
}

Matrix a1a2_inverse(const PsdOperator& a1, const PsdOperator& a2, const Matrix& b,
                    const ToleranceConfig& tol) {
  check_shapes(a1, b);
  if (a2.dim() != b.cols()) throw InputError("a1a2 inverse: second weight dimension mismatch");
  const Matrix t1 = distinguished_projection(a1, column_space(b, tol), tol);
  // N(A1 B) through the half product: same kernel, half the condition number.
  const Matrix root1 = psd_sqrt(a1, tol);
  const Subspace ker = null_space(root1 * b, tol, root1.norm() * b.norm());
  const Matrix t2 = distinguished_projection(a2, ker, tol);
  const Matrix eye = Matrix::Identity(b.cols(), b.cols());
  return (eye - t2) * pseudo_inverse(b, tol) * t1;
}

Matrix weighted_generalized_inverse(const PsdOperator& a1, const PsdOperator& a2,
                                    const Matrix& b, const ToleranceConfig& tol) {
  check_shapes(a1, b);
  if (a2.dim() != b.cols()) throw InputError("weighted inverse: second weight dimension mismatch");
  const Matrix t1 = distinguished_projection(a1, column_space(b, tol), tol);
  const Matrix t2 = distinguished_projection(a2, null_space(b, tol), tol);
  const Matrix eye = Matrix::Identity(b.cols(), b.cols());
  return (eye - t2) * pseudo_inverse(b, tol) * t1;
}

InverseCheckReport inverse_check(const PsdOperator& a1, const std::optional<PsdOperator>& a2,
                                 const Matrix& b, const Matrix& g, InverseKind kind,
                                 const std::optional<Subspace>& m, const ToleranceConfig& tol) {
  check_shapes(a1, b);
  ensure_finite(g, "candidate inverse");
  if (g.rows() != b.cols() || g.cols() != b.rows())
    throw InputError("inverse check: candidate shape mismatch");

  const bool needs_a2 = kind == InverseKind::a1a2 || kind == InverseKind::weak_a1a2 ||
                        kind == InverseKind::wgi || kind == InverseKind::weak_wgi_system;
  if (needs_a2 && !a2) throw InputError("inverse check: this kind requires a second weight");
  if (a2 && a2->dim() != b.cols()) throw InputError("inverse check: second weight dimension mismatch");
  if (kind == InverseKind::restricted && !m)
    throw InputError("inverse check: restricted kind requires a subspace M");
  if (m && m->ambient_dim() != b.cols())
    throw InputError("inverse check: subspace dimension mismatch");

  InverseCheckReport rep;
  rep.kind = kind;

  const Matrix& w1 = a1.mat();
  auto add = [&](std::string name, double diff, double scale) -> bool {
    EquationCheck eq;
    eq.name = std::move(name);
    eq.residual = diff / scale;
    eq.pass = eq.residual <= tol.residual_tol;
    rep.equations.push_back(std::move(eq));
    return rep.equations.back().pass;
  };

  const double nb = b.norm(), ng = g.norm(), n1 = w1.norm();

  switch (kind) {
    case InverseKind::a_inverse: {
      const Matrix lhs = b.adjoint() * w1 * b * g;
      const Matrix rhs = b.adjoint() * w1;
      add("B^H A B G = B^H A", (lhs - rhs).norm(), residual_scale({lhs.norm(), rhs.norm()}));
      break;
    }
    case InverseKind::restricted: {
      const Matrix pm = m->projector();
      const Matrix eye = Matrix::Identity(g.rows(), g.rows());
      add("range(G) <= M", ((eye - pm) * g).norm(), residual_scale({ng}));
      const Matrix defect = pm * (b.adjoint() * w1 * b * g - b.adjoint() * w1);
      add("P_M (B^H A B G - B^H A) = 0", defect.norm(), residual_scale({n1 * nb * nb * ng, n1 * nb}));
      break;
    }
    case InverseKind::a1a2: {
      const Matrix lhs = b.adjoint() * w1 * b * g;
      const Matrix rhs = b.adjoint() * w1;
      add("B^H A1 B G = B^H A1", (lhs - rhs).norm(), residual_scale({lhs.norm(), rhs.norm()}));
      const Matrix root1 = psd_sqrt(a1, tol);
      const Matrix pker = null_space(root1 * b, tol, root1.norm() * b.norm()).projector();
      const Matrix range_defect = pker * a2->mat() * g;
      add("R(A2 G) <= N(A1 B)^perp", range_defect.norm(),
          residual_scale({a2->mat().norm() * ng}));
      break;
    }
    case InverseKind::weak_a1a2: {
      const Matrix bg = b * g;
      const Matrix gb = g * b;
      add("A1 B G B = A1 B", (w1 * bg * b - w1 * b).norm(), residual_scale({n1 * nb * ng * nb, n1 * nb}));
      add("A1 B G = (B G)^H A1", (w1 * bg - bg.adjoint() * w1).norm(), residual_scale({n1 * bg.norm()}));
      const Matrix& w2 = a2->mat();
      add("A2 G B G = A2 G", (w2 * gb * g - w2 * g).norm(),
          residual_scale({w2.norm() * gb.norm() * ng, w2.norm() * ng}));
      add("A2 G B = (G B)^H A2", (w2 * gb - gb.adjoint() * w2).norm(),
          residual_scale({w2.norm() * gb.norm()}));
      break;
    }
    case InverseKind::wgi: {
      const Matrix bg = b * g;
      const Matrix gb = g * b;
      add("B G B = B", (bg * b - b).norm(), residual_scale({nb * ng * nb, nb}));
      add("G B G = G", (gb * g - g).norm(), residual_scale({ng * nb * ng, ng}));
      add("A1 B G = (B G)^H A1", (w1 * bg - bg.adjoint() * w1).norm(), residual_scale({n1 * bg.norm()}));
      const Matrix& w2 = a2->mat();
      add("A2 G B = (G B)^H A2", (w2 * gb - gb.adjoint() * w2).norm(),
          residual_scale({w2.norm() * gb.norm()}));
      break;
    }
    case InverseKind::weak_wgi_system: {
      const Matrix bg = b * g;
      const Matrix gb = g * b;
      const Matrix eye = Matrix::Identity(g.rows(), g.rows());
      const double sys1 = pi_membership_residual(a1, column_space(b, tol), bg);
      const bool e1 = add("B G in Pi(A1, R(B))", sys1, 1.0);
      const double sys2 = pi_membership_residual(*a2, null_space(b, tol), eye - gb);
      const bool e2 = add("I - G B in Pi(A2, N(B))", sys2, 1.0);
      const bool system_pass = e1 && e2;

      const Matrix& w2 = a2->mat();
      const bool q1 = add("B G B = B", (bg * b - b).norm(), residual_scale({nb * ng * nb, nb}));
      const bool q2 = add("A1 B G = (B G)^H A1", (w1 * bg - bg.adjoint() * w1).norm(),
                          residual_scale({n1 * bg.norm()}));
      const bool q3 = add("A2 G B = (G B)^H A2", (w2 * gb - gb.adjoint() * w2).norm(),
                          residual_scale({w2.norm() * gb.norm()}));
      const bool equations_pass = q1 && q2 && q3;

      rep.system_vs_equations_agree = (system_pass == equations_pass);
      rep.pass = system_pass;
      return rep;
    }
  }

  rep.pass = std::all_of(rep.equations.begin(), rep.equations.end(),
                         [](const EquationCheck& eq) { return eq.pass; });
  return rep;
}

}  // namespace wproj
