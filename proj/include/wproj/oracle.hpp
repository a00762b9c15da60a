#pragma once

#include <cstdint>

#include "wproj/numkernel.hpp"

namespace wproj::oracle {

// Reference computations for cross-checking the main modules. Everything here
// goes through the square-root lifting ||v||_A = ||A^{1/2} v|| and ordinary
// least squares; none of it touches the block or normal-equation formulas.

struct SeminormLss {
  Vector x_min;
  double value = 0.0;
};

/// Minimizes ||A^{1/2}(y - B x)|| directly: x = (A^{1/2} B)^dagger A^{1/2} y.
SeminormLss oracle_seminorm_lss(const PsdOperator& a, const Matrix& b, const Vector& y,
                                const ToleranceConfig& tol = {});

struct AffineMinimum {
  Vector point;
  double value = 0.0;
};

/// Exact minimizer of ||base + D t||_{A2} over coefficient vectors t,
/// solved in the lifted variable A2^{1/2}(base + D t).
AffineMinimum oracle_min_over_affine(const PsdOperator& a2, const Vector& base,
                                     const Subspace& directions,
                                     const ToleranceConfig& tol = {});

/// Randomized falsifier: samples `trials` coset points base + D t and accepts
/// iff the candidate A-dominates every one of them within tolerance.
/// Deterministic for a given seed.
bool dominance_sample_test(const PsdOperator& a, const Vector& candidate,
                           const Vector& coset_base, const Subspace& coset_dirs,
                           int trials, std::uint64_t seed,
                           const ToleranceConfig& tol = {});

}  // namespace wproj::oracle
