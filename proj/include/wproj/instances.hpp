#pragma once

#include "wproj/rng.hpp"

namespace wproj::gen {

// Seeded test-instance generators. Spectra are kept in [0.5, 2] and subspace
// angles away from the rank cutoff, so the fixed suite tolerances measure the
// implementation rather than the conditioning of the sampled instance.
// Deliberate rank deficiency (exact zeros) is untouched by the conditioning
// floor.

Matrix random_unitary(Rng& rng, Index n);

/// Hermitian PSD with the given rank; positive eigenvalues in [0.5, 2].
PsdOperator random_psd(Rng& rng, Index n, Index rank);

Subspace random_subspace(Rng& rng, Index n, Index k);

/// rows x cols with the given rank; positive singular values in [0.5, 2].
Matrix random_rank_matrix(Rng& rng, Index rows, Index cols, Index rank);

/// Oblique projection with range dimension k, resampled until its defining
/// factor is well conditioned.
Matrix random_idempotent(Rng& rng, Index n, Index k);

/// Whether the pair's block spectra split cleanly into exact zeros and O(1)
/// values; pairs failing this are too ill-conditioned for fixed-tolerance
/// property checks.
bool pair_well_separated(const PsdOperator& a, const Subspace& s);

struct WeightedPair {
  PsdOperator a;
  Subspace s;
};

/// Random (A, S) with rank(A) and dim(S) drawn uniformly. When
/// `force_degenerate` is set the pair is built so that N = S /\ N(A) is
/// nontrivial (requires n >= 2).
WeightedPair random_pair(Rng& rng, Index n, bool force_degenerate = false);

struct InverseTriple {
  PsdOperator a1;
  PsdOperator a2;
  Matrix b;
};

/// Random weights and operator for the inverse suites, conditioned so the
/// pairs (A1, R(B)), (A2, N(A1 B)) and optionally (A2, N(B)) are well
/// separated.
InverseTriple random_inverse_triple(Rng& rng, Index n, bool include_nullspace_pair = false);

}  // namespace wproj::gen
