#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wproj/numkernel.hpp"

namespace wproj::verify {

struct VerifyOptions {
  Index max_dim = 8;      // ambient dimensions drawn from 1..max_dim
  int trials = 100;       // instances per property
  std::uint64_t seed = 0; // root seed; per-trial seeds derive from it
};

struct PropertyResult {
  std::string name;
  bool pass = false;
  double worst_residual = 0.0;
  int trials = 0;
  int failures = 0;
  std::string detail;
};

// One checker per suite property. Tolerances are fixed by contract, not
// configurable: residual checks at 1e-8 (relative), subspace equalities and
// cross-route agreement at 1e-7, the idempotency separation witness at 1e-4,
// identity-weight pseudoinverse agreement at 1e-9.
PropertyResult check_distinguished_projection_contract(const VerifyOptions& opts);
PropertyResult check_invertible_case_agreement(const VerifyOptions& opts);
PropertyResult check_classification_equivalences(const VerifyOptions& opts);
PropertyResult check_affine_family_soundness(const VerifyOptions& opts);
PropertyResult check_minimality(const VerifyOptions& opts);
PropertyResult check_spline_optimality(const VerifyOptions& opts);
PropertyResult check_lss_oracle_agreement(const VerifyOptions& opts);
PropertyResult check_inverse_characterizations(const VerifyOptions& opts);
PropertyResult check_wgi_contract(const VerifyOptions& opts);

std::vector<PropertyResult> run_suite(const VerifyOptions& opts);

}  // namespace wproj::verify
