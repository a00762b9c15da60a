#pragma once

#include <cstdint>
#include <random>

#include "wproj/numkernel.hpp"

namespace wproj {

/// Deterministic random source. The engine is the standard mt19937_64; the
/// real-valued draws are built from raw 64-bit words by hand because the
/// standard distributions are not reproducible across library
/// implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in (0, 1].
  double uniform() {
    return (double((engine_() >> 11)) + 1.0) * 0x1p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Inclusive integer range.
  Index index(Index lo, Index hi) {
    if (hi < lo) throw InputError("rng: empty index range");
    const std::uint64_t span = std::uint64_t(hi - lo) + 1;
    return lo + Index(engine_() % span);
  }

  /// Standard normal via Box-Muller.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(6.283185307179586477 * u2);
    have_spare_ = true;
    return r * std::cos(6.283185307179586477 * u2);
  }

  /// Standard complex normal (unit total variance).
  Complex complex_normal() {
    const double s = 0.70710678118654752440;
    return Complex(s * normal(), s * normal());
  }

  Matrix matrix(Index rows, Index cols) {
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) m(i, j) = complex_normal();
    return m;
  }

  Vector vector(Index n) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = complex_normal();
    return v;
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Per-trial seed derived from a root seed and a stream tag (splitmix64 mix).
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream, std::uint64_t trial) {
  std::uint64_t z = root + 0x9e3779b97f4a7c15ull * (stream + 1) + 0xbf58476d1ce4e5b9ull * (trial + 1);
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}

}  // namespace wproj
