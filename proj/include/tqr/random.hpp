#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "tqr/tridiag.hpp"

namespace tqr {

/// Deterministic generator keyed by (seed, stream).
///
/// Streams with different indices are statistically independent, so
/// trajectory k of a run draws the same numbers no matter how the runs are
/// scheduled. Real-valued draws are built from raw engine bits rather than
/// std distributions, whose output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t bits() { return engine_(); }
  /// Uniform on [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard exponential.
  double exponential();
  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Square roots of a symmetric Dirichlet(1) sample: a uniformly random point
/// of the positive orthant of the unit sphere, weighted by surface measure
/// of the simplex.
std::vector<double> dirichlet_weights(std::size_t n, Rng& rng);

/// Jacobi matrix with spectrum `lambda` and Dirichlet Lanczos weights.
SymTridiag random_jacobi(std::span<const double> lambda, Rng& rng);

/// Unreduced tridiagonal matrix with entries uniform in [-1, 1] and
/// subdiagonal magnitudes at least 0.05.
SymTridiag random_tridiag(std::size_t n, Rng& rng);

}  // namespace tqr
