#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "tqr/dense.hpp"
#include "tqr/tridiag.hpp"

namespace tqr {

/// Plane rotation acting on coordinates (index, index + 1):
///
///   [ c  -s ]
///   [ s   c ]
///
/// embedded in the identity. Determinant is always +1.
struct Givens {
  std::size_t index = 0;
  double c = 1.0;
  double s = 0.0;
};

/// Orthogonal matrix Q = G_0 G_1 ... G_{m-1} diag(signs).
///
/// Signed factors carry all-positive signs and so lie in SO(n); the plain QR
/// factor may carry E_n on the right.
class OrthogonalFactor {
 public:
  OrthogonalFactor(std::size_t n, std::vector<Givens> rotations);
  OrthogonalFactor(std::size_t n, std::vector<Givens> rotations, SignMatrix signs);

  std::size_t n() const noexcept { return n_; }
  const std::vector<Givens>& rotations() const noexcept { return rotations_; }
  const SignMatrix& signs() const noexcept { return signs_; }

  DenseMatrix dense() const;

 private:
  std::size_t n_;
  std::vector<Givens> rotations_;
  SignMatrix signs_;
};

/// Upper triangular matrix with two superdiagonals.
struct UpperTriangularBand {
  std::vector<double> main;    ///< n entries (R)_{i,i}
  std::vector<double> super1;  ///< n-1 entries (R)_{i,i+1}
  std::vector<double> super2;  ///< n-2 entries (R)_{i,i+2}

  std::size_t n() const noexcept { return main.size(); }
  double operator()(std::size_t i, std::size_t j) const;
  DenseMatrix dense() const;
  /// (R)_{n,n} / (R)_{n-1,n-1}, the fiber multiplier of a step.
  double last_ratio() const { return main[n() - 1] / main[n() - 2]; }
};

struct QRFactors {
  OrthogonalFactor q;
  UpperTriangularBand r;
};

struct RQFactors {
  UpperTriangularBand r;
  OrthogonalFactor q;
};

/// Pivot floor for almost-invertibility: 1e-13 * max(1, ||T - sI||_max).
double pivot_tolerance(const SymTridiag& t, double shift);
/// Threshold below which |(R)_{n,n}| counts as zero: 1e-12 * (1 + ||T||).
double singular_tolerance(const SymTridiag& t);

/// Signed factorization T - sI = Q R with Q in SO(n) and (R)_{i,i} > 0 for
/// i < n-1 (0-based); the last diagonal entry of R keeps the sign of
/// det(T - sI). Throws AlmostSingular when a leading pivot vanishes.
QRFactors qr_star(const SymTridiag& t, double shift);

/// Standard factorization T - sI = Q R with every (R)_{i,i} > 0.
/// Throws Singular when det(T - sI) = 0 within tolerance.
QRFactors qr_plain(const SymTridiag& t, double shift);

/// T - sI = R Q with Q in SO(n) and (R)_{i,i} > 0 for i < n-1.
/// Throws Singular when s is an eigenvalue within tolerance.
RQFactors rq_star(const SymTridiag& t, double shift);

/// True iff the first n-1 columns of T - sI are independent, judged by the
/// Givens pivots against pivot_tolerance().
bool almost_invertible(const SymTridiag& t, double shift);

}  // namespace tqr
