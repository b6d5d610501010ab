#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tqr/tridiag.hpp"

namespace tqr {

/// Row-major square matrix. Only used for materialized factors and by the
/// oracle; the iteration itself never leaves banded storage.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t n, double fill = 0.0) : n_(n), a_(n * n, fill) {}
  static DenseMatrix identity(std::size_t n);
  static DenseMatrix from(const SymTridiag& t);

  std::size_t n() const noexcept { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  DenseMatrix transpose() const;
  double max_abs() const noexcept;

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);
/// Determinant by partially pivoted elimination.
double determinant(DenseMatrix a);

/// Dense symmetric matrix; symmetric by construction (only the upper
/// triangle is read when building from a general matrix).
class SymmetricDense {
 public:
  SymmetricDense() = default;
  explicit SymmetricDense(std::size_t n) : a_(n) {}
  /// Mirrors the upper triangle of `a`.
  explicit SymmetricDense(const DenseMatrix& a);
  explicit SymmetricDense(const SymTridiag& t) : SymmetricDense(DenseMatrix::from(t)) {}

  std::size_t n() const noexcept { return a_.n(); }
  double operator()(std::size_t i, std::size_t j) const { return a_(i, j); }
  void set(std::size_t i, std::size_t j, double v) {
    a_(i, j) = v;
    a_(j, i) = v;
  }
  const DenseMatrix& matrix() const noexcept { return a_; }
  double frobenius() const noexcept;
  double trace() const noexcept;

 private:
  DenseMatrix a_;
};

struct EigenDecomposition {
  std::vector<double> values;  ///< ascending
  DenseMatrix vectors;         ///< column k is the unit eigenvector of values[k]
};

/// Cyclic Jacobi eigensolver used as an independent reference.
///
/// Runs at most 64 sweeps and stops once the off-diagonal Frobenius norm
/// falls to 1e-14 * ||A||. Throws NoConvergence when the budget runs out.
EigenDecomposition dense_eig_oracle(const SymmetricDense& a);
inline EigenDecomposition dense_eig_oracle(const SymTridiag& t) {
  return dense_eig_oracle(SymmetricDense(t));
}

/// Ascending eigenvalues of a tridiagonal matrix via the oracle.
std::vector<double> oracle_eigenvalues(const SymTridiag& t);

/// V diag(values) V^T with V from the oracle; `values` is indexed in
/// ascending eigenvalue order.
SymmetricDense matrix_function(const SymTridiag& t, std::span<const double> values);

}  // namespace tqr
