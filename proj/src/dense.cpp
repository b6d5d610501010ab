#include "tqr/dense.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "tqr/errors.hpp"

namespace tqr {

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::from(const SymTridiag& t) {
  DenseMatrix m(t.n());
  for (std::size_t i = 0; i < t.n(); ++i) m(i, i) = t.diag(i);
  for (std::size_t i = 0; i + 1 < t.n(); ++i) {
    m(i + 1, i) = t.sub(i);
    m(i, i + 1) = t.sub(i);
  }
  return m;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(n_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double DenseMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (double v : a_) m = std::max(m, std::abs(v));
  return m;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.n() != b.n()) throw std::invalid_argument("DenseMatrix product: size mismatch");
  const std::size_t n = a.n();
  DenseMatrix c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.n() != b.n()) throw std::invalid_argument("DenseMatrix difference: size mismatch");
  DenseMatrix c(a.n());
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = 0; j < a.n(); ++j) c(i, j) = a(i, j) - b(i, j);
  return c;
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) { return (a - b).max_abs(); }

double determinant(DenseMatrix a) {
  const std::size_t n = a.n();
  double det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
    if (a(p, k) == 0.0) return 0.0;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(k, j));
      det = -det;
    }
    det *= a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

SymmetricDense::SymmetricDense(const DenseMatrix& a) : a_(a.n()) {
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = i; j < a.n(); ++j) set(i, j, a(i, j));
}

double SymmetricDense::frobenius() const noexcept {
  double acc = 0.0;
  for (std::size_t i = 0; i < n(); ++i)
    for (std::size_t j = 0; j < n(); ++j) acc += a_(i, j) * a_(i, j);
  return std::sqrt(acc);
}

double SymmetricDense::trace() const noexcept {
  double t = 0.0;
  for (std::size_t i = 0; i < n(); ++i) t += a_(i, i);
  return t;
}

namespace {

constexpr int kJacobiSweeps = 64;
constexpr double kJacobiOffTol = 1e-14;

double off_norm(const DenseMatrix& a) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.n(); ++i)
    for (std::size_t j = 0; j < a.n(); ++j)
      if (i != j) acc += a(i, j) * a(i, j);
  return std::sqrt(acc);
}

}  // namespace

EigenDecomposition dense_eig_oracle(const SymmetricDense& input) {
  const std::size_t n = input.n();
  DenseMatrix a = input.matrix();
  DenseMatrix v = DenseMatrix::identity(n);
  const double scale = input.frobenius();

  bool converged = scale == 0.0;
  for (int sweep = 0; sweep < kJacobiSweeps && !converged; ++sweep) {
    if (off_norm(a) <= kJacobiOffTol * scale) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rutishauser's formulation: t = tan of the rotation angle, |t| <= 1.
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::hypot(theta, 1.0));
        const double c = 1.0 / std::hypot(t, 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (!converged && off_norm(a) > kJacobiOffTol * scale) {
    throw NoConvergence("Jacobi eigensolver: sweep budget exhausted");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });
  EigenDecomposition out{std::vector<double>(n), DenseMatrix(n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

std::vector<double> oracle_eigenvalues(const SymTridiag& t) { return dense_eig_oracle(t).values; }

SymmetricDense matrix_function(const SymTridiag& t, std::span<const double> values) {
  if (values.size() != t.n()) throw std::invalid_argument("matrix_function: need one value per eigenvalue");
  const auto eig = dense_eig_oracle(t);
  const std::size_t n = t.n();
  SymmetricDense out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += eig.vectors(i, k) * values[k] * eig.vectors(j, k);
      out.set(i, j, acc);
    }
  return out;
}

}  // namespace tqr
