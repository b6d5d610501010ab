#pragma once

// Scratch storage for an n x n matrix whose nonzeros satisfy |i - j| <= 2.
// Writes outside that band are discarded, which is how the step code drops
// roundoff fill-in.

#include <algorithm>
#include <cstddef>
#include <vector>

#include "tqr/factor.hpp"
#include "tqr/tridiag.hpp"

namespace tqr::detail {

class BandWork {
 public:
  static constexpr std::size_t kHalf = 2;

  explicit BandWork(std::size_t n) : n_(n), a_(n * (2 * kHalf + 1), 0.0) {}
  explicit BandWork(const SymTridiag& t, double shift = 0.0) : BandWork(t.n()) {
    for (std::size_t i = 0; i < n_; ++i) set(i, i, t.diag(i) - shift);
    for (std::size_t i = 0; i + 1 < n_; ++i) {
      set(i + 1, i, t.sub(i));
      set(i, i + 1, t.sub(i));
    }
  }

  std::size_t n() const noexcept { return n_; }

  static bool in_band(std::size_t i, std::size_t j) noexcept {
    return (i > j ? i - j : j - i) <= kHalf;
  }
  double get(std::size_t i, std::size_t j) const noexcept {
    return in_band(i, j) ? a_[i * (2 * kHalf + 1) + (j + kHalf - i)] : 0.0;
  }
  void set(std::size_t i, std::size_t j, double v) noexcept {
    if (in_band(i, j)) a_[i * (2 * kHalf + 1) + (j + kHalf - i)] = v;
  }

  // Columns/rows that can hold band entries of rows/cols k and k+1.
  std::size_t lo(std::size_t k) const noexcept { return k >= kHalf ? k - kHalf : 0; }
  std::size_t hi(std::size_t k) const noexcept { return std::min(n_, k + kHalf + 2); }

  /// Rows k, k+1 <- G^T [row k; row k+1].
  void rotate_rows_t(const Givens& g) noexcept {
    const std::size_t k = g.index;
    for (std::size_t j = lo(k); j < hi(k); ++j) {
      const double x = get(k, j);
      const double y = get(k + 1, j);
      set(k, j, g.c * x + g.s * y);
      set(k + 1, j, -g.s * x + g.c * y);
    }
  }
  /// Columns k, k+1 <- [col k, col k+1] G.
  void rotate_cols(const Givens& g) noexcept {
    const std::size_t k = g.index;
    for (std::size_t i = lo(k); i < hi(k); ++i) {
      const double x = get(i, k);
      const double y = get(i, k + 1);
      set(i, k, g.c * x + g.s * y);
      set(i, k + 1, -g.s * x + g.c * y);
    }
  }
  /// Rows k, k+1 <- G [row k; row k+1].
  void rotate_rows(const Givens& g) noexcept { rotate_rows_t({g.index, g.c, -g.s}); }
  /// Columns k, k+1 <- [col k, col k+1] G^T.
  void rotate_cols_t(const Givens& g) noexcept { rotate_cols({g.index, g.c, -g.s}); }

  void conjugate_signs(const SignMatrix& e) noexcept {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = lo(i); j < std::min(n_, i + kHalf + 1); ++j)
        if (e[i] != e[j]) set(i, j, -get(i, j));
  }

  /// Tridiagonal part, symmetrized by averaging the (i+1,i)/(i,i+1) pair.
  SymTridiag to_tridiag(double shift = 0.0) const {
    std::vector<double> d(n_), s(n_ - 1);
    for (std::size_t i = 0; i < n_; ++i) d[i] = get(i, i) + shift;
    for (std::size_t i = 0; i + 1 < n_; ++i) s[i] = 0.5 * (get(i + 1, i) + get(i, i + 1));
    return SymTridiag(std::move(d), std::move(s));
  }

  UpperTriangularBand upper() const {
    UpperTriangularBand r;
    r.main.resize(n_);
    r.super1.resize(n_ - 1);
    r.super2.resize(n_ >= 2 ? n_ - 2 : 0);
    for (std::size_t i = 0; i < n_; ++i) r.main[i] = get(i, i);
    for (std::size_t i = 0; i + 1 < n_; ++i) r.super1[i] = get(i, i + 1);
    for (std::size_t i = 0; i + 2 < n_; ++i) r.super2[i] = get(i, i + 2);
    return r;
  }

 private:
  std::size_t n_;
  std::vector<double> a_;
};

}  // namespace tqr::detail
