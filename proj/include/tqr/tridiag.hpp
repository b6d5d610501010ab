#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tqr {

/// Real symmetric tridiagonal matrix stored as its diagonal and subdiagonal.
///
/// Entry (i+1, i) and (i, i+1) are both sub()[i]. Indices are 0-based; the
/// lowest subdiagonal entry (n, n-1) in 1-based notation is b().
class SymTridiag {
 public:
  SymTridiag() = default;
  /// Throws std::invalid_argument unless diag.size() >= 2 and
  /// sub.size() == diag.size() - 1.
  SymTridiag(std::vector<double> diag, std::vector<double> sub);

  static SymTridiag diagonal(std::vector<double> diag);

  std::size_t n() const noexcept { return diag_.size(); }
  std::span<const double> diag() const noexcept { return diag_; }
  std::span<const double> sub() const noexcept { return sub_; }
  double diag(std::size_t i) const { return diag_.at(i); }
  double sub(std::size_t i) const { return sub_.at(i); }
  void set_diag(std::size_t i, double v) { diag_.at(i) = v; }
  void set_sub(std::size_t i, double v) { sub_.at(i) = v; }

  /// Lowest subdiagonal entry, b_1.
  double b() const noexcept { return sub_.back(); }
  /// Second-lowest subdiagonal entry, b_2; zero when n == 2.
  double b2() const noexcept { return n() >= 3 ? sub_[n() - 3] : 0.0; }
  double corner() const noexcept { return diag_.back(); }
  double subcorner() const noexcept { return diag_[n() - 2]; }

  /// Entry (i, j); zero outside the band.
  double operator()(std::size_t i, std::size_t j) const;

  /// Frobenius norm, sqrt(trace(T^2)).
  double norm() const noexcept;
  double max_abs() const noexcept;
  /// sqrt of the sum of squared subdiagonal entries.
  double offdiag_norm() const noexcept;
  bool is_unreduced() const noexcept;

  /// Leading principal (n-1) x (n-1) block; requires n >= 3.
  SymTridiag leading() const;

  friend bool operator==(const SymTridiag&, const SymTridiag&) = default;

 private:
  std::vector<double> diag_;
  std::vector<double> sub_;
};

/// Entrywise max |A - B|; sizes must agree.
double max_abs_diff(const SymTridiag& a, const SymTridiag& b);
/// Frobenius distance ||A - B||.
double distance(const SymTridiag& a, const SymTridiag& b);

/// Signed diagonal matrix E with +-1 entries.
class SignMatrix {
 public:
  explicit SignMatrix(std::vector<int> signs);
  static SignMatrix identity(std::size_t n);
  /// E_n = diag(1, ..., 1, -1).
  static SignMatrix last_flip(std::size_t n);
  /// Pattern number `bits` over n entries: bit k set flips entry k.
  static SignMatrix from_bits(std::size_t n, unsigned long bits);

  std::size_t n() const noexcept { return signs_.size(); }
  int operator[](std::size_t i) const { return signs_.at(i); }
  std::span<const int> signs() const noexcept { return signs_; }

 private:
  std::vector<int> signs_;
};

}  // namespace tqr
