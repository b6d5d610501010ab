#include "tqr/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tqr {

SymTridiag::SymTridiag(std::vector<double> diag, std::vector<double> sub)
    : diag_(std::move(diag)), sub_(std::move(sub)) {
  if (diag_.size() < 2) {
    throw std::invalid_argument("SymTridiag needs n >= 2, got n = " +
                                std::to_string(diag_.size()));
  }
  if (sub_.size() + 1 != diag_.size()) {
    throw std::invalid_argument("SymTridiag: subdiagonal must have n - 1 entries");
  }
}

SymTridiag SymTridiag::diagonal(std::vector<double> diag) {
  std::vector<double> sub(diag.empty() ? 0 : diag.size() - 1, 0.0);
  return SymTridiag(std::move(diag), std::move(sub));
}

double SymTridiag::operator()(std::size_t i, std::size_t j) const {
  if (i == j) return diag_.at(i);
  if (i == j + 1) return sub_.at(j);
  if (j == i + 1) return sub_.at(i);
  return 0.0;
}

double SymTridiag::norm() const noexcept {
  double acc = 0.0;
  for (double d : diag_) acc += d * d;
  for (double s : sub_) acc += 2.0 * s * s;
  return std::sqrt(acc);
}

double SymTridiag::max_abs() const noexcept {
  double m = 0.0;
  for (double d : diag_) m = std::max(m, std::abs(d));
  for (double s : sub_) m = std::max(m, std::abs(s));
  return m;
}

double SymTridiag::offdiag_norm() const noexcept {
  double acc = 0.0;
  for (double s : sub_) acc += s * s;
  return std::sqrt(acc);
}

bool SymTridiag::is_unreduced() const noexcept {
  return std::none_of(sub_.begin(), sub_.end(), [](double s) { return s == 0.0; });
}

SymTridiag SymTridiag::leading() const {
  if (n() < 3) throw std::invalid_argument("leading block needs n >= 3");
  return SymTridiag(std::vector<double>(diag_.begin(), diag_.end() - 1),
                    std::vector<double>(sub_.begin(), sub_.end() - 1));
}

double max_abs_diff(const SymTridiag& a, const SymTridiag& b) {
  if (a.n() != b.n()) throw std::invalid_argument("max_abs_diff: size mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.n(); ++i) m = std::max(m, std::abs(a.diag(i) - b.diag(i)));
  for (std::size_t i = 0; i + 1 < a.n(); ++i) m = std::max(m, std::abs(a.sub(i) - b.sub(i)));
  return m;
}

double distance(const SymTridiag& a, const SymTridiag& b) {
  if (a.n() != b.n()) throw std::invalid_argument("distance: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.n(); ++i) {
    const double d = a.diag(i) - b.diag(i);
    acc += d * d;
  }
  for (std::size_t i = 0; i + 1 < a.n(); ++i) {
    const double d = a.sub(i) - b.sub(i);
    acc += 2.0 * d * d;
  }
  return std::sqrt(acc);
}

SignMatrix::SignMatrix(std::vector<int> signs) : signs_(std::move(signs)) {
  for (int s : signs_) {
    if (s != 1 && s != -1) throw std::invalid_argument("SignMatrix entries must be +-1");
  }
}

SignMatrix SignMatrix::identity(std::size_t n) { return SignMatrix(std::vector<int>(n, 1)); }

SignMatrix SignMatrix::last_flip(std::size_t n) {
  std::vector<int> s(n, 1);
  if (n > 0) s.back() = -1;
  return SignMatrix(std::move(s));
}

SignMatrix SignMatrix::from_bits(std::size_t n, unsigned long bits) {
  std::vector<int> s(n, 1);
  for (std::size_t k = 0; k < n; ++k) {
    if ((bits >> k) & 1UL) s[k] = -1;
  }
  return SignMatrix(std::move(s));
}

}  // namespace tqr
