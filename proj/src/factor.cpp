#include "tqr/factor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "band.hpp"
#include "tqr/errors.hpp"

namespace tqr {

using detail::BandWork;

OrthogonalFactor::OrthogonalFactor(std::size_t n, std::vector<Givens> rotations)
    : OrthogonalFactor(n, std::move(rotations), SignMatrix::identity(n)) {}

OrthogonalFactor::OrthogonalFactor(std::size_t n, std::vector<Givens> rotations, SignMatrix signs)
    : n_(n), rotations_(std::move(rotations)), signs_(std::move(signs)) {
  if (signs_.n() != n_) throw std::invalid_argument("OrthogonalFactor: sign size mismatch");
  for (const auto& g : rotations_) {
    if (g.index + 1 >= n_) throw std::invalid_argument("OrthogonalFactor: rotation index out of range");
  }
}

DenseMatrix OrthogonalFactor::dense() const {
  DenseMatrix q = DenseMatrix::identity(n_);
  for (const auto& g : rotations_) {
    const std::size_t k = g.index;
    for (std::size_t i = 0; i < n_; ++i) {
      const double x = q(i, k);
      const double y = q(i, k + 1);
      q(i, k) = g.c * x + g.s * y;
      q(i, k + 1) = -g.s * x + g.c * y;
    }
  }
  for (std::size_t j = 0; j < n_; ++j)
    if (signs_[j] < 0)
      for (std::size_t i = 0; i < n_; ++i) q(i, j) = -q(i, j);
  return q;
}

double UpperTriangularBand::operator()(std::size_t i, std::size_t j) const {
  if (j == i) return main.at(i);
  if (j == i + 1) return super1.at(i);
  if (j == i + 2) return super2.at(i);
  return 0.0;
}

DenseMatrix UpperTriangularBand::dense() const {
  DenseMatrix r(n());
  for (std::size_t i = 0; i < n(); ++i)
    for (std::size_t j = i; j < std::min(n(), i + 3); ++j) r(i, j) = (*this)(i, j);
  return r;
}

double pivot_tolerance(const SymTridiag& t, double shift) {
  double m = 0.0;
  for (double d : t.diag()) m = std::max(m, std::abs(d - shift));
  for (double s : t.sub()) m = std::max(m, std::abs(s));
  return 1e-13 * std::max(1.0, m);
}

double singular_tolerance(const SymTridiag& t) { return 1e-12 * (1.0 + t.norm()); }

QRFactors qr_star(const SymTridiag& t, double shift) {
  const std::size_t n = t.n();
  const double tol = pivot_tolerance(t, shift);
  BandWork w(t, shift);
  std::vector<Givens> rotations;
  rotations.reserve(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double a = w.get(k, k);
    const double b = w.get(k + 1, k);
    const double r = std::hypot(a, b);
    if (r <= tol) throw AlmostSingular(k, r);
    const Givens g{k, a / r, b / r};
    w.rotate_rows_t(g);
    w.set(k, k, r);
    w.set(k + 1, k, 0.0);
    rotations.push_back(g);
  }
  return {OrthogonalFactor(n, std::move(rotations)), w.upper()};
}

QRFactors qr_plain(const SymTridiag& t, double shift) {
  QRFactors f = qr_star(t, shift);
  double& last = f.r.main.back();
  if (std::abs(last) <= singular_tolerance(t)) {
    throw Singular("qr_plain: T - sI is singular (shift is an eigenvalue)");
  }
  if (last < 0.0) {
    // Q = Q* E_n, R = E_n R*; only the last row of R is touched.
    last = -last;
    f.q = OrthogonalFactor(t.n(), f.q.rotations(), SignMatrix::last_flip(t.n()));
  }
  return f;
}

RQFactors rq_star(const SymTridiag& t, double shift) {
  const std::size_t n = t.n();
  const double tol = singular_tolerance(t);
  BandWork w(t, shift);
  // Eliminate (k, k-1) bottom-up with column rotations: M G_{n-2} ... G_0 = R.
  std::vector<Givens> applied;
  applied.reserve(n - 1);
  for (std::size_t k = n - 1; k >= 1; --k) {
    const double x = w.get(k, k - 1);
    const double y = w.get(k, k);
    const double r = std::hypot(x, y);
    if (r <= tol) throw Singular("rq_star: T - sI is singular (shift is an eigenvalue)");
    const Givens g{k - 1, y / r, -x / r};
    w.rotate_cols(g);
    w.set(k, k - 1, 0.0);
    w.set(k, k, r);
    applied.push_back(g);
  }
  UpperTriangularBand r = w.upper();
  if (std::abs(r.main[0]) <= tol) throw Singular("rq_star: T - sI is singular (shift is an eigenvalue)");

  // M = R Q with Q = G_0^T G_1^T ... G_{n-2}^T.
  std::vector<Givens> q_rot;
  q_rot.reserve(n - 1);
  for (auto it = applied.rbegin(); it != applied.rend(); ++it) q_rot.push_back({it->index, it->c, -it->s});
  SignMatrix signs = SignMatrix::identity(n);

  if (r.main[0] < 0.0) {
    // Move a sign pair D = diag(-1, 1, ..., 1, -1) across: R <- R D, Q <- D Q.
    std::vector<int> d(n, 1);
    d.front() = -1;
    d.back() = -1;
    r.main[0] = -r.main[0];
    if (n == 2) {
      r.super1[0] = -r.super1[0];
      r.main[1] = -r.main[1];
    } else {
      r.main[n - 1] = -r.main[n - 1];
      r.super1[n - 2] = -r.super1[n - 2];
      r.super2[n - 3] = -r.super2[n - 3];
    }
    for (auto& g : q_rot) {
      if (d[g.index] != d[g.index + 1]) g.s = -g.s;
    }
    signs = SignMatrix(std::move(d));
  }
  return {std::move(r), OrthogonalFactor(n, std::move(q_rot), std::move(signs))};
}

bool almost_invertible(const SymTridiag& t, double shift) {
  try {
    (void)qr_star(t, shift);
    return true;
  } catch (const AlmostSingular&) {
    return false;
  }
}

}  // namespace tqr
