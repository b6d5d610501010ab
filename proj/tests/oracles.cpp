#include "oracles.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace oracle {

namespace {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Removes the components along qs twice (reorthogonalized Gram-Schmidt).
void orthogonalize(Vec& v, const std::vector<Vec>& qs) {
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& q : qs) {
      const double c = dot(v, q);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * q[i];
    }
}

}  // namespace

DenseQR gram_schmidt_qr_star(const tqr::SymTridiag& t, double shift) {
  const std::size_t n = t.n();
  tqr::DenseMatrix a = tqr::DenseMatrix::from(t);
  for (std::size_t i = 0; i < n; ++i) a(i, i) -= shift;

  std::vector<Vec> qs;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    Vec v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = a(i, k);
    orthogonalize(v, qs);
    const double nv = std::sqrt(dot(v, v));
    if (nv == 0.0) throw std::runtime_error("dependent columns");
    for (double& x : v) x /= nv;
    qs.push_back(v);
  }
  // Last column: the unit vector orthogonal to the others, best conditioned
  // among projected coordinate vectors.
  Vec best;
  double best_norm = -1.0;
  for (std::size_t j = 0; j < n; ++j) {
    Vec e(n, 0.0);
    e[j] = 1.0;
    orthogonalize(e, qs);
    const double ne = std::sqrt(dot(e, e));
    if (ne > best_norm) {
      best_norm = ne;
      best = e;
    }
  }
  for (double& x : best) x /= best_norm;
  qs.push_back(best);

  DenseQR out{tqr::DenseMatrix(n), tqr::DenseMatrix(n)};
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) out.q(i, k) = qs[k][i];
  if (tqr::determinant(out.q) < 0.0) {
    for (std::size_t i = 0; i < n; ++i) out.q(i, n - 1) = -out.q(i, n - 1);
  }
  out.r = out.q.transpose() * a;
  return out;
}

tqr::DenseMatrix dense_congruence(const tqr::DenseMatrix& a, const tqr::DenseMatrix& q) {
  return q.transpose() * a * q;
}

}  // namespace oracle
