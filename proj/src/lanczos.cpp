#include "tqr/lanczos.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "tqr/errors.hpp"

namespace tqr {

namespace {

double dot(const std::vector<double>& x, const std::vector<double>& y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

}  // namespace

SymTridiag lanczos_from_spectrum(std::span<const double> lambda, std::span<const double> w) {
  const std::size_t n = lambda.size();
  if (n < 2 || w.size() != n) throw std::invalid_argument("lanczos_from_spectrum: size mismatch");
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!(lambda[i] < lambda[i + 1])) throw DuplicateEigenvalue("lanczos_from_spectrum: eigenvalues must be strictly increasing");
  double wn = 0.0;
  for (double x : w) {
    if (!(x > 0.0)) throw std::invalid_argument("lanczos_from_spectrum: weights must be positive");
    wn += x * x;
  }
  if (std::abs(std::sqrt(wn) - 1.0) > 1e-12) throw std::invalid_argument("lanczos_from_spectrum: weights must have unit norm");

  double scale = 0.0;
  for (double l : lambda) scale = std::max(scale, std::abs(l));
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(scale, 1e-300);

  std::vector<std::vector<double>> q;
  q.reserve(n);
  q.emplace_back(w.begin(), w.end());
  std::vector<double> diag(n), sub(n - 1);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = lambda[i] * q[j][i];
    diag[j] = dot(q[j], v);
    if (j + 1 == n) break;
    for (std::size_t i = 0; i < n; ++i) {
      v[i] -= diag[j] * q[j][i];
      if (j > 0) v[i] -= sub[j - 1] * q[j - 1][i];
    }
    // Two passes of classical Gram-Schmidt against every previous vector.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& qk : q) {
        const double h = dot(qk, v);
        for (std::size_t i = 0; i < n; ++i) v[i] -= h * qk[i];
      }
    }
    const double beta = std::sqrt(dot(v, v));
    if (beta <= floor) throw Breakdown("lanczos_from_spectrum: beta " + std::to_string(beta) + " at step " + std::to_string(j));
    sub[j] = beta;
    for (double& x : v) x /= beta;
    q.push_back(std::move(v));
  }
  return SymTridiag(std::move(diag), std::move(sub));
}

}  // namespace tqr
