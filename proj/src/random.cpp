#include "tqr/random.hpp"

#include <cmath>

#include "tqr/lanczos.hpp"

namespace tqr {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : engine_(mix64(mix64(seed) ^ mix64(~stream))) {}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::exponential() { return -std::log1p(-uniform()); }

std::size_t Rng::index(std::size_t n) {
  return static_cast<std::size_t>(uniform() * static_cast<double>(n));
}

std::vector<double> dirichlet_weights(std::size_t n, Rng& rng) {
  std::vector<double> w(n);
  double total = 0.0;
  for (auto& x : w) {
    // Guard against an exact zero draw; the weight must stay positive.
    do { x = rng.exponential(); } while (x == 0.0);
    total += x;
  }
  for (auto& x : w) x = std::sqrt(x / total);
  return w;
}

SymTridiag random_jacobi(std::span<const double> lambda, Rng& rng) {
  return lanczos_from_spectrum(lambda, dirichlet_weights(lambda.size(), rng));
}

SymTridiag random_tridiag(std::size_t n, Rng& rng) {
  std::vector<double> d(n), s(n - 1);
  for (auto& x : d) x = rng.uniform(-1.0, 1.0);
  for (auto& x : s) {
    const double m = rng.uniform(0.05, 1.0);
    x = rng.uniform() < 0.5 ? -m : m;
  }
  return SymTridiag(std::move(d), std::move(s));
}

}  // namespace tqr
