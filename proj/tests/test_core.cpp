#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "tqr/dense.hpp"
#include "tqr/errors.hpp"
#include "tqr/factor.hpp"
#include "tqr/lanczos.hpp"
#include "tqr/random.hpp"
#include "tqr/tridiag.hpp"

using namespace tqr;

namespace {

DenseMatrix shifted(const SymTridiag& t, double s) {
  DenseMatrix a = DenseMatrix::from(t);
  for (std::size_t i = 0; i < t.n(); ++i) a(i, i) -= s;
  return a;
}

}  // namespace

TEST_CASE("tridiagonal storage and accessors") {
  const SymTridiag t({1, 2, 3}, {4, 5});
  CHECK(t.n() == 3);
  CHECK(t(0, 1) == 4);
  CHECK(t(2, 1) == 5);
  CHECK(t(0, 2) == 0);
  CHECK(t.b() == 5);
  CHECK(t.b2() == 4);
  CHECK(t.corner() == 3);
  CHECK(t.subcorner() == 2);
  CHECK(t.norm() == doctest::Approx(std::sqrt(1 + 4 + 9 + 2 * 16 + 2 * 25)));
  CHECK(t.leading() == SymTridiag({1, 2}, {4}));
  CHECK(SymTridiag({1, 2}, {0}).b2() == 0.0);
  CHECK_THROWS_AS(SymTridiag({1}, {}), std::invalid_argument);
  CHECK_THROWS_AS(SymTridiag({1, 2}, {1, 2}), std::invalid_argument);
  CHECK_FALSE(SymTridiag({1, 2, 3}, {1, 0}).is_unreduced());
}

TEST_CASE("sign matrices") {
  const auto lf = SignMatrix::last_flip(3).signs();
  CHECK(std::vector<int>(lf.begin(), lf.end()) == std::vector<int>{1, 1, -1});
  const auto fb = SignMatrix::from_bits(3, 0b101).signs();
  CHECK(std::vector<int>(fb.begin(), fb.end()) == std::vector<int>{-1, 1, -1});
  CHECK_THROWS_AS(SignMatrix(std::vector<int>{1, 0}), std::invalid_argument);
}

TEST_CASE("Jacobi oracle eigenvalues") {
  const auto a = oracle_eigenvalues(SymTridiag::diagonal({3, 1, 2}));
  CHECK(a == std::vector<double>{1, 2, 3});
  const auto b = oracle_eigenvalues(SymTridiag({0, 0}, {1}));
  CHECK(b[0] == doctest::Approx(-1.0));
  CHECK(b[1] == doctest::Approx(1.0));
  const auto c = oracle_eigenvalues(SymTridiag({0, 0, 0}, {1, 1}));
  CHECK(c[0] == doctest::Approx(-std::numbers::sqrt2));
  CHECK(std::abs(c[1]) < 1e-14);
  CHECK(c[2] == doctest::Approx(std::numbers::sqrt2));
}

TEST_CASE("matrix functions through the oracle") {
  Rng rng(7);
  const SymTridiag t = random_tridiag(5, rng);
  const auto ev = oracle_eigenvalues(t);
  CHECK(max_abs_diff(matrix_function(t, ev).matrix(), DenseMatrix::from(t)) < 1e-10);
  const std::vector<double> ones(5, 1.0);
  CHECK(max_abs_diff(matrix_function(t, ones).matrix(), DenseMatrix::identity(5)) < 1e-10);
  const std::vector<double> v{10, 20};
  CHECK(max_abs_diff(matrix_function(SymTridiag::diagonal({1, 2}), v).matrix(),
                     DenseMatrix::from(SymTridiag::diagonal({10, 20}))) < 1e-10);
}

TEST_CASE("signed QR of the identity and a singular 2x2") {
  const QRFactors id = qr_star(SymTridiag::diagonal({1, 1}), 0.0);
  CHECK(max_abs_diff(id.q.dense(), DenseMatrix::identity(2)) < 1e-15);
  CHECK(max_abs_diff(id.r.dense(), DenseMatrix::identity(2)) < 1e-15);

  const QRFactors f = qr_star(SymTridiag({1, 1}, {1}), 0.0);
  const double h = 1.0 / std::numbers::sqrt2;
  const DenseMatrix q = f.q.dense();
  CHECK(q(0, 0) == doctest::Approx(h));
  CHECK(q(1, 0) == doctest::Approx(h));
  CHECK(q(0, 1) == doctest::Approx(-h));
  CHECK(q(1, 1) == doctest::Approx(h));
  CHECK(f.r(0, 0) == doctest::Approx(std::numbers::sqrt2));
  CHECK(f.r(0, 1) == doctest::Approx(std::numbers::sqrt2));
  CHECK(std::abs(f.r(1, 1)) < 1e-15);
}

TEST_CASE("signed QR reconstructs and matches Gram-Schmidt") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const SymTridiag t = random_tridiag(2 + trial % 6, rng);
    const double s = rng.uniform(-1.0, 1.0);
    const QRFactors f = qr_star(t, s);
    const DenseMatrix q = f.q.dense();
    const DenseMatrix r = f.r.dense();
    CHECK(max_abs_diff(q * r, shifted(t, s)) < 1e-12);
    CHECK(determinant(q) == doctest::Approx(1.0));
    for (std::size_t i = 0; i + 1 < t.n(); ++i) CHECK(r(i, i) > 0.0);
    const oracle::DenseQR gs = oracle::gram_schmidt_qr_star(t, s);
    CHECK(max_abs_diff(q, gs.q) < 1e-11);
    CHECK(max_abs_diff(r, gs.r) < 1e-11);
  }
}

TEST_CASE("signed QR beyond the spectrum") {
  Rng rng(12);
  const SymTridiag t = random_tridiag(4, rng);
  const double s = oracle_eigenvalues(t).back() + 1.0;
  const QRFactors f = qr_star(t, s);
  CHECK(max_abs_diff(f.q.dense() * f.r.dense(), shifted(t, s)) < 1e-12);
}

TEST_CASE("plain QR") {
  const QRFactors d = qr_plain(SymTridiag::diagonal({2, 5}), 0.0);
  CHECK(max_abs_diff(d.q.dense(), DenseMatrix::identity(2)) < 1e-15);
  CHECK(d.r(0, 0) == 2.0);
  CHECK(d.r(1, 1) == 5.0);
  CHECK_THROWS_AS(qr_plain(SymTridiag({1, 1}, {1}), 0.0), Singular);

  // det(T - sI) < 0 for this 2x2: Q = Q* E_n.
  const SymTridiag t({0, 0}, {1});
  const QRFactors plain = qr_plain(t, 0.5);
  const QRFactors star = qr_star(t, 0.5);
  DenseMatrix qe = star.q.dense();
  for (std::size_t i = 0; i < 2; ++i) qe(i, 1) = -qe(i, 1);
  CHECK(max_abs_diff(plain.q.dense(), qe) < 1e-15);
  for (std::size_t i = 0; i < 2; ++i) CHECK(plain.r(i, i) > 0.0);

  const QRFactors diag = qr_plain(SymTridiag::diagonal({3, 4, 5}), 1.0);
  CHECK(max_abs_diff(diag.q.dense(), DenseMatrix::identity(3)) < 1e-15);
  CHECK(diag.r(2, 2) == 4.0);
}

TEST_CASE("signed RQ reconstructs") {
  Rng rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const SymTridiag t = random_tridiag(2 + trial % 6, rng);
    const double s = rng.uniform(-1.0, 1.0);
    const RQFactors f = rq_star(t, s);
    const DenseMatrix r = f.r.dense();
    CHECK(max_abs_diff(r * f.q.dense(), shifted(t, s)) < 1e-12);
    for (std::size_t i = 0; i + 1 < t.n(); ++i) CHECK(r(i, i) > 0.0);
  }
  CHECK_THROWS_AS(rq_star(SymTridiag({1, 1}, {1}), 0.0), Singular);
}

TEST_CASE("almost invertibility") {
  Rng rng(14);
  CHECK(almost_invertible(random_tridiag(5, rng), 0.25));
  CHECK_FALSE(almost_invertible(SymTridiag::diagonal({1, 2}), 1.0));
  // Reducible, s an eigenvalue of the trailing block only.
  CHECK(almost_invertible(SymTridiag({0, 0, 5}, {1, 0}), 5.0));
  CHECK_THROWS_AS(qr_star(SymTridiag::diagonal({1, 2}), 1.0), AlmostSingular);
}

TEST_CASE("Lanczos inverse problem") {
  const double h = 1.0 / std::numbers::sqrt2;
  const std::vector<double> l{-1, 1};
  const std::vector<double> w{h, h};
  const SymTridiag t = lanczos_from_spectrum(l, w);
  CHECK(max_abs_diff(t, SymTridiag({0, 0}, {1})) < 1e-15);

  const std::vector<double> lam{-1, 0, 0.3, 1};
  const std::vector<double> ww{0.4, 0.5, 0.3, std::sqrt(1 - 0.16 - 0.25 - 0.09)};
  const SymTridiag j = lanczos_from_spectrum(lam, ww);
  for (double b : j.sub()) CHECK(b > 0.0);
  const auto eig = dense_eig_oracle(j);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(std::abs(eig.values[k] - lam[k]) < 1e-9);
    CHECK(std::abs(std::abs(eig.vectors(0, k)) - ww[k]) < 1e-9);
  }

  // Concentrating the weight on the first eigenvalue decouples the rest.
  double prev = 1.0;
  for (double eps : {1e-2, 1e-4, 1e-6, 1e-8}) {
    const std::vector<double> c{std::sqrt(1 - 2 * eps), std::sqrt(eps), std::sqrt(eps)};
    const std::vector<double> l3{1, 2, 4};
    const double b = lanczos_from_spectrum(l3, c).sub(0);
    CHECK(b < prev);
    prev = b;
  }

  const std::vector<double> dup{1, 1};
  CHECK_THROWS_AS(lanczos_from_spectrum(dup, w), DuplicateEigenvalue);
  const std::vector<double> bad{1, 0};
  CHECK_THROWS_AS(lanczos_from_spectrum(l, bad), std::invalid_argument);
}

TEST_CASE("random generator is keyed by seed and stream") {
  Rng a(5, 3);
  Rng b(5, 3);
  Rng c(5, 4);
  const double x = a.uniform();
  CHECK(x == b.uniform());
  CHECK(x != c.uniform());
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  const auto w = dirichlet_weights(5, a);
  double s = 0.0;
  for (double v : w) {
    CHECK(v > 0.0);
    s += v * v;
  }
  CHECK(s == doctest::Approx(1.0));
  const std::vector<double> lam{1, 2, 4};
  const SymTridiag j = random_jacobi(lam, a);
  const auto ev = oracle_eigenvalues(j);
  for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(ev[k] - lam[k]) < 1e-12);
}
