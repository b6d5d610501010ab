#include <doctest.h>

#include <cmath>
#include <vector>

#include "tqr/dense.hpp"
#include "tqr/errors.hpp"
#include "tqr/random.hpp"
#include "tqr/step.hpp"

using namespace tqr;

TEST_CASE("step at an eigenvalue deflates in one step") {
  const StepResult r = phi_star(SymTridiag({1, 1}, {1}), 0.0);
  CHECK(std::abs(r.next.diag(0) - 2.0) < 1e-15);
  CHECK(std::abs(r.next.corner()) < 1e-15);
  CHECK(std::abs(r.next.b()) < 1e-15);
  CHECK(r.det_sign == 0);

  Rng rng(21);
  const SymTridiag t = random_tridiag(5, rng);
  for (double lam : oracle_eigenvalues(t)) {
    const SymTridiag next = step(t, lam);
    CHECK(std::abs(next.b()) < 1e-10 * t.norm());
    CHECK(std::abs(next.corner() - lam) < 1e-10 * t.norm());
  }
}

TEST_CASE("diagonal matrices are fixed") {
  const SymTridiag d = SymTridiag::diagonal({1, 2, 4});
  CHECK(step(d, 3.0) == d);
  CHECK(max_abs_diff(phi(d, 0.5), d) == 0.0);
}

TEST_CASE("steps preserve the spectrum") {
  Rng rng(22);
  const SymTridiag t = random_tridiag(5, rng);
  const auto a = oracle_eigenvalues(t);
  const auto b = oracle_eigenvalues(step(t, 0.1));
  for (std::size_t k = 0; k < a.size(); ++k) CHECK(std::abs(a[k] - b[k]) < 1e-10);
}

TEST_CASE("fiber multiplier") {
  Rng rng(23);
  const SymTridiag t = random_tridiag(4, rng);
  const StepResult r = phi_star(t, 0.2);
  CHECK(std::abs(r.next.b() - r.ratio_last * t.b()) < 1e-13);
}

TEST_CASE("plain and signed steps") {
  const SymTridiag t({0, 0}, {1});
  CHECK(max_abs_diff(phi(t, -2.0), step(t, -2.0)) < 1e-15);

  Rng rng(24);
  for (int trial = 0; trial < 40; ++trial) {
    const SymTridiag m = random_tridiag(2 + trial % 5, rng);
    const double s = rng.uniform(-1.0, 1.0);
    const StepResult r = phi_star(m, s);
    const SymTridiag expected = r.det_sign < 0 ? sign_conjugate(r.next, SignMatrix::last_flip(m.n())) : r.next;
    CHECK(max_abs_diff(phi(m, s), expected) < 1e-12);
  }
  CHECK_THROWS_AS(phi(SymTridiag({1, 1}, {1}), 0.0), Singular);
}

TEST_CASE("inverse step") {
  Rng rng(25);
  const SymTridiag t = random_tridiag(6, rng);
  CHECK(max_abs_diff(step_inverse(step(t, 0.3), 0.3), t) < 1e-10);
  CHECK(max_abs_diff(step(step_inverse(t, 0.3), 0.3), t) < 1e-10);
  const SymTridiag d = SymTridiag::diagonal({1, 2, 4});
  CHECK(max_abs_diff(step_inverse(d, 3.0), d) < 1e-15);
  CHECK_THROWS_AS(step_inverse(SymTridiag({1, 1}, {1}), 0.0), Singular);

  const SymTridiag m = random_tridiag(3, rng);
  const auto ev = oracle_eigenvalues(m);
  const double between = 0.5 * (ev[0] + ev[1]);
  CHECK(max_abs_diff(step_inverse(step(m, between), between), m) < 1e-10);
}

TEST_CASE("steps commute") {
  Rng rng(26);
  for (int trial = 0; trial < 20; ++trial) {
    const SymTridiag t = random_tridiag(3 + trial % 4, rng);
    const double s0 = rng.uniform(-1.0, 1.0);
    const double s1 = rng.uniform(-1.0, 1.0);
    CHECK(max_abs_diff(step(step(t, s0), s1), step(step(t, s1), s0)) < 1e-9 * t.norm());
    CHECK(max_abs_diff(step_inverse(step(t, s1), s0), step(step_inverse(t, s0), s1)) < 1e-9);
  }
}

TEST_CASE("sign conjugation") {
  Rng rng(27);
  const SymTridiag t = random_tridiag(4, rng);
  CHECK(sign_conjugate(t, SignMatrix::identity(4)) == t);
  const SymTridiag f = sign_conjugate(t, SignMatrix::last_flip(4));
  CHECK(f.b() == -t.b());
  for (std::size_t i = 0; i + 1 < 3; ++i) CHECK(f.sub(i) == t.sub(i));
  for (unsigned long bits = 0; bits < 16; ++bits) {
    const SignMatrix e = SignMatrix::from_bits(4, bits);
    CHECK(max_abs_diff(step(sign_conjugate(t, e), 0.4), sign_conjugate(step(t, 0.4), e)) < 1e-12);
  }
}

TEST_CASE("dropping signs") {
  const SymTridiag j({1, 2, 3}, {1, 2});
  CHECK(drop_signs(j) == j);
  const SymTridiag m({0, 0, 0}, {-1, 2});
  CHECK(drop_signs(m) == SymTridiag({0, 0, 0}, {1, 2}));
  CHECK(drop_signs(drop_signs(m)) == drop_signs(m));
}
