#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "tqr/dense.hpp"
#include "tqr/random.hpp"
#include "tqr/step.hpp"
#include "tqr/strategy.hpp"

using namespace tqr;

TEST_CASE("Rayleigh shift") {
  CHECK(rayleigh(SymTridiag::diagonal({1, 2, 4})) == 4.0);
  const SymTridiag t({0.1, 0.2, 0.7}, {0.3, -0.4});
  CHECK(rayleigh(t) == 0.7);
  CHECK(rayleigh(sign_conjugate(t, SignMatrix::last_flip(3))) == rayleigh(t));
}

TEST_CASE("Wilkinson shift") {
  CHECK(wilkinson(SymTridiag::diagonal({1, 2, 4})) == 4.0);
  CHECK(wilkinson(SymTridiag({0, 0}, {1})) == -1.0);
  CHECK(wilkinson(SymTridiag({1, 3}, {1})) == doctest::Approx(2.0 + std::numbers::sqrt2));
  const auto ev = oracle_eigenvalues(SymTridiag({1, 3}, {1}));
  CHECK(std::abs(wilkinson(SymTridiag({1, 3}, {1})) - ev[1]) < 1e-14);
  CHECK(wilkinson(SymTridiag({5, 0, 0}, {0.3, 2})) == -2.0);
}

TEST_CASE("mixed shift switches at epsilon") {
  const double eps = 0.1;
  const SymTridiag zero({1, 3}, {0});
  CHECK(mixed(zero, eps) == rayleigh(zero));
  const SymTridiag two({1, 3}, {2 * eps});
  CHECK(mixed(two, eps) == wilkinson(two));
  const SymTridiag at({1, 3}, {eps});
  CHECK(mixed(at, eps) == wilkinson(at));
}

TEST_CASE("strategy objects") {
  CHECK(ShiftStrategy::rayleigh().c_sigma() == doctest::Approx(std::numbers::sqrt2));
  CHECK(ShiftStrategy::wilkinson().c_sigma() == doctest::Approx(2 * std::numbers::sqrt2));
  CHECK(ShiftStrategy::parse("mixed:0.5").kind() == StrategyKind::mixed);
  CHECK(ShiftStrategy::parse("mixed:0.5").epsilon() == 0.5);
  CHECK_THROWS_AS(ShiftStrategy::parse("newton"), std::invalid_argument);
  CHECK_THROWS_AS(ShiftStrategy::parse("mixed:x"), std::invalid_argument);
  const auto c = ShiftStrategy::custom("zero", [](const SymTridiag&) { return 0.0; }, 1.0);
  CHECK(c(SymTridiag::diagonal({1, 2})) == 0.0);
}

TEST_CASE("singular support distance") {
  const auto w = ShiftStrategy::wilkinson();
  CHECK(w.singular_support_distance(SymTridiag({0, 2, 2}, {1, 1})) == 0.0);
  CHECK(w.singular_support_distance(SymTridiag::diagonal({1, 2, 4})) == 2.0);
  CHECK(singular_support_distance(SymTridiag::diagonal({1, 2, 4}), ShiftStrategy::rayleigh()) ==
        std::numeric_limits<double>::infinity());
}

TEST_CASE("strategy axioms on random matrices") {
  Rng rng(31);
  const ShiftStrategy strategies[] = {ShiftStrategy::rayleigh(), ShiftStrategy::wilkinson(),
                                      ShiftStrategy::mixed(0.2)};
  for (int trial = 0; trial < 200; ++trial) {
    const SymTridiag t = random_tridiag(2 + trial % 5, rng);
    const auto ev = oracle_eigenvalues(t);
    for (const auto& s : strategies) {
      const AxiomReport r = axiom_check(t, s, ev);
      CHECK(r.axiom1_residual <= 1e-13);
      CHECK(r.axiom2_margin <= 1e-12);
    }
  }
}

TEST_CASE("shift on the deflation set is the corner eigenvalue") {
  // Leading block spectrum {1, 4}, corner 2.
  const SymTridiag t({2.5, 2.5, 2.0}, {1.5, 0.0});
  for (const auto& s : {ShiftStrategy::rayleigh(), ShiftStrategy::wilkinson(), ShiftStrategy::mixed(0.1)}) {
    CHECK(std::abs(s(t) - 2.0) < 1e-12);
  }
}
