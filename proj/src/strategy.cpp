#include "tqr/strategy.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "tqr/step.hpp"

namespace tqr {

double rayleigh(const SymTridiag& t) { return t.corner(); }

double wilkinson(const SymTridiag& t) {
  const double a = t.subcorner();
  const double c = t.corner();
  const double b = t.b();
  const double d = 0.5 * (a - c);
  const double h = std::hypot(d, b);
  const double minor_norm = std::sqrt(a * a + c * c + 2.0 * b * b);
  // The nearer eigenvalue sits on the side of c away from a; a draw picks the
  // lower one.
  const double sign = (2.0 * std::abs(d) <= 1e-14 * minor_norm || d > 0.0) ? 1.0 : -1.0;
  const double den = std::abs(d) + h;
  if (den == 0.0) return c;
  return c - sign * (b * b) / den;
}

double mixed(const SymTridiag& t, double epsilon) {
  return std::abs(t.b()) < epsilon ? rayleigh(t) : wilkinson(t);
}

ShiftStrategy::ShiftStrategy(StrategyKind kind, std::string name, double epsilon, double c_sigma, Fn fn)
    : kind_(kind), name_(std::move(name)), epsilon_(epsilon), c_sigma_(c_sigma), fn_(std::move(fn)) {}

ShiftStrategy ShiftStrategy::rayleigh() {
  return {StrategyKind::rayleigh, "rayleigh", 0.0, std::numbers::sqrt2, nullptr};
}

ShiftStrategy ShiftStrategy::wilkinson() {
  return {StrategyKind::wilkinson, "wilkinson", 0.0, 2.0 * std::numbers::sqrt2, nullptr};
}

ShiftStrategy ShiftStrategy::mixed(double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("mixed strategy needs epsilon > 0");
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, epsilon);
  return {StrategyKind::mixed, "mixed:" + std::string(buf, res.ptr), epsilon, 2.0 * std::numbers::sqrt2, nullptr};
}

ShiftStrategy ShiftStrategy::custom(std::string name, Fn fn, double c_sigma) {
  if (!fn) throw std::invalid_argument("custom strategy needs a function");
  return {StrategyKind::custom, std::move(name), 0.0, c_sigma, std::move(fn)};
}

ShiftStrategy ShiftStrategy::parse(std::string_view text) {
  if (text == "rayleigh") return rayleigh();
  if (text == "wilkinson") return wilkinson();
  constexpr std::string_view prefix = "mixed:";
  if (text.starts_with(prefix)) {
    const std::string_view num = text.substr(prefix.size());
    double eps = 0.0;
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), eps);
    if (ec != std::errc() || ptr != num.data() + num.size() || num.empty()) {
      throw std::invalid_argument("bad mixed strategy epsilon: '" + std::string(num) + "'");
    }
    return mixed(eps);
  }
  throw std::invalid_argument("unknown strategy '" + std::string(text) + "'");
}

double ShiftStrategy::operator()(const SymTridiag& t) const {
  switch (kind_) {
    case StrategyKind::rayleigh: return tqr::rayleigh(t);
    case StrategyKind::wilkinson: return tqr::wilkinson(t);
    case StrategyKind::mixed: return tqr::mixed(t, epsilon_);
    case StrategyKind::custom: return fn_(t);
  }
  return tqr::wilkinson(t);
}

double ShiftStrategy::singular_support_distance(const SymTridiag& t) const {
  if (kind_ == StrategyKind::wilkinson || kind_ == StrategyKind::mixed) {
    return std::abs(t.corner() - t.subcorner());
  }
  return std::numeric_limits<double>::infinity();
}

double singular_support_distance(const SymTridiag& t, const ShiftStrategy& strategy) {
  return strategy.singular_support_distance(t);
}

AxiomReport axiom_check(const SymTridiag& t, const ShiftStrategy& strategy,
                        std::span<const double> eigenvalues) {
  const double s = strategy(t);
  const double flipped = strategy(sign_conjugate(t, SignMatrix::last_flip(t.n())));
  double nearest = std::numeric_limits<double>::infinity();
  for (double l : eigenvalues) nearest = std::min(nearest, std::abs(s - l));
  return {std::abs(flipped - s), nearest - strategy.c_sigma() * std::abs(t.b())};
}

}  // namespace tqr
