#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>

#include "tqr/tridiag.hpp"

namespace tqr {

/// (T)_{n,n}.
double rayleigh(const SymTridiag& t);

/// Eigenvalue of the trailing 2x2 minor nearest (T)_{n,n}. When both are
/// equidistant (2|d| <= 1e-14 * ||minor||, d half the diagonal gap) the
/// smaller one is returned.
double wilkinson(const SymTridiag& t);

/// rayleigh(T) if |b(T)| < epsilon, else wilkinson(T).
double mixed(const SymTridiag& t, double epsilon);

enum class StrategyKind { rayleigh, wilkinson, mixed, custom };

/// A shift rule together with its proximity constant C: some eigenvalue lies
/// within C * |b(T)| of the shift.
class ShiftStrategy {
 public:
  using Fn = std::function<double(const SymTridiag&)>;

  static ShiftStrategy rayleigh();
  static ShiftStrategy wilkinson();
  static ShiftStrategy mixed(double epsilon);
  /// Arbitrary rule. Its singular support is reported as empty.
  static ShiftStrategy custom(std::string name, Fn fn, double c_sigma);
  /// "rayleigh", "wilkinson" or "mixed:<eps>". Throws std::invalid_argument.
  static ShiftStrategy parse(std::string_view text);

  StrategyKind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }
  double epsilon() const noexcept { return epsilon_; }
  double c_sigma() const noexcept { return c_sigma_; }

  double operator()(const SymTridiag& t) const;

  /// |(T)_{n,n} - (T)_{n-1,n-1}| for Wilkinson and mixed, +inf otherwise.
  double singular_support_distance(const SymTridiag& t) const;

 private:
  ShiftStrategy(StrategyKind kind, std::string name, double epsilon, double c_sigma, Fn fn);

  StrategyKind kind_;
  std::string name_;
  double epsilon_ = 0.0;
  double c_sigma_ = 0.0;
  Fn fn_;
};

double singular_support_distance(const SymTridiag& t, const ShiftStrategy& strategy);

struct AxiomReport {
  /// |sigma(E_n T E_n) - sigma(T)|.
  double axiom1_residual = 0.0;
  /// min_i |sigma(T) - lambda_i| - C * |b(T)|; nonpositive when the
  /// proximity axiom holds.
  double axiom2_margin = 0.0;
};

AxiomReport axiom_check(const SymTridiag& t, const ShiftStrategy& strategy,
                        std::span<const double> eigenvalues);

}  // namespace tqr
