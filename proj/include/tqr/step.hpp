#pragma once

#include "tqr/factor.hpp"
#include "tqr/tridiag.hpp"

namespace tqr {

struct StepResult {
  SymTridiag next;
  /// (R*)_{n,n} / (R*)_{n-1,n-1}; b(next) = ratio_last * b(T).
  double ratio_last = 0.0;
  /// Sign of det(T - sI), 0 when |(R*)_{n,n}| is below singular_tolerance().
  int det_sign = 0;
};

/// Signed step Q*^T T Q*, applied two-sidedly in band storage and truncated
/// back to tridiagonal. Throws AlmostSingular outside the domain.
StepResult phi_star(const SymTridiag& t, double shift);

/// Standard QR step Q^T T Q. Throws Singular when det(T - sI) = 0.
SymTridiag phi(const SymTridiag& t, double shift);

/// F_s(T) = phi_star(T, s).next.
SymTridiag step(const SymTridiag& t, double shift);

/// The T0 with step(T0, s) = T: factor T - sI = R Q and return Q R + sI.
/// Throws Singular when s is an eigenvalue.
SymTridiag step_inverse(const SymTridiag& t, double shift);

/// E T E.
SymTridiag sign_conjugate(const SymTridiag& t, const SignMatrix& e);

/// Replaces every subdiagonal entry by its absolute value.
SymTridiag drop_signs(const SymTridiag& t);

/// Q^T T Q for an orthogonal factor built from a Givens chain.
SymTridiag congruence(const SymTridiag& t, const OrthogonalFactor& q);

}  // namespace tqr
