#include "tqr/step.hpp"

#include <cmath>
#include <stdexcept>

#include "band.hpp"
#include "tqr/errors.hpp"

namespace tqr {

using detail::BandWork;

SymTridiag congruence(const SymTridiag& t, const OrthogonalFactor& q) {
  if (q.n() != t.n()) throw std::invalid_argument("congruence: size mismatch");
  // Q^T T Q = D G_{m-1}^T ... G_0^T T G_0 ... G_{m-1} D.
  BandWork w(t);
  for (const auto& g : q.rotations()) {
    w.rotate_rows_t(g);
    w.rotate_cols(g);
  }
  w.conjugate_signs(q.signs());
  return w.to_tridiag();
}

StepResult phi_star(const SymTridiag& t, double shift) {
  const QRFactors f = qr_star(t, shift);
  const double last = f.r.main.back();
  int det_sign = 0;
  if (std::abs(last) > singular_tolerance(t)) det_sign = last > 0.0 ? 1 : -1;
  return {congruence(t, f.q), f.r.last_ratio(), det_sign};
}

SymTridiag phi(const SymTridiag& t, double shift) {
  return congruence(t, qr_plain(t, shift).q);
}

SymTridiag step(const SymTridiag& t, double shift) { return phi_star(t, shift).next; }

SymTridiag step_inverse(const SymTridiag& t, double shift) {
  const RQFactors f = rq_star(t, shift);
  // T0 = Q T Q^T with Q = G_0 ... G_{m-1} D.
  BandWork w(t);
  w.conjugate_signs(f.q.signs());
  const auto& rot = f.q.rotations();
  for (auto it = rot.rbegin(); it != rot.rend(); ++it) {
    w.rotate_rows(*it);
    w.rotate_cols_t(*it);
  }
  return w.to_tridiag();
}

SymTridiag sign_conjugate(const SymTridiag& t, const SignMatrix& e) {
  if (e.n() != t.n()) throw std::invalid_argument("sign_conjugate: size mismatch");
  SymTridiag out = t;
  for (std::size_t i = 0; i + 1 < t.n(); ++i)
    if (e[i] != e[i + 1]) out.set_sub(i, -t.sub(i));
  return out;
}

SymTridiag drop_signs(const SymTridiag& t) {
  SymTridiag out = t;
  for (std::size_t i = 0; i + 1 < t.n(); ++i) out.set_sub(i, std::abs(t.sub(i)));
  return out;
}

}  // namespace tqr
