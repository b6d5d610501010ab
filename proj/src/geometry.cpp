#include "tqr/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "tqr/dense.hpp"
#include "tqr/errors.hpp"
#include "tqr/lanczos.hpp"
#include "tqr/step.hpp"

namespace tqr {

std::string to_string(ApClass c) {
  switch (c) {
    case ApClass::ap_free: return "ap_free";
    case ApClass::weak_ap: return "weak_ap";
    case ApClass::strong_ap: return "strong_ap";
  }
  return "unknown";
}

SpectrumInfo classify_spectrum(std::span<const double> values, double tol) {
  SpectrumInfo info;
  info.lambda.assign(values.begin(), values.end());
  const std::size_t n = info.lambda.size();
  if (n < 2) throw std::invalid_argument("spectrum needs at least two eigenvalues");
  std::sort(info.lambda.begin(), info.lambda.end());
  const auto& l = info.lambda;

  info.gap = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < n; ++k) info.gap = std::min(info.gap, l[k + 1] - l[k]);
  if (info.gap <= tol) {
    throw DuplicateEigenvalue("spectrum has a repeated eigenvalue (gap " + std::to_string(info.gap) + ")");
  }

  double norm2 = 0.0;
  for (double x : l) norm2 += x * x;
  info.ap_tol = 1e-12 * std::sqrt(norm2);

  bool any = false;
  bool consecutive = false;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        if (std::abs(l[i] + l[k] - 2.0 * l[j]) <= info.ap_tol) {
          any = true;
          if (j == i + 1 && k == j + 1) consecutive = true;
        }
  info.ap_class = consecutive ? ApClass::strong_ap : any ? ApClass::weak_ap : ApClass::ap_free;

  info.nearest.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t best = i == 0 ? 1 : 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      if (std::abs(l[j] - l[i]) < std::abs(l[best] - l[i])) best = j;
    }
    info.nearest[i] = best;
  }
  return info;
}

std::optional<std::size_t> deflation_component(const SymTridiag& t, const SpectrumInfo& info,
                                               double eps) {
  if (t.n() != info.n()) throw std::invalid_argument("deflation_component: size mismatch");
  if (std::abs(t.b()) > eps) return std::nullopt;
  const double window = std::numbers::sqrt2 * eps;
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < info.n(); ++i) {
    const double d = std::abs(t.corner() - info.lambda[i]);
    if (d <= window && (!best || d < std::abs(t.corner() - info.lambda[*best]))) best = i;
  }
  return best;
}

namespace {

SymTridiag with_corner(const SymTridiag& lead, double corner) {
  std::vector<double> d(lead.diag().begin(), lead.diag().end());
  std::vector<double> s(lead.sub().begin(), lead.sub().end());
  d.push_back(corner);
  s.push_back(0.0);
  return SymTridiag(std::move(d), std::move(s));
}

void check_component(std::size_t i, const SpectrumInfo& info) {
  if (i >= info.n()) throw std::invalid_argument("component index out of range");
}

}  // namespace

SymTridiag project(const SymTridiag& t, std::size_t i, const SpectrumInfo& info) {
  if (t.n() != info.n()) throw std::invalid_argument("project: size mismatch");
  check_component(i, info);
  const double lam = info.lambda[i];
  const SymTridiag s = step(t, lam);
  if (t.n() == 2) return SymTridiag({s.diag(0), lam}, {0.0});
  // On the deflation set the signed step reduces to the plain step on the
  // leading block, which differs from the signed one by E_{n-1} exactly when
  // det(lead - lam I) < 0, i.e. when an odd number of eigenvalues lie below.
  SymTridiag lead = s.leading();
  if (i % 2 == 1) lead = sign_conjugate(lead, SignMatrix::last_flip(lead.n()));
  return with_corner(step_inverse(lead, lam), lam);
}

TubularPoint tubular_coords(const SymTridiag& t, std::size_t i, const SpectrumInfo& info) {
  return {project(t, i, info), t.b(), i};
}

std::pair<double, double> double_deflation_gap(const SymTridiag& t) {
  if (t.n() < 3) throw std::invalid_argument("double_deflation_gap needs n >= 3");
  return {std::abs(t.b()), std::abs(t.b2())};
}

namespace {

constexpr int kNewtonIterations = 50;
constexpr double kFdStep = 1e-7;
constexpr double kResidualTol = 1e-11;
constexpr double kAcceptTol = 1e-8;

std::vector<double> first_component_weights(const SymTridiag& t) {
  const auto eig = dense_eig_oracle(t);
  std::vector<double> w(t.n());
  for (std::size_t k = 0; k < t.n(); ++k) w[k] = std::abs(eig.vectors(0, k));
  return w;
}

double safe_log(double x) { return std::log(std::max(std::abs(x), 1e-300)); }

double inf_norm(const std::vector<double>& r) {
  double m = 0.0;
  for (double x : r) m = std::max(m, std::abs(x));
  return m;
}

// Solves a x = rhs in place by partially pivoted elimination; false if singular.
bool solve(std::vector<std::vector<double>> a, std::vector<double>& rhs) {
  const std::size_t m = rhs.size();
  for (std::size_t k = 0; k < m; ++k) {
    std::size_t p = k;
    for (std::size_t r = k + 1; r < m; ++r)
      if (std::abs(a[r][k]) > std::abs(a[p][k])) p = r;
    if (a[p][k] == 0.0 || !std::isfinite(a[p][k])) return false;
    std::swap(a[p], a[k]);
    std::swap(rhs[p], rhs[k]);
    for (std::size_t r = k + 1; r < m; ++r) {
      const double f = a[r][k] / a[k][k];
      for (std::size_t c = k; c < m; ++c) a[r][c] -= f * a[k][c];
      rhs[r] -= f * rhs[k];
    }
  }
  for (std::size_t k = m; k-- > 0;) {
    double acc = rhs[k];
    for (std::size_t c = k + 1; c < m; ++c) acc -= a[k][c] * rhs[c];
    rhs[k] = acc / a[k][k];
  }
  return true;
}

// Unknowns are the log Lanczos weights with one reference entry pinned to 0.
class FiberProblem {
 public:
  FiberProblem(const SymTridiag& base, double b, std::size_t i, const SpectrumInfo& info)
      : info_(info), i_(i), b_(b), n_(info.n()), ref_(i == 0 ? 1 : 0), signs_(sign_pattern(base, b)) {
    const auto wb = first_component_weights(base.leading());
    target_.resize(n_ - 2);
    for (std::size_t k = 1; k + 1 < n_; ++k) target_[k - 1] = safe_log(wb[k]) - safe_log(wb[0]);
  }

  std::size_t dim() const { return n_ - 1; }

  std::vector<double> initial_guess(const SymTridiag& base) const {
    const auto wb = first_component_weights(base.leading());
    std::vector<double> full(n_);
    for (std::size_t j = 0, k = 0; j < n_; ++j) {
      if (j == i_) {
        full[j] = safe_log(b_);
      } else {
        full[j] = safe_log(wb[k++]);
      }
    }
    return reduce(full);
  }

  /// Shift of the unknowns when b is scaled by `factor`: the weight of
  /// lambda_i moves linearly with b.
  std::vector<double> rescale(std::vector<double> v, double factor) const {
    std::vector<double> full = expand(v);
    full[i_] += std::log(factor);
    return reduce(full);
  }

  SymTridiag matrix(const std::vector<double>& v) const {
    std::vector<double> full = expand(v);
    const double top = *std::max_element(full.begin(), full.end());
    std::vector<double> w(n_);
    double norm = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      w[j] = std::exp(full[j] - top);
      norm += w[j] * w[j];
    }
    norm = std::sqrt(norm);
    for (double& x : w) {
      x /= norm;
      if (!(x > 0.0) || !std::isfinite(x)) throw Breakdown("fiber solve: a Lanczos weight underflowed");
    }
    return sign_conjugate(lanczos_from_spectrum(info_.lambda, w), signs_);
  }

  std::vector<double> residual(const SymTridiag& t) const {
    const SymTridiag p = project(t, i_, info_);
    const auto wp = first_component_weights(p.leading());
    std::vector<double> r(n_ - 1);
    for (std::size_t k = 1; k + 1 < n_; ++k) r[k - 1] = safe_log(wp[k]) - safe_log(wp[0]) - target_[k - 1];
    r.back() = safe_log(t.b()) - safe_log(b_);
    return r;
  }

  // Residual with domain failures mapped to +inf so the line search backs off.
  std::vector<double> try_residual(const std::vector<double>& v) const {
    try {
      auto r = residual(matrix(v));
      for (double x : r)
        if (!std::isfinite(x)) throw Breakdown("non-finite residual");
      return r;
    } catch (const Error&) {
      return std::vector<double>(n_ - 1, std::numeric_limits<double>::infinity());
    }
  }

 private:
  static SignMatrix sign_pattern(const SymTridiag& base, double b) {
    const std::size_t n = base.n();
    std::vector<int> e(n, 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const double s = k + 2 == n ? b : base.sub(k);
      e[k + 1] = s < 0.0 ? -e[k] : e[k];
    }
    return SignMatrix(std::move(e));
  }

  std::vector<double> expand(const std::vector<double>& v) const {
    std::vector<double> full(n_);
    for (std::size_t j = 0, k = 0; j < n_; ++j) full[j] = j == ref_ ? 0.0 : v[k++];
    return full;
  }
  std::vector<double> reduce(const std::vector<double>& full) const {
    std::vector<double> v;
    v.reserve(n_ - 1);
    for (std::size_t j = 0; j < n_; ++j)
      if (j != ref_) v.push_back(full[j] - full[ref_]);
    return v;
  }

  const SpectrumInfo& info_;
  std::size_t i_;
  double b_;
  std::size_t n_;
  std::size_t ref_;
  SignMatrix signs_;
  std::vector<double> target_;
};

// Damped Newton; returns the solution or nullopt.
std::optional<std::vector<double>> newton(const FiberProblem& prob, std::vector<double> v) {
  std::vector<double> r = prob.try_residual(v);
  double rn = inf_norm(r);
  for (int it = 0; it < kNewtonIterations && std::isfinite(rn); ++it) {
    if (rn <= kResidualTol) return v;
    const std::size_t m = prob.dim();
    std::vector<std::vector<double>> jac(m, std::vector<double>(m));
    bool jac_ok = true;
    for (std::size_t c = 0; c < m && jac_ok; ++c) {
      std::vector<double> vp = v;
      vp[c] += kFdStep;
      const auto rp = prob.try_residual(vp);
      for (std::size_t row = 0; row < m; ++row) {
        jac[row][c] = (rp[row] - r[row]) / kFdStep;
        if (!std::isfinite(jac[row][c])) jac_ok = false;
      }
    }
    std::vector<double> delta(m);
    for (std::size_t k = 0; k < m; ++k) delta[k] = -r[k];
    if (!jac_ok || !solve(jac, delta)) break;

    bool moved = false;
    for (double t = 1.0; t >= 1.0 / 1024.0; t *= 0.5) {
      std::vector<double> vt = v;
      for (std::size_t k = 0; k < m; ++k) vt[k] += t * delta[k];
      auto rt = prob.try_residual(vt);
      const double rtn = inf_norm(rt);
      if (rtn < rn) {
        v = std::move(vt);
        r = std::move(rt);
        rn = rtn;
        moved = true;
        break;
      }
    }
    if (!moved) break;  // stalled at the roundoff floor or diverging
  }
  if (rn <= kAcceptTol) return v;
  return std::nullopt;
}

}  // namespace

SymTridiag tubular_inverse(const SymTridiag& base, double b, std::size_t i, const SpectrumInfo& info) {
  const std::size_t n = info.n();
  if (base.n() != n) throw std::invalid_argument("tubular_inverse: size mismatch");
  check_component(i, info);
  const double lam = info.lambda[i];
  const double scale = 1.0 + base.norm();
  if (std::abs(base.b()) > 1e-12 * scale || std::abs(base.corner() - lam) > 1e-10 * scale) {
    throw std::invalid_argument("tubular_inverse: base is not in the deflation set of component " +
                                std::to_string(i));
  }
  if (b == 0.0) return base;

  if (n == 2) {
    // [[x, b], [b, y]] with the spectrum fixed and y the root nearer lambda_i.
    const double m = 0.5 * (info.lambda[0] + info.lambda[1]);
    const double r = 0.5 * (info.lambda[1] - info.lambda[0]);
    if (std::abs(b) >= r) throw NoConvergence("tubular_inverse: |b| exceeds the spectral radius of the fiber");
    const double h = std::sqrt((r - b) * (r + b));
    const double y = i == 0 ? m - h : m + h;
    return SymTridiag({2.0 * m - y, y}, {b});
  }

  for (std::size_t k = 0; k + 2 < n; ++k)
    if (base.sub(k) == 0.0) throw std::invalid_argument("tubular_inverse: base leading block must be unreduced");

  const FiberProblem direct(base, b, i, info);
  std::optional<std::vector<double>> sol = newton(direct, direct.initial_guess(base));
  SymTridiag t;
  if (sol) {
    t = direct.matrix(*sol);
  } else {
    // Continuation from a small fiber value up to b.
    constexpr int kStages = 12;
    double bk = std::ldexp(b, -kStages);
    FiberProblem first(base, bk, i, info);
    sol = newton(first, first.initial_guess(base));
    for (int stage = kStages - 1; sol && stage >= 0; --stage) {
      bk = std::ldexp(b, -stage);
      FiberProblem next(base, bk, i, info);
      sol = newton(next, next.rescale(*sol, 2.0));
    }
    if (!sol) throw NoConvergence("tubular_inverse: Newton failed for b = " + std::to_string(b));
    t = direct.matrix(*sol);
  }

  const SymTridiag p = project(t, i, info);
  if (max_abs_diff(p, base) > 1e-8 * scale || std::abs(t.b() - b) > 1e-8 * std::abs(b)) {
    throw NoConvergence("tubular_inverse: solution misses the requested coordinates");
  }
  return t;
}

SymTridiag random_base(const SpectrumInfo& info, std::size_t i, Rng& rng) {
  check_component(i, info);
  const std::size_t n = info.n();
  const double lam = info.lambda[i];
  if (n == 2) return SymTridiag({info.lambda[1 - i], lam}, {0.0});
  std::vector<double> rest;
  for (std::size_t j = 0; j < n; ++j)
    if (j != i) rest.push_back(info.lambda[j]);
  auto w = dirichlet_weights(n - 1, rng);
  const double uniform_part = 0.3 / static_cast<double>(n - 1);
  for (double& x : w) x = std::sqrt(0.7 * x * x + uniform_part);
  return with_corner(lanczos_from_spectrum(rest, w), lam);
}

double midpoint_distance(const SpectrumInfo& info) {
  const auto& l = info.lambda;
  const std::size_t n = l.size();
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) d = std::min(d, std::abs(0.5 * (l[j] + l[k]) - l[i]));
  return d <= info.ap_tol ? 0.0 : d;
}

NeighborhoodParams calibrate_neighborhoods(const SpectrumInfo& info, const ShiftStrategy& strategy,
                                           std::size_t samples, std::uint64_t seed) {
  if (samples < 100) throw std::invalid_argument("calibrate_neighborhoods needs at least 100 samples");
  const std::size_t n = info.n();
  const double gamma = info.gap;
  const double floor = 1e-8 * gamma;
  const std::size_t per = (samples + n - 1) / n;

  std::optional<double> eps_tub;
  std::size_t round = 0;
  for (double eps = gamma / (4.0 * std::numbers::sqrt2); eps >= floor; eps *= 0.5, ++round) {
    Rng rng(seed, round);
    bool tube_ok = true;
    bool inv_ok = true;
    NeighborhoodParams p;
    for (std::size_t i = 0; i < n && tube_ok && (inv_ok || !eps_tub); ++i) {
      for (std::size_t s = 0; s < per; ++s) {
        const SymTridiag base = random_base(info, i, rng);
        // The first two samples sit on the boundary, pulled in by the accuracy
        // of tubular_inverse so that |b(T)| <= eps still holds.
        const double edge = eps * (1.0 - 1e-6);
        const double b = s == 0 ? edge : s == 1 ? -edge : rng.uniform(-eps, eps);
        if (b == 0.0) continue;
        SymTridiag t;
        try {
          t = tubular_inverse(base, b, i, info);
        } catch (const Error&) {
          tube_ok = false;
          break;
        }
        if (deflation_component(t, info, eps) != i) {
          tube_ok = false;
          break;
        }
        ++p.samples;
        p.c_b = std::max(p.c_b, distance(t, project(t, i, info)) / std::abs(b));
        if (!inv_ok) continue;
        try {
          const SymTridiag next = step(t, strategy(t));
          const double nb = std::abs(next.b());
          p.max_contraction = std::max(p.max_contraction, nb / std::abs(b));
          p.c_q = std::max(p.c_q, nb / (b * b));
          if (nb > 0.5 * std::abs(b) || deflation_component(next, info, 0.5 * eps) != i) inv_ok = false;
        } catch (const Error&) {
          inv_ok = false;
        }
        if (!inv_ok && eps_tub) break;
      }
    }
    if (tube_ok && !eps_tub) eps_tub = eps;
    if (tube_ok && inv_ok) {
      p.eps_tub = *eps_tub;
      p.eps_inv = eps;
      const double d_ap = midpoint_distance(info);
      if (d_ap > 0.0) {
        p.eps_ap = std::min(eps, 0.5 * d_ap);
        p.eps_sigma = *p.eps_ap / (1.0 + strategy.c_sigma());
      }
      p.rounds = round + 1;
      return p;
    }
  }
  throw CalibrationFailed("no neighborhood above 1e-8 * gap passes the invariance test for strategy " +
                          strategy.name());
}

}  // namespace tqr
