#include "tqr/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <tuple>

#include "tqr/dense.hpp"
#include "tqr/errors.hpp"
#include "tqr/factor.hpp"
#include "tqr/step.hpp"

namespace tqr {

HeightSpec HeightSpec::standard(std::size_t n, std::size_t component, double delta_h) {
  HeightSpec h;
  h.weights.resize(n);
  for (std::size_t j = 0; j < n; ++j) h.weights[j] = static_cast<double>(n - j);
  h.delta_h = delta_h;
  h.component = component;
  return h;
}

namespace {

void check_height(const SymTridiag& t, const HeightSpec& spec, const SpectrumInfo& info) {
  if (spec.weights.size() != t.n() || info.n() != t.n()) throw std::invalid_argument("height: size mismatch");
  if (!(spec.delta_h > 0.0)) throw std::invalid_argument("height: delta_h must be positive");
  if (spec.component >= t.n()) throw std::invalid_argument("height: component out of range");
  for (std::size_t j = 0; j + 1 < spec.weights.size(); ++j)
    if (!(spec.weights[j] > spec.weights[j + 1])) throw std::invalid_argument("height: weights must decrease strictly");
}

SymmetricDense eta(const SymTridiag& t, const HeightSpec& spec, const SpectrumInfo& info) {
  // eta is applied to the exact spectrum; the oracle supplies only the
  // eigenvectors. Oracle eigenvalues would put a roundoff floor under
  // (x - lambda_i)^2 that swamps small delta_h.
  const double lam = info.lambda[spec.component];
  std::vector<double> v(info.n());
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double d = info.lambda[k] - lam;
    v[k] = std::log(d * d + spec.delta_h);
  }
  return matrix_function(t, v);
}

}  // namespace

double height(const SymTridiag& t, const HeightSpec& spec, const SpectrumInfo& info) {
  check_height(t, spec, info);
  const SymmetricDense e = eta(t, spec, info);
  double h = 0.0;
  for (std::size_t j = 0; j < t.n(); ++j) h += spec.weights[j] * e(j, j);
  return h;
}

double height_gain(const SymTridiag& t, double shift, const HeightSpec& spec, const SpectrumInfo& info) {
  check_height(t, spec, info);
  const QRFactors f = qr_star(t, shift);
  DenseMatrix a = eta(t, spec, info).matrix();
  const std::size_t n = t.n();
  double gain = 0.0;
  for (const auto& g : f.q.rotations()) {
    const std::size_t k = g.index;
    const double c = g.c;
    const double s = g.s;
    gain += (spec.weights[k] - spec.weights[k + 1]) *
            (s * s * (a(k + 1, k + 1) - a(k, k)) + 2.0 * c * s * a(k, k + 1));
    // a <- G^T a G
    for (std::size_t j = 0; j < n; ++j) {
      const double x = a(k, j);
      const double y = a(k + 1, j);
      a(k, j) = c * x + s * y;
      a(k + 1, j) = -s * x + c * y;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double x = a(i, k);
      const double y = a(i, k + 1);
      a(i, k) = c * x + s * y;
      a(i, k + 1) = -s * x + c * y;
    }
  }
  return gain;
}

IterationTrace iterate(const SymTridiag& t0, const ShiftStrategy& strategy, const IterateOptions& options) {
  if (options.height && !options.info) throw std::invalid_argument("iterate: heights need a spectrum");
  const double tol = options.deflate_tol.value_or(1e-14 * t0.norm());
  IterationTrace trace;
  trace.strategy = strategy.name();
  SymTridiag t = t0;
  for (std::size_t k = 0;; ++k) {
    TraceRecord r;
    r.k = k;
    r.b1 = t.b();
    r.b2 = t.b2();
    r.corner = t.corner();
    r.subcorner = t.subcorner();
    r.shift = strategy(t);
    r.ss_dist = strategy.singular_support_distance(t);
    if (options.height) r.height = height(t, *options.height, *options.info);

    bool stop = k >= options.max_steps;
    if (!trace.deflated_at && std::abs(r.b1) <= tol) {
      trace.deflated_at = k;
      if (options.info) {
        std::size_t best = 0;
        for (std::size_t j = 1; j < options.info->n(); ++j)
          if (std::abs(t.corner() - options.info->lambda[j]) < std::abs(t.corner() - options.info->lambda[best])) best = j;
        trace.component = best;
      }
      if (!options.follow_double_deflation || t.n() < 3) stop = true;
    }
    if (trace.deflated_at && options.follow_double_deflation && t.n() >= 3 &&
        std::abs(r.b2) <= options.double_tol) {
      trace.double_deflated_at = k;
      stop = true;
    }
    if (stop) {
      trace.steps.push_back(r);
      break;
    }

    StepResult next;
    try {
      next = phi_star(t, r.shift);
      if (options.height) r.height_gain = height_gain(t, r.shift, *options.height, *options.info);
    } catch (const Error& e) {
      throw StepFailure(k, e.what());
    }
    if (std::abs(r.b1) > kUnderflowFloor) {
      const double nb = std::abs(next.next.b());
      const double ab = std::abs(r.b1);
      r.ratio2 = nb / (ab * ab);
      r.ratio3 = nb / (ab * ab * ab);
    }
    trace.steps.push_back(r);
    t = std::move(next.next);
  }
  trace.last = std::move(t);
  return trace;
}

namespace {

std::vector<double> b1_series(const IterationTrace& trace) {
  std::vector<double> b;
  b.reserve(trace.steps.size());
  for (const auto& r : trace.steps) b.push_back(r.b1);
  return b;
}

bool usable(double b) {
  const double a = std::abs(b);
  return a > 1e-140 && a < 0.1;
}

}  // namespace

RateEstimate rate_exponents(const std::vector<double>& b1, std::size_t window) {
  if (window < 2) throw std::invalid_argument("rate_exponents: window must be at least 2");
  RateEstimate est;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t k = 0; k + 1 < b1.size(); ++k) {
    if (!usable(b1[k]) || !usable(b1[k + 1])) continue;
    if (std::abs(b1[k + 1]) <= kRoundoffRatio * std::abs(b1[k])) continue;
    const double x = std::log(std::abs(b1[k]));
    const double y = std::log(std::abs(b1[k + 1]));
    est.exponents.emplace_back(k, y / x);
    pts.emplace_back(x, y);
  }
  if (pts.size() < 2) {
    throw InsufficientData("rate_exponents: " + std::to_string(pts.size()) + " usable pairs, need 2");
  }
  const std::size_t m = std::min(window, pts.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t j = pts.size() - m; j < pts.size(); ++j) {
    sx += pts[j].first;
    sy += pts[j].second;
    sxx += pts[j].first * pts[j].first;
    sxy += pts[j].first * pts[j].second;
  }
  const double md = static_cast<double>(m);
  const double den = md * sxx - sx * sx;
  if (den == 0.0) throw InsufficientData("rate_exponents: degenerate window");
  est.slope = (md * sxy - sx * sy) / den;
  return est;
}

RateEstimate rate_exponents(const IterationTrace& trace, std::size_t window) {
  return rate_exponents(b1_series(trace), window);
}

double parlett_check(const IterationTrace& trace, const SymTridiag& t0) {
  if (trace.strategy != "wilkinson") {
    throw WrongStrategy("parlett_check applies to Wilkinson traces, got '" + trace.strategy + "'");
  }
  const double m = std::abs(t0.b() * t0.b() * t0.b2());
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < trace.steps.size(); ++k) {
    const double b = std::abs(trace.steps[k].b1);
    const double bound = m / std::pow(std::numbers::sqrt2, static_cast<double>(k) - 1.0);
    worst = std::max(worst, b * b * b - bound);
  }
  return worst;
}

std::size_t exception_count(const std::vector<double>& b1, double c) {
  std::size_t count = 0;
  for (std::size_t k = 0; k + 1 < b1.size(); ++k) {
    const double a = std::abs(b1[k]);
    if (a <= kUnderflowFloor || std::abs(b1[k + 1]) <= kRoundoffRatio * a) continue;
    if (std::abs(b1[k + 1]) > c * a * a * a) ++count;
  }
  return count;
}

std::size_t exception_count(const IterationTrace& trace, double c) {
  return exception_count(b1_series(trace), c);
}

HeightCalibration calibrate_height(const SpectrumInfo& info, std::size_t component, double eps_ap,
                                   std::size_t samples, std::uint64_t seed) {
  if (!(eps_ap > 0.0)) throw std::invalid_argument("calibrate_height: eps_ap must be positive");
  const double g2 = info.gap * info.gap;
  HeightCalibration out;
  bool found = false;
  for (int e = 2; e <= 300; e += 2) {
    const double delta = std::pow(10.0, -e) * g2;
    const HeightSpec spec = HeightSpec::standard(info.n(), component, delta);
    Rng rng(seed, 0);
    double boundary_max = -std::numeric_limits<double>::infinity();
    double base_min = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < samples; ++s) {
      const SymTridiag base = random_base(info, component, rng);
      base_min = std::min(base_min, height(base, spec, info));
      const double b = s % 2 == 0 ? eps_ap : -eps_ap;
      boundary_max = std::max(boundary_max, height(tubular_inverse(base, b, component, info), spec, info));
    }
    out.sweep.emplace_back(delta, boundary_max, base_min);
    if (boundary_max < base_min) {
      found = true;
      out.delta_h = delta;
      out.boundary_max = boundary_max;
      out.base_min = base_min;
      break;
    }
  }
  if (!found) throw CalibrationFailed("calibrate_height: no delta_h separates the boundary from the deflation set");
  return out;
}

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_real(const std::optional<double>& x) { return x ? format_real(*x) : std::string(); }

void write_trace_header(std::ostream& out, bool with_trajectory) {
  if (with_trajectory) out << "trajectory,";
  out << "k,b1,b2,corner,subcorner,shift,height,ratio2,ratio3,ss_dist\n";
}

void write_trace_rows(std::ostream& out, const IterationTrace& trace, std::optional<std::size_t> trajectory) {
  for (const auto& r : trace.steps) {
    if (trajectory) out << *trajectory << ',';
    out << r.k << ',' << format_real(r.b1) << ',' << format_real(r.b2) << ',' << format_real(r.corner) << ','
        << format_real(r.subcorner) << ',' << format_real(r.shift) << ',' << format_real(r.height) << ','
        << format_real(r.ratio2) << ',' << format_real(r.ratio3) << ',' << format_real(r.ss_dist) << '\n';
  }
}

}  // namespace tqr
