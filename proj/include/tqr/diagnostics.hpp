#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "tqr/geometry.hpp"
#include "tqr/strategy.hpp"
#include "tqr/tridiag.hpp"

namespace tqr {

/// Ratios are only formed while |b1_k| exceeds this.
inline constexpr double kUnderflowFloor = 1e-150;

/// A step that shrinks |b1| by more than this factor is limited by the
/// rounding error in the shifted pivot, not by the convergence rate. Such
/// pairs are left out of rate estimates and exception counts.
inline constexpr double kRoundoffRatio = 1024 * std::numeric_limits<double>::epsilon();

struct TraceRecord {
  std::size_t k = 0;
  double b1 = 0.0;  ///< b(T_k), signed
  double b2 = 0.0;  ///< b_2(T_k), signed; 0 when n == 2
  double corner = 0.0;
  double subcorner = 0.0;
  double shift = 0.0;  ///< shift used to leave T_k
  std::optional<double> height;
  /// H(T_{k+1}) - H(T_k), accumulated rotation by rotation.
  std::optional<double> height_gain;
  std::optional<double> ratio2;  ///< |b1_{k+1}| / b1_k^2
  std::optional<double> ratio3;  ///< |b1_{k+1}| / |b1_k|^3
  double ss_dist = 0.0;
};

struct IterationTrace {
  std::string strategy;
  std::vector<TraceRecord> steps;
  std::optional<std::size_t> deflated_at;
  /// Eigenvalue index nearest the corner at deflation, when a spectrum is known.
  std::optional<std::size_t> component;
  std::optional<std::size_t> double_deflated_at;
  SymTridiag last;
};

struct HeightSpec {
  std::vector<double> weights;  ///< strictly decreasing
  double delta_h = 0.0;
  std::size_t component = 0;

  /// Weights n, n-1, ..., 1.
  static HeightSpec standard(std::size_t n, std::size_t component, double delta_h);
};

/// trace(W eta_i(T)) with eta_i(x) = log((x - lambda_i)^2 + delta_h), built
/// from the oracle eigendecomposition of T.
double height(const SymTridiag& t, const HeightSpec& spec, const SpectrumInfo& info);

/// H(F_s(T)) - H(T) without cancellation: the Givens chain of the step is
/// applied to eta_i(T) and only the diagonal changes are accumulated.
double height_gain(const SymTridiag& t, double shift, const HeightSpec& spec, const SpectrumInfo& info);

struct IterateOptions {
  std::size_t max_steps = 100;
  /// Defaults to 1e-14 * ||T0||.
  std::optional<double> deflate_tol;
  std::optional<HeightSpec> height;
  /// Needed for heights and for naming the deflated component.
  const SpectrumInfo* info = nullptr;
  /// Keep stepping after b1 deflates until |b2| <= double_tol.
  bool follow_double_deflation = false;
  double double_tol = 1e-14;
};

/// Applies F_sigma until |b1| <= deflate_tol (or b2 as well when following
/// double deflation) or max_steps steps have been taken. Throws StepFailure
/// carrying the index of the step whose factorization broke down.
IterationTrace iterate(const SymTridiag& t0, const ShiftStrategy& strategy, const IterateOptions& options = {});

struct RateEstimate {
  /// (k, log|b1_{k+1}| / log|b1_k|) for pairs with both in (1e-140, 0.1)
  /// that are not at the roundoff floor.
  std::vector<std::pair<std::size_t, double>> exponents;
  /// Least-squares slope of log|b1_{k+1}| against log|b1_k| over the last
  /// `window` usable pairs.
  double slope = 0.0;
};

/// Throws InsufficientData with fewer than two usable pairs.
RateEstimate rate_exponents(const IterationTrace& trace, std::size_t window = 4);
RateEstimate rate_exponents(const std::vector<double>& b1, std::size_t window = 4);

/// max_k (|b1_k|^3 - |b1_0^2 b2_0| / sqrt(2)^{k-1}) over k >= 1; the bound
/// holds when this is <= 0. Throws WrongStrategy unless the trace is Wilkinson.
double parlett_check(const IterationTrace& trace, const SymTridiag& t0);

/// Number of k with |b1_{k+1}| > c |b1_k|^3 (pairs with |b1_k| above the
/// underflow floor and not at the roundoff floor).
std::size_t exception_count(const IterationTrace& trace, double c);
std::size_t exception_count(const std::vector<double>& b1, double c);

struct HeightCalibration {
  double delta_h = 0.0;
  double boundary_max = 0.0;
  double base_min = 0.0;
  /// (delta_h, boundary_max, base_min) for every candidate tried.
  std::vector<std::tuple<double, double, double>> sweep;
};

/// Tries delta_h = 10^-e * gap^2 for e = 2, 4, ..., 300 and keeps the largest one for
/// which the sampled maximum of H on |b| = eps_ap stays below the sampled
/// minimum on the deflation set. Throws CalibrationFailed if none does.
HeightCalibration calibrate_height(const SpectrumInfo& info, std::size_t component, double eps_ap,
                                   std::size_t samples, std::uint64_t seed);

/// CSV header and rows: k,b1,b2,corner,subcorner,shift,height,ratio2,ratio3,ss_dist.
/// With `trajectory` set, a leading trajectory column is added.
void write_trace_header(std::ostream& out, bool with_trajectory);
void write_trace_rows(std::ostream& out, const IterationTrace& trace, std::optional<std::size_t> trajectory);

/// %.17g, or an empty string for an absent value.
std::string format_real(double x);
std::string format_real(const std::optional<double>& x);

}  // namespace tqr
