#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tqr/random.hpp"
#include "tqr/strategy.hpp"
#include "tqr/tridiag.hpp"

namespace tqr {

enum class ApClass { ap_free, weak_ap, strong_ap };

std::string to_string(ApClass c);

struct SpectrumInfo {
  std::vector<double> lambda;  ///< strictly increasing
  double gap = 0.0;            ///< min_{i != j} |lambda_i - lambda_j|
  ApClass ap_class = ApClass::ap_free;
  /// nearest[i] = argmin_{j != i} |lambda_j - lambda_i|, lower index on ties.
  std::vector<std::size_t> nearest;
  /// Absolute tolerance used to declare a progression.
  double ap_tol = 0.0;

  std::size_t n() const noexcept { return lambda.size(); }
};

/// Sorts `lambda`, then classifies it. A triple counts as a progression when
/// |lambda_i + lambda_k - 2 lambda_j| <= 1e-12 * ||lambda||_2.
/// Throws DuplicateEigenvalue when two entries are within `tol`.
SpectrumInfo classify_spectrum(std::span<const double> lambda, double tol = 1e-12);

/// The i with |(T)_{n,n} - lambda_i| <= sqrt(2) eps, provided |b(T)| <= eps.
/// Requires eps < gap / (2 sqrt 2) for the answer to be unique.
std::optional<std::size_t> deflation_component(const SymTridiag& t, const SpectrumInfo& info,
                                               double eps);

/// Canonical projection onto the deflation set {b = 0, corner = lambda_i}.
///
/// Takes the deflating step at lambda_i, then undoes the restriction of that
/// step to the deflation set on the leading block. Throws AlmostSingular when
/// T - lambda_i I is not almost invertible.
SymTridiag project(const SymTridiag& t, std::size_t i, const SpectrumInfo& info);

struct TubularPoint {
  SymTridiag base;
  double fiber = 0.0;
  std::size_t component = 0;
};

TubularPoint tubular_coords(const SymTridiag& t, std::size_t i, const SpectrumInfo& info);

/// The T near `base` with project(T, i) = base and b(T) = b.
///
/// Solved by damped Newton over log Lanczos weights with a finite-difference
/// Jacobian; falls back to continuation in b. Requires the leading block of
/// `base` to be unreduced. Throws NoConvergence.
SymTridiag tubular_inverse(const SymTridiag& base, double b, std::size_t i, const SpectrumInfo& info);

/// (|b_1(T)|, |b_2(T)|); n >= 3.
std::pair<double, double> double_deflation_gap(const SymTridiag& t);

/// Random point of the deflation set for component i: a Jacobi leading block
/// with spectrum lambda minus lambda_i, kept off the boundary by blending the
/// Dirichlet weights with the uniform ones, and corner lambda_i.
SymTridiag random_base(const SpectrumInfo& info, std::size_t i, Rng& rng);

struct NeighborhoodParams {
  double eps_tub = 0.0;
  double eps_inv = 0.0;
  /// Absent when the spectrum has a progression through some lambda_i.
  std::optional<double> eps_ap;
  std::optional<double> eps_sigma;
  /// max ||T - project(T)|| / |b(T)| over the samples.
  double c_b = 0.0;
  /// max |b(F(T))| / |b(T)|^2 over the samples at eps_inv.
  double c_q = 0.0;
  /// max |b(F(T))| / |b(T)| over the samples at eps_inv.
  double max_contraction = 0.0;
  std::size_t samples = 0;
  std::size_t rounds = 0;
};

/// Halves eps from gap / (4 sqrt 2) until sampled tube points round-trip
/// through tubular_inverse (eps_tub) and every sampled step at least halves
/// |b| while staying in the same component (eps_inv). Throws
/// CalibrationFailed below 1e-8 * gap.
NeighborhoodParams calibrate_neighborhoods(const SpectrumInfo& info, const ShiftStrategy& strategy,
                                           std::size_t samples, std::uint64_t seed);

/// Smallest distance from some lambda_i to a midpoint (lambda_j + lambda_k)/2
/// with j < k; zero for spectra with a progression.
double midpoint_distance(const SpectrumInfo& info);

}  // namespace tqr
