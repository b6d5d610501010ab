#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tqr/diagnostics.hpp"
#include "tqr/geometry.hpp"
#include "tqr/step.hpp"

namespace tqr {

/// Malformed configuration text or flag value.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::vector<double> spectrum{1.0, 2.0, 4.0};
  std::string strategy = "wilkinson";
  std::uint64_t seed = 1;
  std::size_t trials = 200;
  std::size_t max_steps = 40;
  /// Absolute tolerance on |b1|; unset means 1e-14 * ||T0||.
  std::optional<double> deflate_tol;
  std::string out;

  // rate-scan
  std::string start = "random";  ///< "random" or "witness"
  bool follow_double = false;
  double double_tol = 1e-14;
  double exception_c = 10.0;
  std::size_t window = 4;

  // calibrate
  std::size_t samples = 200;

  // hexagon
  std::size_t grid = 12;

  // verify
  std::optional<double> tolerance;
  std::string inject_fault;
};

/// Sets one field from its key=value spelling; keys match the long CLI flag
/// names (e.g. "max-steps"). Throws ConfigError.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);

/// Reads flat key=value lines; '#' starts a comment. Throws ConfigError.
void load_config(ExperimentConfig& config, std::istream& in);
void load_config_file(ExperimentConfig& config, const std::string& path);

std::vector<double> parse_real_list(const std::string& text);

// ---------------------------------------------------------------- rate-scan

struct TrajectorySummary {
  std::size_t trajectory = 0;
  std::size_t steps = 0;
  std::optional<std::size_t> deflated_at;
  std::optional<std::size_t> component;
  /// Least-squares exponent over the last `window` pairs up to deflation.
  std::optional<double> tail_exponent;
  std::size_t exceptions = 0;
  double final_b1 = 0.0;
  double final_b2 = 0.0;
  /// |subcorner - lambda_{c(i)}| at the end of the run.
  std::optional<double> subcorner_error;
  /// Longest run of consecutive steps whose ratio2 values stay within a
  /// factor 4 of each other while ratio3 grows more than tenfold.
  std::size_t quadratic_episode = 0;
  std::string error;
};

struct RateScanResult {
  SpectrumInfo info;
  std::vector<IterationTrace> traces;  ///< empty entries for failed runs
  std::vector<TrajectorySummary> summaries;
};

/// b1 values up to and including the first deflated index. Beyond that point
/// each step shrinks b1 by a roundoff-sized factor and the ratios no longer
/// measure the convergence rate.
std::vector<double> deflation_segment(const IterationTrace& trace);

std::size_t quadratic_episode_length(const IterationTrace& trace);

RateScanResult rate_scan(const ExperimentConfig& config);
void write_rate_scan(const ExperimentConfig& config, const RateScanResult& result, std::ostream& trace_csv,
                     std::ostream& summary_csv, std::ostream& json);

/// Start point of the strong a.p. witness fiber for a consecutive triple
/// lambda_j < lambda_i < lambda_k (n = 3): base [[lambda_j + lambda_k -
/// lambda_i, d], [d, lambda_i]] + lambda_i with d^2 = (lambda_i -
/// lambda_j)(lambda_k - lambda_i), so the leading diagonal meets the corner.
SymTridiag witness_base(const SpectrumInfo& info);

/// Fiber point at height b over a base near witness_base, with the base
/// angle tuned so that the orbit under `strategy` deflates onto the witness
/// base point itself.
SymTridiag witness_start(const SpectrumInfo& info, const ShiftStrategy& strategy, double b);

// ------------------------------------------------------------------ hexagon

struct HexagonRow {
  std::string kind;  ///< vertex | edge | interior
  int edge = -1;     ///< position around the cycle, -1 for interior
  SymTridiag point;
  SymTridiag image;
  double ss_dist = 0.0;
  std::optional<std::size_t> component;
  double spectrum_error = 0.0;
};

struct HexagonResult {
  SpectrumInfo info;
  std::vector<HexagonRow> rows;
  /// Cycle of vertex diagonals; edge e joins vertex e and vertex e+1.
  std::vector<std::vector<double>> cycle;
  /// true for edges with b1 = 0 (deflation edges).
  std::vector<bool> deflation_edge;
  int bottom_edge = -1;
  double vertex_fixed_error = 0.0;
  double bottom_edge_fixed_error = 0.0;
  double edge_invariance_error = 0.0;
  double max_spectrum_error = 0.0;
  bool alternating = false;
};

HexagonResult hexagon(const ExperimentConfig& config);
void write_hexagon(const HexagonResult& result, std::ostream& csv, std::ostream& json);

/// drop_signs(F_omega(T)).
SymTridiag hexagon_map(const SymTridiag& t);

// ---------------------------------------------------------------- calibrate

struct CalibrationReport {
  SpectrumInfo info;
  NeighborhoodParams params;
  /// Per component, present when eps_ap exists.
  std::vector<HeightCalibration> heights;
};

CalibrationReport calibrate(const ExperimentConfig& config);
void write_calibration(const ExperimentConfig& config, const CalibrationReport& report, std::ostream& json);

// ------------------------------------------------------------------- verify

struct SuiteResult {
  std::string name;
  bool passed = false;
  double worst = 0.0;
  double tolerance = 0.0;
  std::size_t samples = 0;
};

struct VerifyReport {
  std::vector<SuiteResult> suites;
  bool passed() const;
};

using StepFn = std::function<SymTridiag(const SymTridiag&, double)>;

/// The library step, or a deliberately broken variant by name:
/// "negate-last-givens" builds the final rotation from |b(T)|.
StepFn step_function(const std::string& fault);

VerifyReport verify(const ExperimentConfig& config);
void write_verify(const VerifyReport& report, std::ostream& text, std::ostream* json);

}  // namespace tqr
