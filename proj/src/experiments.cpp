#include "tqr/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "tqr/dense.hpp"
#include "tqr/errors.hpp"
#include "tqr/factor.hpp"
#include "tqr/lanczos.hpp"

namespace tqr {

using json = nlohmann::json;

// ------------------------------------------------------------------- config

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
    throw ConfigError(key + ": expected a real number, got '" + text + "'");
  }
  return v;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + text + "'");
  }
  return v;
}

double parse_positive(const std::string& key, const std::string& text) {
  const double v = parse_real(key, text);
  if (!(v > 0.0)) throw ConfigError(key + ": must be positive");
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

}  // namespace

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_real("list", item));
  if (out.empty()) throw ConfigError("expected a comma-separated list of reals");
  return out;
}

void apply_setting(ExperimentConfig& c, const std::string& raw_key, const std::string& value) {
  const std::string key = trim(raw_key);
  if (key == "spectrum") {
    c.spectrum = parse_real_list(value);
  } else if (key == "strategy") {
    try {
      (void)ShiftStrategy::parse(trim(value));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    c.strategy = trim(value);
  } else if (key == "seed") {
    c.seed = parse_unsigned(key, value);
  } else if (key == "trials") {
    c.trials = parse_unsigned(key, value);
  } else if (key == "max-steps") {
    c.max_steps = parse_unsigned(key, value);
  } else if (key == "deflate-tol") {
    c.deflate_tol = parse_positive(key, value);
  } else if (key == "out") {
    c.out = trim(value);
  } else if (key == "start") {
    const std::string v = trim(value);
    if (v != "random" && v != "witness") throw ConfigError("start: expected random or witness");
    c.start = v;
  } else if (key == "follow-double") {
    c.follow_double = parse_bool(key, value);
  } else if (key == "double-tol") {
    c.double_tol = parse_positive(key, value);
  } else if (key == "exception-c") {
    c.exception_c = parse_positive(key, value);
  } else if (key == "window") {
    c.window = parse_unsigned(key, value);
    if (c.window < 2) throw ConfigError("window: must be at least 2");
  } else if (key == "samples") {
    c.samples = parse_unsigned(key, value);
  } else if (key == "grid") {
    c.grid = parse_unsigned(key, value);
    if (c.grid < 1) throw ConfigError("grid: must be at least 1");
  } else if (key == "tolerance") {
    c.tolerance = parse_positive(key, value);
  } else if (key == "inject-fault") {
    const std::string v = trim(value);
    if (v != "none" && v != "negate-last-givens") throw ConfigError("inject-fault: unknown fault '" + v + "'");
    c.inject_fault = v == "none" ? "" : v;
  } else {
    throw ConfigError("unknown setting '" + key + "'");
  }
}

void load_config(ExperimentConfig& config, std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
    apply_setting(config, line.substr(0, eq), line.substr(eq + 1));
  }
}

void load_config_file(ExperimentConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  load_config(config, in);
}

namespace {

json real_or_null(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

json spectrum_json(const SpectrumInfo& info) {
  return {{"lambda", info.lambda},
          {"gap", info.gap},
          {"ap_class", to_string(info.ap_class)},
          {"ap_tol", info.ap_tol},
          {"nearest", info.nearest}};
}

}  // namespace

// ---------------------------------------------------------------- rate-scan

std::vector<double> deflation_segment(const IterationTrace& trace) {
  const std::size_t end = trace.deflated_at ? *trace.deflated_at + 1 : trace.steps.size();
  std::vector<double> b;
  b.reserve(end);
  for (std::size_t k = 0; k < end && k < trace.steps.size(); ++k) b.push_back(trace.steps[k].b1);
  return b;
}

std::size_t quadratic_episode_length(const IterationTrace& trace) {
  // Records k whose step leads to k + 1 <= deflated_at.
  std::vector<std::pair<double, double>> r;
  const std::size_t end = trace.deflated_at ? *trace.deflated_at : trace.steps.size();
  for (std::size_t k = 0; k < end && k < trace.steps.size(); ++k) {
    const auto& s = trace.steps[k];
    if (!s.ratio2 || !s.ratio3 || *s.ratio2 <= 0.0) {
      r.clear();
      continue;
    }
    r.emplace_back(*s.ratio2, *s.ratio3);
  }
  std::size_t best = 0;
  for (std::size_t a = 0; a < r.size(); ++a) {
    double lo = r[a].first;
    double hi = r[a].first;
    for (std::size_t b = a + 1; b < r.size(); ++b) {
      lo = std::min(lo, r[b].first);
      hi = std::max(hi, r[b].first);
      if (hi > 4.0 * lo) break;
      if (r[b].second > 10.0 * r[a].second) best = std::max(best, b - a + 1);
    }
  }
  return best;
}

namespace {

// Consecutive triple lambda_0 < lambda_1 < lambda_2 of an n = 3 spectrum:
// weight giving the leading block diagonal entry lambda_0 + lambda_2 - lambda_1.
double support_angle(const SpectrumInfo& info) {
  const auto& l = info.lambda;
  return std::asin(std::sqrt((l[2] - l[1]) / (l[2] - l[0])));
}

SymTridiag support_base(const SpectrumInfo& info, double angle) {
  const auto& l = info.lambda;
  const std::vector<double> pair{l[0], l[2]};
  const std::vector<double> w{std::cos(angle), std::sin(angle)};
  const SymTridiag lead = lanczos_from_spectrum(pair, w);
  return SymTridiag({lead.diag(0), lead.diag(1), l[1]}, {lead.sub(0), 0.0});
}

}  // namespace

SymTridiag witness_base(const SpectrumInfo& info) {
  if (info.n() != 3) throw std::invalid_argument("witness_base needs a 3x3 spectrum");
  const auto& l = info.lambda;
  const double d = std::sqrt((l[1] - l[0]) * (l[2] - l[1]));
  return SymTridiag({l[0] + l[2] - l[1], l[1], l[1]}, {d, 0.0});
}

namespace {

// Leading diagonal entry reached once the orbit from fiber point (base(angle), b) deflates.
double limit_offset(const SpectrumInfo& info, const ShiftStrategy& strategy, double angle, double b) {
  IterateOptions opt;
  opt.max_steps = 40;
  opt.deflate_tol = 1e-80;
  const SymTridiag t0 = tubular_inverse(support_base(info, angle), b, 1, info);
  const IterationTrace tr = iterate(t0, strategy, opt);
  return tr.last.diag(0) - (info.lambda[0] + info.lambda[2] - info.lambda[1]);
}

}  // namespace

SymTridiag witness_start(const SpectrumInfo& info, const ShiftStrategy& strategy, double b) {
  if (info.n() != 3) throw std::invalid_argument("witness_start needs a 3x3 spectrum");
  const double a0 = support_angle(info);
  // Shoot over the base angle so that the orbit's limit lands on the support
  // point itself; starting exactly above it drifts off after one step.
  // The limit map jumps across the support itself, so every sign change is
  // refined and the one with the smallest residual wins.
  constexpr int kScan = 80;
  constexpr double kReach = 0.4;
  auto f = [&](double d) { return limit_offset(info, strategy, a0 + d, b); };
  std::vector<std::pair<double, double>> brackets;
  std::optional<std::pair<double, double>> prev;
  for (int k = 0; k <= kScan; ++k) {
    const double d = kReach * (2.0 * k / kScan - 1.0);
    double v = 0.0;
    try {
      v = f(d);
    } catch (const Error&) {
      prev.reset();
      continue;
    }
    if (prev && std::signbit(v) != std::signbit(prev->second)) brackets.emplace_back(prev->first, d);
    prev = {d, v};
  }
  double best_d = 0.0;
  double best_f = std::numeric_limits<double>::infinity();
  for (auto [lo, hi] : brackets) {
    try {
      const bool lo_neg = std::signbit(f(lo));
      for (int it = 0; it < 60 && hi - lo > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        (std::signbit(f(mid)) == lo_neg ? lo : hi) = mid;
      }
      const double d = 0.5 * (lo + hi);
      const double r = std::abs(f(d));
      if (r < best_f) {
        best_f = r;
        best_d = d;
      }
    } catch (const Error&) {
    }
  }
  return tubular_inverse(support_base(info, a0 + best_d), b, 1, info);
}

RateScanResult rate_scan(const ExperimentConfig& config) {
  RateScanResult res;
  res.info = classify_spectrum(config.spectrum);
  const ShiftStrategy strategy = ShiftStrategy::parse(config.strategy);
  if (config.start == "witness" && res.info.n() != 3) throw ConfigError("start=witness needs a 3x3 spectrum");

  IterateOptions opt;
  opt.max_steps = config.max_steps;
  opt.deflate_tol = config.deflate_tol;
  opt.info = &res.info;
  opt.follow_double_deflation = config.follow_double;
  opt.double_tol = config.double_tol;

  res.traces.resize(config.trials);
  res.summaries.resize(config.trials);
  for (std::size_t t = 0; t < config.trials; ++t) {
    TrajectorySummary& s = res.summaries[t];
    s.trajectory = t;
    Rng rng(config.seed, t);
    try {
      SymTridiag t0;
      if (config.start == "witness") {
        const double mag = res.info.gap * rng.uniform(0.05, 0.15);
        t0 = witness_start(res.info, strategy, rng.uniform() < 0.5 ? -mag : mag);
      } else {
        t0 = random_jacobi(res.info.lambda, rng);
      }
      IterationTrace tr = iterate(t0, strategy, opt);
      s.steps = tr.steps.size();
      s.deflated_at = tr.deflated_at;
      s.component = tr.component;
      const auto seg = deflation_segment(tr);
      try {
        s.tail_exponent = rate_exponents(seg, config.window).slope;
      } catch (const InsufficientData&) {
      }
      s.exceptions = exception_count(seg, config.exception_c);
      s.final_b1 = tr.last.b();
      s.final_b2 = tr.last.b2();
      if (tr.component && res.info.n() >= 3) {
        s.subcorner_error = std::abs(tr.last.subcorner() - res.info.lambda[res.info.nearest[*tr.component]]);
      }
      s.quadratic_episode = quadratic_episode_length(tr);
      res.traces[t] = std::move(tr);
    } catch (const Error& e) {
      s.error = e.what();
    }
  }
  return res;
}

void write_rate_scan(const ExperimentConfig& config, const RateScanResult& result, std::ostream& trace_csv,
                     std::ostream& summary_csv, std::ostream& js) {
  write_trace_header(trace_csv, true);
  for (std::size_t t = 0; t < result.traces.size(); ++t) {
    if (result.summaries[t].error.empty()) write_trace_rows(trace_csv, result.traces[t], t);
  }

  summary_csv << "trajectory,steps,deflated_at,component,tail_exponent,exceptions,final_b1,final_b2,"
                 "subcorner_error,quadratic_episode,error\n";
  std::size_t deflated = 0;
  std::size_t failed = 0;
  std::size_t max_exceptions = 0;
  for (const auto& s : result.summaries) {
    summary_csv << s.trajectory << ',' << s.steps << ',' << (s.deflated_at ? std::to_string(*s.deflated_at) : "")
                << ',' << (s.component ? std::to_string(*s.component) : "") << ',' << format_real(s.tail_exponent)
                << ',' << s.exceptions << ',' << format_real(s.final_b1) << ',' << format_real(s.final_b2) << ','
                << format_real(s.subcorner_error) << ',' << s.quadratic_episode << ',';
    std::string err = s.error;
    std::replace(err.begin(), err.end(), ',', ';');
    summary_csv << err << '\n';
    if (!s.error.empty()) ++failed;
    if (s.deflated_at) ++deflated;
    max_exceptions = std::max(max_exceptions, s.exceptions);
  }

  json meta = {{"command", "rate-scan"},
               {"spectrum", spectrum_json(result.info)},
               {"strategy", config.strategy},
               {"seed", config.seed},
               {"trials", config.trials},
               {"max_steps", config.max_steps},
               {"deflate_tol", real_or_null(config.deflate_tol)},
               {"start", config.start},
               {"follow_double", config.follow_double},
               {"double_tol", config.double_tol},
               {"exception_c", config.exception_c},
               {"window", config.window},
               {"underflow_floor", kUnderflowFloor},
               {"deflated", deflated},
               {"failed", failed},
               {"max_exceptions", max_exceptions}};
  js << meta.dump(2) << '\n';
}

// ------------------------------------------------------------------ hexagon

SymTridiag hexagon_map(const SymTridiag& t) { return drop_signs(step(t, wilkinson(t))); }

namespace {

double spectrum_error(const SymTridiag& t, const SpectrumInfo& info) {
  const auto ev = oracle_eigenvalues(t);
  double e = 0.0;
  for (std::size_t k = 0; k < ev.size(); ++k) e = std::max(e, std::abs(ev[k] - info.lambda[k]));
  return e;
}

SymTridiag two_by_two(double lo, double hi, double angle) {
  const std::vector<double> pair{lo, hi};
  const std::vector<double> w{std::cos(angle), std::sin(angle)};
  return lanczos_from_spectrum(pair, w);
}

}  // namespace

HexagonResult hexagon(const ExperimentConfig& config) {
  HexagonResult res;
  res.info = classify_spectrum(config.spectrum);
  if (res.info.n() != 3) throw ConfigError("hexagon needs a 3x3 spectrum");
  const auto& l = res.info.lambda;
  const double eps = res.info.gap / (4.0 * std::numbers::sqrt2);

  // Walk the boundary starting with the b1 = 0 edge whose corner is the middle
  // eigenvalue; edges alternate between swapping the leading pair (b1 = 0)
  // and swapping the trailing pair (b2 = 0).
  std::vector<double> v{l[0], l[2], l[1]};
  for (int e = 0; e < 6; ++e) {
    res.cycle.push_back(v);
    if (e % 2 == 0) {
      std::swap(v[0], v[1]);
    } else {
      std::swap(v[1], v[2]);
    }
  }
  res.bottom_edge = 0;
  res.alternating = true;
  for (int e = 0; e < 6; ++e) {
    const auto& a = res.cycle[e];
    const auto& b = res.cycle[(e + 1) % 6];
    const bool b1_edge = a[2] == b[2] && a[0] == b[1] && a[1] == b[0];
    const bool b2_edge = a[0] == b[0] && a[1] == b[2] && a[2] == b[1];
    if (b1_edge == b2_edge) res.alternating = false;
    res.deflation_edge.push_back(b1_edge);
    if (e > 0 && res.deflation_edge[e] == res.deflation_edge[e - 1]) res.alternating = false;
  }
  if (res.deflation_edge.front() == res.deflation_edge.back()) res.alternating = false;

  auto add = [&](std::string kind, int edge, const SymTridiag& p) -> HexagonRow& {
    HexagonRow row{std::move(kind), edge, p, hexagon_map(p), singular_support_distance(p, ShiftStrategy::wilkinson()),
                   deflation_component(p, res.info, eps), 0.0};
    row.spectrum_error = std::max(spectrum_error(p, res.info), spectrum_error(row.image, res.info));
    res.max_spectrum_error = std::max(res.max_spectrum_error, row.spectrum_error);
    res.rows.push_back(std::move(row));
    return res.rows.back();
  };

  for (int e = 0; e < 6; ++e) {
    const HexagonRow& row = add("vertex", e, SymTridiag::diagonal(res.cycle[e]));
    res.vertex_fixed_error = std::max(res.vertex_fixed_error, max_abs_diff(row.image, row.point));
  }

  const std::size_t m = config.grid;
  for (int e = 0; e < 6; ++e) {
    const auto& a = res.cycle[e];
    for (std::size_t k = 1; k <= m; ++k) {
      const double angle = 0.5 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m + 1);
      SymTridiag p;
      if (res.deflation_edge[e]) {
        const SymTridiag j2 = two_by_two(std::min(a[0], a[1]), std::max(a[0], a[1]), angle);
        p = SymTridiag({j2.diag(0), j2.diag(1), a[2]}, {j2.sub(0), 0.0});
      } else {
        const SymTridiag j2 = two_by_two(std::min(a[1], a[2]), std::max(a[1], a[2]), angle);
        p = SymTridiag({a[0], j2.diag(0), j2.diag(1)}, {0.0, j2.sub(0)});
      }
      const HexagonRow& row = add("edge", e, p);
      const double inv = res.deflation_edge[e]
                             ? std::max(std::abs(row.image.b()), std::abs(row.image.corner() - a[2]))
                             : std::max(std::abs(row.image.sub(0)), std::abs(row.image.diag(0) - a[0]));
      res.edge_invariance_error = std::max(res.edge_invariance_error, inv);
      if (e == res.bottom_edge) {
        res.bottom_edge_fixed_error = std::max(res.bottom_edge_fixed_error, max_abs_diff(row.image, row.point));
      }
    }
  }

  // Interior: positive Lanczos weights on a barycentric grid.
  const std::size_t g = m + 2;
  for (std::size_t x = 1; x < g; ++x)
    for (std::size_t y = 1; x + y < g; ++y) {
      const std::size_t z = g - x - y;
      const double total = static_cast<double>(g);
      const std::vector<double> w{std::sqrt(x / total), std::sqrt(y / total), std::sqrt(z / total)};
      add("interior", -1, lanczos_from_spectrum(l, w));
    }
  return res;
}

void write_hexagon(const HexagonResult& result, std::ostream& csv, std::ostream& js) {
  csv << "kind,edge,t11,t22,b1,b2,image_t11,image_t22,image_b1,image_b2,ss_dist,component,spectrum_error\n";
  for (const auto& r : result.rows) {
    csv << r.kind << ',' << (r.edge >= 0 ? std::to_string(r.edge) : "") << ',' << format_real(r.point.diag(0))
        << ',' << format_real(r.point.diag(1)) << ',' << format_real(r.point.b()) << ','
        << format_real(r.point.b2()) << ',' << format_real(r.image.diag(0)) << ','
        << format_real(r.image.diag(1)) << ',' << format_real(r.image.b()) << ','
        << format_real(r.image.b2()) << ',' << format_real(r.ss_dist) << ','
        << (r.component ? std::to_string(*r.component) : "") << ',' << format_real(r.spectrum_error) << '\n';
  }
  json edges = json::array();
  for (std::size_t e = 0; e < result.cycle.size(); ++e) {
    edges.push_back({{"from", result.cycle[e]},
                     {"to", result.cycle[(e + 1) % result.cycle.size()]},
                     {"deflation", static_cast<bool>(result.deflation_edge[e])}});
  }
  json meta = {{"command", "hexagon"},
               {"spectrum", spectrum_json(result.info)},
               {"embedding", "point (t11, t22) with b1 = T(3,2), b2 = T(2,1)"},
               {"edges", edges},
               {"bottom_edge", result.bottom_edge},
               {"alternating", result.alternating},
               {"vertex_fixed_error", result.vertex_fixed_error},
               {"bottom_edge_fixed_error", result.bottom_edge_fixed_error},
               {"edge_invariance_error", result.edge_invariance_error},
               {"max_spectrum_error", result.max_spectrum_error},
               {"points", result.rows.size()}};
  js << meta.dump(2) << '\n';
}

// ---------------------------------------------------------------- calibrate

CalibrationReport calibrate(const ExperimentConfig& config) {
  CalibrationReport rep;
  rep.info = classify_spectrum(config.spectrum);
  const ShiftStrategy strategy = ShiftStrategy::parse(config.strategy);
  rep.params = calibrate_neighborhoods(rep.info, strategy, std::max<std::size_t>(config.samples, 100), config.seed);
  if (rep.params.eps_ap) {
    const std::size_t per = std::max<std::size_t>(20, config.samples / rep.info.n());
    for (std::size_t i = 0; i < rep.info.n(); ++i) {
      rep.heights.push_back(calibrate_height(rep.info, i, *rep.params.eps_ap, per, config.seed));
    }
  }
  return rep;
}

void write_calibration(const ExperimentConfig& config, const CalibrationReport& rep, std::ostream& js) {
  const ShiftStrategy strategy = ShiftStrategy::parse(config.strategy);
  const auto& p = rep.params;
  json heights = json::array();
  for (std::size_t i = 0; i < rep.heights.size(); ++i) {
    json sweep = json::array();
    for (const auto& [d, bmax, bmin] : rep.heights[i].sweep) sweep.push_back({{"delta_h", d}, {"boundary_max", bmax}, {"base_min", bmin}});
    heights.push_back({{"component", i},
                       {"delta_h", rep.heights[i].delta_h},
                       {"boundary_max", rep.heights[i].boundary_max},
                       {"base_min", rep.heights[i].base_min},
                       {"sweep", sweep}});
  }
  json out = {{"command", "calibrate"},
              {"spectrum", spectrum_json(rep.info)},
              {"strategy", strategy.name()},
              {"c_sigma", strategy.c_sigma()},
              {"seed", config.seed},
              {"samples", p.samples},
              {"rounds", p.rounds},
              {"eps_tub", p.eps_tub},
              {"eps_inv", p.eps_inv},
              {"eps_ap", real_or_null(p.eps_ap)},
              {"eps_sigma", real_or_null(p.eps_sigma)},
              {"c_b", p.c_b},
              {"c_q", p.c_q},
              {"max_contraction", p.max_contraction},
              {"eps_tub_bound", rep.info.gap / (2.0 * std::numbers::sqrt2)},
              {"height", heights},
              {"height_weights", "n, n-1, ..., 1"}};
  js << out.dump(2) << '\n';
}

// ------------------------------------------------------------------- verify

bool VerifyReport::passed() const {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.passed; });
}

StepFn step_function(const std::string& fault) {
  if (fault.empty() || fault == "none") return [](const SymTridiag& t, double s) { return step(t, s); };
  if (fault == "negate-last-givens") {
    return [](const SymTridiag& t, double s) {
      const QRFactors f = qr_star(t, s);
      std::vector<Givens> rot = f.q.rotations();
      if (t.b() < 0.0) rot.back().s = -rot.back().s;
      return congruence(t, OrthogonalFactor(t.n(), std::move(rot)));
    };
  }
  throw ConfigError("unknown fault '" + fault + "'");
}

namespace {

double sorted_drift(const SymTridiag& a, const SymTridiag& b) {
  const auto x = oracle_eigenvalues(a);
  const auto y = oracle_eigenvalues(b);
  double d = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) d = std::max(d, std::abs(x[k] - y[k]));
  return d;
}

SuiteResult finish(std::string name, double worst, double tol, std::size_t samples,
                   const std::optional<double>& override_tol) {
  const double t = override_tol.value_or(tol);
  return {std::move(name), worst <= t, worst, t, samples};
}

}  // namespace

VerifyReport verify(const ExperimentConfig& config) {
  VerifyReport rep;
  const StepFn f = step_function(config.inject_fault);
  const std::size_t trials = std::max<std::size_t>(config.trials, 1);
  const auto& tol = config.tolerance;
  const std::vector<ShiftStrategy> strategies{ShiftStrategy::rayleigh(), ShiftStrategy::wilkinson(),
                                              ShiftStrategy::mixed(1e-3)};

  {  // isospectrality, relative to ||T||
    Rng rng(config.seed, 1);
    double worst = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      const SymTridiag m = random_tridiag(2 + t % 7, rng);
      const double s = rng.uniform(-1.0, 1.0);
      worst = std::max(worst, sorted_drift(m, f(m, s)) / m.norm());
    }
    rep.suites.push_back(finish("isospectrality", worst, 1e-10, trials, tol));
  }
  {  // equivariance over every sign pattern with e_0 = +1
    Rng rng(config.seed, 2);
    double worst = 0.0;
    std::size_t count = 0;
    for (std::size_t t = 0; t < std::max<std::size_t>(trials / 10, 4); ++t) {
      const std::size_t n = 2 + t % 4;
      const SymTridiag m = random_tridiag(n, rng);
      for (unsigned long bits = 0; bits < (1UL << (n - 1)); ++bits) {
        const SignMatrix e = SignMatrix::from_bits(n, bits << 1);
        const SymTridiag em = sign_conjugate(m, e);
        for (const auto& st : strategies) {
          const SymTridiag lhs = f(em, st(em));
          const SymTridiag rhs = sign_conjugate(f(m, st(m)), e);
          worst = std::max(worst, max_abs_diff(lhs, rhs));
          ++count;
        }
      }
    }
    rep.suites.push_back(finish("equivariance", worst, 1e-12, count, tol));
  }
  {  // commutation, relative to ||T||
    Rng rng(config.seed, 3);
    double worst = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      const SymTridiag m = random_tridiag(2 + t % 7, rng);
      const double s0 = rng.uniform(-1.0, 1.0);
      const double s1 = rng.uniform(-1.0, 1.0);
      worst = std::max(worst, max_abs_diff(f(f(m, s0), s1), f(f(m, s1), s0)) / m.norm());
    }
    rep.suites.push_back(finish("commutation", worst, 1e-9, trials, tol));
  }
  {  // inversion
    Rng rng(config.seed, 4);
    double worst = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      const SymTridiag m = random_tridiag(2 + t % 7, rng);
      const double s = rng.uniform(-1.0, 1.0);
      worst = std::max(worst, max_abs_diff(step_inverse(f(m, s), s), m) / m.norm());
    }
    rep.suites.push_back(finish("inversion", worst, 1e-10, trials, tol));
  }
  {  // Parlett's bound on Wilkinson runs
    Rng rng(config.seed, 5);
    double worst = -std::numeric_limits<double>::infinity();
    const std::size_t runs = std::min<std::size_t>(trials, 100);
    for (std::size_t t = 0; t < runs; ++t) {
      const SymTridiag m = random_tridiag(3 + t % 6, rng);
      IterateOptions opt;
      opt.max_steps = 60;
      worst = std::max(worst, parlett_check(iterate(m, ShiftStrategy::wilkinson(), opt), m));
    }
    rep.suites.push_back(finish("parlett", worst, 1e-12, runs, tol));
  }
  {  // axioms (I) and (II)
    Rng rng(config.seed, 6);
    double worst1 = 0.0;
    double worst2 = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < trials; ++t) {
      const SymTridiag m = random_tridiag(2 + t % 7, rng);
      const auto ev = oracle_eigenvalues(m);
      for (const auto& st : strategies) {
        const AxiomReport a = axiom_check(m, st, ev);
        worst1 = std::max(worst1, a.axiom1_residual);
        worst2 = std::max(worst2, a.axiom2_margin);
      }
    }
    rep.suites.push_back(finish("axiom-sign-symmetry", worst1, 1e-13, trials * strategies.size(), tol));
    rep.suites.push_back(finish("axiom-proximity", worst2, 1e-12, trials * strategies.size(), tol));
  }
  {  // height monotonicity on an a.p.-free spectrum inside the tube
    const std::vector<double> lam{1.0, 2.0, 4.0};
    const SpectrumInfo info = classify_spectrum(lam);
    const ShiftStrategy w = ShiftStrategy::wilkinson();
    const NeighborhoodParams p = calibrate_neighborhoods(info, w, 100, config.seed);
    double worst = -std::numeric_limits<double>::infinity();
    std::size_t count = 0;
    for (std::size_t i = 0; i < info.n(); ++i) {
      const HeightCalibration hc = calibrate_height(info, i, *p.eps_ap, 20, config.seed);
      IterateOptions opt;
      opt.max_steps = 12;
      opt.deflate_tol = 1e-300;
      opt.height = HeightSpec::standard(info.n(), i, hc.delta_h);
      opt.info = &info;
      Rng rng(config.seed, 100 + i);
      for (int s = 0; s < 5; ++s) {
        const SymTridiag base = random_base(info, i, rng);
        const SymTridiag t0 = tubular_inverse(base, rng.uniform(-1.0, 1.0) * *p.eps_sigma, i, info);
        const IterationTrace tr = iterate(t0, w, opt);
        for (const auto& r : tr.steps) {
          if (!r.height_gain || std::hypot(r.b1, r.b2) <= 1e-8) continue;
          worst = std::max(worst, -*r.height_gain);
          ++count;
        }
      }
    }
    // Strict increase: the largest loss must be negative.
    rep.suites.push_back({"height-monotonicity", worst < 0.0, worst, 0.0, count});
  }
  return rep;
}

void write_verify(const VerifyReport& report, std::ostream& text, std::ostream* js) {
  json suites = json::array();
  for (const auto& s : report.suites) {
    char line[160];
    std::snprintf(line, sizeof line, "%-4s %-22s worst=%-12.4g tol=%-10.3g samples=%zu\n", s.passed ? "ok" : "FAIL",
                  s.name.c_str(), s.worst, s.tolerance, s.samples);
    text << line;
    suites.push_back(
        {{"name", s.name}, {"passed", s.passed}, {"worst", s.worst}, {"tolerance", s.tolerance}, {"samples", s.samples}});
  }
  text << (report.passed() ? "all suites passed\n" : "some suites FAILED\n");
  if (js) *js << json{{"command", "verify"}, {"passed", report.passed()}, {"suites", suites}}.dump(2) << '\n';
}

}  // namespace tqr
