#include "tqr/cli.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tqr/errors.hpp"
#include "tqr/experiments.hpp"
#include "tqr/step.hpp"
#include "tqr/strategy.hpp"

namespace tqr {

namespace {

using json = nlohmann::json;

// Flags that map one-to-one onto ExperimentConfig settings.
const std::vector<std::string> kCommonKeys{"spectrum", "strategy", "seed", "trials", "max-steps", "deflate-tol", "out"};

struct Settings {
  std::map<std::string, std::string> values;
  std::string config_path;
  bool follow_double = false;

  void add(CLI::App* app, const std::string& key, const std::string& help) {
    app->add_option("--" + key, values[key], help);
  }
};

ExperimentConfig resolve(CLI::App* app, Settings& s) {
  ExperimentConfig c;
  if (!s.config_path.empty()) load_config_file(c, s.config_path);
  for (const auto& [key, value] : s.values) {
    if (app->count("--" + key) > 0) apply_setting(c, key, value);
  }
  if (s.follow_double) c.follow_double = true;
  return c;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  return f;
}

SymTridiag matrix_from_json(const json& j) {
  return SymTridiag(j.at("diag").get<std::vector<double>>(), j.at("sub").get<std::vector<double>>());
}

SymTridiag read_step_matrix(const std::string& matrix, const std::string& diag, const std::string& sub) {
  if (!matrix.empty()) {
    if (!diag.empty() || !sub.empty()) throw ConfigError("use either --matrix or --diag/--sub");
    if (matrix.front() == '{') return matrix_from_json(json::parse(matrix));
    std::ifstream in(matrix);
    if (!in) throw ConfigError("cannot open matrix file '" + matrix + "'");
    return matrix_from_json(json::parse(in));
  }
  if (diag.empty()) throw ConfigError("step needs --diag (and --sub) or --matrix");
  std::vector<double> d = parse_real_list(diag);
  std::vector<double> b = sub.empty() ? std::vector<double>{} : parse_real_list(sub);
  return SymTridiag(std::move(d), std::move(b));
}

int cmd_step(const ExperimentConfig& c, const SymTridiag& t, const std::optional<double>& shift,
             std::ostream& out) {
  const double s = shift ? *shift : ShiftStrategy::parse(c.strategy)(t);
  const StepResult r = phi_star(t, s);
  json j = {{"shift", s},
            {"strategy", shift ? json(nullptr) : json(c.strategy)},
            {"ratio_last", r.ratio_last},
            {"det_sign", r.det_sign},
            {"next",
             {{"diag", std::vector<double>(r.next.diag().begin(), r.next.diag().end())},
              {"sub", std::vector<double>(r.next.sub().begin(), r.next.sub().end())}}}};
  std::string text = j.dump(2);
  if (!c.out.empty()) {
    auto f = open_output(c.out);
    f << text << '\n';
  } else {
    out << text << '\n';
  }
  return kExitOk;
}

int cmd_rate_scan(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  const RateScanResult r = rate_scan(c);
  for (const auto& s : r.summaries) {
    if (!s.error.empty()) err << "trajectory " << s.trajectory << ": " << s.error << '\n';
  }
  if (c.out.empty()) {
    std::ostringstream trace;
    std::ostringstream meta;
    write_rate_scan(c, r, trace, out, meta);
    return kExitOk;
  }
  auto trace = open_output(c.out + ".csv");
  auto summary = open_output(c.out + "_summary.csv");
  auto meta = open_output(c.out + ".json");
  write_rate_scan(c, r, trace, summary, meta);
  return kExitOk;
}

int cmd_hexagon(const ExperimentConfig& c, std::ostream& out) {
  const HexagonResult r = hexagon(c);
  if (c.out.empty()) {
    std::ostringstream meta;
    write_hexagon(r, out, meta);
    return kExitOk;
  }
  auto csv = open_output(c.out + ".csv");
  auto meta = open_output(c.out + ".json");
  write_hexagon(r, csv, meta);
  return kExitOk;
}

int cmd_calibrate(const ExperimentConfig& c, std::ostream& out) {
  const CalibrationReport r = calibrate(c);
  if (c.out.empty()) {
    write_calibration(c, r, out);
  } else {
    auto f = open_output(c.out);
    write_calibration(c, r, f);
  }
  return kExitOk;
}

int cmd_verify(const ExperimentConfig& c, std::ostream& out, std::ostream& err) {
  const VerifyReport r = verify(c);
  if (c.out.empty()) {
    write_verify(r, out, nullptr);
  } else {
    auto f = open_output(c.out);
    write_verify(r, out, &f);
  }
  if (r.passed()) return kExitOk;
  err << "failing suites:";
  for (const auto& s : r.suites)
    if (!s.passed) err << ' ' << s.name;
  err << '\n';
  return kExitSuiteFailure;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Signed shifted QR dynamics on symmetric tridiagonal matrices", "tqrlab"};
  app.require_subcommand(1);

  Settings step_s, scan_s, hex_s, cal_s, ver_s;
  std::string matrix, diag, sub;
  std::optional<double> shift;

  auto common = [](CLI::App* sc, Settings& s) {
    s.add(sc, "spectrum", "comma-separated eigenvalues");
    s.add(sc, "strategy", "rayleigh | wilkinson | mixed:<eps>");
    s.add(sc, "seed", "64-bit seed");
    s.add(sc, "trials", "number of trajectories or samples");
    s.add(sc, "max-steps", "step budget per trajectory");
    s.add(sc, "deflate-tol", "absolute deflation tolerance on |b|");
    s.add(sc, "out", "output path or stem");
    sc->add_option("--config", s.config_path, "flat key=value config file");
  };

  auto* step_cmd = app.add_subcommand("step", "apply one signed step and print the result as JSON");
  common(step_cmd, step_s);
  step_cmd->add_option("--matrix", matrix, "JSON {\"diag\": [...], \"sub\": [...]} inline or a file path");
  step_cmd->add_option("--diag", diag, "comma-separated diagonal");
  step_cmd->add_option("--sub", sub, "comma-separated subdiagonal");
  step_cmd->add_option("--shift", shift, "explicit shift; default uses --strategy");

  auto* scan_cmd = app.add_subcommand("rate-scan", "run seeded trajectories and emit per-step traces");
  common(scan_cmd, scan_s);
  scan_s.add(scan_cmd, "start", "random | witness");
  scan_cmd->add_flag("--follow-double", scan_s.follow_double, "keep stepping until b2 also deflates");
  scan_s.add(scan_cmd, "double-tol", "tolerance on |b2| with --follow-double");
  scan_s.add(scan_cmd, "exception-c", "constant C in the exception count");
  scan_s.add(scan_cmd, "window", "pairs used for the tail exponent");

  auto* hex_cmd = app.add_subcommand("hexagon", "sample the n = 3 phase portrait");
  common(hex_cmd, hex_s);
  hex_s.add(hex_cmd, "grid", "grid density per edge");

  auto* cal_cmd = app.add_subcommand("calibrate", "calibrate deflation neighborhoods");
  common(cal_cmd, cal_s);
  cal_s.add(cal_cmd, "samples", "samples per round");

  auto* ver_cmd = app.add_subcommand("verify", "run the property suites");
  common(ver_cmd, ver_s);
  ver_s.add(ver_cmd, "tolerance", "override every suite tolerance");
  ver_s.add(ver_cmd, "inject-fault", "none | negate-last-givens");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    app.exit(e, out, err);
    return kExitParse;
  }

  try {
    if (step_cmd->parsed()) {
      const ExperimentConfig c = resolve(step_cmd, step_s);
      return cmd_step(c, read_step_matrix(matrix, diag, sub), shift, out);
    }
    if (scan_cmd->parsed()) return cmd_rate_scan(resolve(scan_cmd, scan_s), out, err);
    if (hex_cmd->parsed()) return cmd_hexagon(resolve(hex_cmd, hex_s), out);
    if (cal_cmd->parsed()) return cmd_calibrate(resolve(cal_cmd, cal_s), out);
    if (ver_cmd->parsed()) return cmd_verify(resolve(ver_cmd, ver_s), out, err);
  } catch (const CalibrationFailed& e) {
    err << "calibration failed: " << e.what() << '\n';
    return kExitCalibration;
  } catch (const Error& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitParse;
  } catch (const json::exception& e) {
    err << "matrix parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitParse;
  }
  return kExitParse;
}

}  // namespace tqr
