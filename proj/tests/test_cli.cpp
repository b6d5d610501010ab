#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tqr/cli.hpp"
#include "tqr/experiments.hpp"

using namespace tqr;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch_dir() {
  auto p = std::filesystem::temp_directory_path() / "tqrlab_cli_test";
  std::filesystem::create_directories(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("step at an eigenvalue") {
  const Run r = run({"step", "--diag", "1,1", "--sub", "1", "--shift", "0"});
  REQUIRE(r.code == kExitOk);
  const json j = json::parse(r.out);
  CHECK(j["next"]["diag"][0].get<double>() == doctest::Approx(2.0));
  CHECK(std::abs(j["next"]["diag"][1].get<double>()) < 1e-15);
  CHECK(j["det_sign"] == 0);
}

TEST_CASE("step leaves a diagonal matrix alone") {
  const Run r = run({"step", "--diag", "1,2,4", "--sub", "0,0", "--shift", "3"});
  REQUIRE(r.code == kExitOk);
  const json j = json::parse(r.out);
  CHECK(j["next"]["diag"] == json::array({1.0, 2.0, 4.0}));
  CHECK(j["next"]["sub"] == json::array({0.0, 0.0}));
}

TEST_CASE("step uses the strategy shift by default") {
  const Run r = run({"step", "--diag", "1,3", "--sub", "1", "--strategy", "wilkinson"});
  REQUIRE(r.code == kExitOk);
  CHECK(json::parse(r.out)["shift"].get<double>() == doctest::Approx(3.41421356237));
  const Run m = run({"step", "--matrix", R"({"diag": [1, 3], "sub": [1]})"});
  REQUIRE(m.code == kExitOk);
  CHECK(json::parse(m.out)["shift"].get<double>() == doctest::Approx(3.41421356237));
}

TEST_CASE("exit codes") {
  CHECK(run({"step", "--diag", "1,2", "--sub", "0", "--shift", "1"}).code == kExitNumerical);
  CHECK(run({"step", "--diag", "1,x"}).code == kExitParse);
  CHECK(run({"step", "--matrix", "{not json"}).code == kExitParse);
  CHECK(run({"frobnicate"}).code == kExitParse);
  CHECK(run({"calibrate", "--spectrum", "1,1,2"}).code == kExitNumerical);
  CHECK(run({"calibrate", "--strategy", "newton"}).code == kExitParse);
  CHECK(run({"hexagon", "--spectrum", "1,2,3,4"}).code == kExitParse);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("calibrate reports the tube radius") {
  const Run r = run({"calibrate", "--spectrum", "1,2,4", "--samples", "100"});
  REQUIRE(r.code == kExitOk);
  const json j = json::parse(r.out);
  CHECK(j["eps_tub"].get<double>() < 0.3536);
  CHECK(j["spectrum"]["ap_class"] == "ap_free");
  CHECK(j["height"].size() == 3);

  const Run ap = run({"calibrate", "--spectrum", "-1,0,1", "--samples", "100"});
  REQUIRE(ap.code == kExitOk);
  CHECK(json::parse(ap.out)["eps_ap"].is_null());
}

TEST_CASE("config file with flag override") {
  const auto dir = scratch_dir();
  const auto cfg = dir / "scan.cfg";
  {
    std::ofstream f(cfg);
    f << "# ensemble\nspectrum = 1,2,4\ntrials = 3\nseed = 9\nmax-steps=30\n";
  }
  ExperimentConfig c;
  load_config_file(c, cfg.string());
  CHECK(c.trials == 3);
  CHECK(c.seed == 9);

  const Run a = run({"rate-scan", "--config", cfg.string(), "--trials", "2"});
  REQUIRE(a.code == kExitOk);
  std::istringstream lines(a.out);
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) ++count;
  CHECK(count == 3);  // header + two trajectories

  ExperimentConfig bad;
  std::istringstream junk("trials = many\n");
  CHECK_THROWS_AS(load_config(bad, junk), ConfigError);
  std::istringstream unknown("colour = blue\n");
  CHECK_THROWS_AS(load_config(bad, unknown), ConfigError);
}

TEST_CASE("rate-scan output is deterministic") {
  const auto dir = scratch_dir();
  const std::string a = (dir / "a").string();
  const std::string b = (dir / "b").string();
  REQUIRE(run({"rate-scan", "--trials", "5", "--seed", "3", "--out", a}).code == kExitOk);
  REQUIRE(run({"rate-scan", "--trials", "5", "--seed", "3", "--out", b}).code == kExitOk);
  CHECK(slurp(a + ".csv") == slurp(b + ".csv"));
  CHECK(slurp(a + "_summary.csv") == slurp(b + "_summary.csv"));
  const json meta = json::parse(slurp(a + ".json"));
  CHECK(meta["trials"] == 5);
  CHECK(slurp(a + ".csv").rfind("trajectory,k,b1,", 0) == 0);
}

TEST_CASE("witness scan shows a strictly quadratic episode") {
  ExperimentConfig c;
  c.spectrum = {-1, 0, 1};
  c.start = "witness";
  c.trials = 3;
  c.max_steps = 12;
  c.deflate_tol = 1e-100;
  const RateScanResult r = rate_scan(c);
  bool found = false;
  for (const auto& s : r.summaries) found = found || s.quadratic_episode >= 4;
  CHECK(found);
}

TEST_CASE("hexagon portrait") {
  ExperimentConfig c;
  c.grid = 6;
  c.spectrum = {1, 2, 4};
  const HexagonResult h = hexagon(c);
  CHECK(h.vertex_fixed_error <= 1e-12);
  CHECK(h.alternating);
  CHECK(std::count(h.deflation_edge.begin(), h.deflation_edge.end(), true) == 3);
  CHECK(h.max_spectrum_error <= 1e-10);
  for (const auto& row : h.rows)
    for (double b : row.image.sub()) CHECK(b >= 0.0);

  c.spectrum = {-1, 0, 1};
  const HexagonResult s = hexagon(c);
  CHECK(s.bottom_edge_fixed_error <= 1e-10);

  const Run r = run({"hexagon", "--spectrum", "1,2,4", "--grid", "3"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.rfind("kind,edge,t11,t22,b1,b2,", 0) == 0);
}

TEST_CASE("verify passes, and catches an injected fault") {
  ExperimentConfig c;
  c.trials = 40;
  const VerifyReport ok = verify(c);
  CHECK(ok.passed());

  c.inject_fault = "negate-last-givens";
  const VerifyReport bad = verify(c);
  bool equivariance_failed = false;
  for (const auto& s : bad.suites)
    if (s.name == "equivariance") equivariance_failed = !s.passed;
  CHECK(equivariance_failed);

  const Run tight = run({"verify", "--trials", "20", "--tolerance", "1e-16"});
  CHECK(tight.code == kExitSuiteFailure);
  CHECK(tight.err.find("isospectrality") != std::string::npos);
}
