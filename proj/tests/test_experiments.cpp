#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "kzk/experiments.hpp"
#include "kzk/io.hpp"

#include "json.hpp"

#include <fstream>

using namespace kzk;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kConfigs = KZK_CONFIG_DIR;

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("kzk_test_experiments_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

RunConfig tiny_decay() {
  RunConfig c = load_config(kConfigs / "decay_weak.cfg");
  c.X_max = 10.0;
  c.nx = 101;
  c.ny_modes = 2;
  c.dt = 0.01;
  c.T = 0.5;
  c.record_every = 1;
  c.initial.x0 = 5.0;
  c.initial.sigma = 1.0;
  c.probe_T = 0.2;
  c.probe_dt = 0.02;
  return c;
}

RunConfig tiny_cd() {
  RunConfig c = load_config(kConfigs / "continuous_dependence.cfg");
  c.X_max = 12.0;
  c.nx = 121;
  c.ny_modes = 4;
  c.dt = 0.01;
  c.T = 0.2;
  c.record_every = 2;
  c.initial.x0 = 6.0;
  c.perturbation.x0 = 5.0;
  return c;
}

} // namespace

TEST_CASE("decay gate rejects before integrating") {
  RunConfig c = load_config(kConfigs / "decay_weak.cfg");
  c.b = 1.0;
  c.L = 1.0;
  const DecayVerdict v = run_decay(c);
  CHECK_FALSE(v.ran);
  CHECK_FALSE(v.pass);
  CHECK(v.records.empty());
  REQUIRE_FALSE(v.gate_violations.empty());
  CHECK(v.gate_violations.front().find("L0") != std::string::npos);
}

TEST_CASE("zero data passes trivially") {
  RunConfig c = tiny_decay();
  c.initial.amplitude = 0.0;
  const DecayVerdict v = run_decay(c);
  CHECK(v.trivial);
  CHECK(v.pass);
  CHECK_FALSE(v.ran);
}

TEST_CASE("calibrated smallness threshold is cached") {
  const fs::path dir = scratch("eps0");
  RunConfig c = tiny_decay();
  const fs::path cache = dir / "cache.json";
  const Eps0Calibration first = calibrate_eps0(c, cache);
  CHECK_FALSE(first.cached);
  CHECK(first.key == eps0_cache_key(c));
  CHECK(first.key == "quadratic|b=0|L=1|family=a");
  CHECK(first.eps0 >= 0.0);
  CHECK(first.eps0 <= c.eps0_max);
  const Eps0Calibration second = calibrate_eps0(c, cache);
  CHECK(second.cached);
  CHECK(second.eps0 == first.eps0);

}

TEST_CASE("amplitude above the calibrated threshold is refused") {
  const fs::path dir = scratch("eps0_refuse");
  RunConfig c = tiny_decay();
  const fs::path cache = dir / "cache.json";
  json db;
  db[eps0_cache_key(c)] = {{"eps0", 0.001}, {"at_bracket_top", false}};
  std::ofstream(cache) << db.dump();
  const DecayVerdict v = run_decay(c, cache);
  CHECK(v.eps0.cached);
  CHECK_FALSE(v.ran);
  CHECK_FALSE(v.pass);
  REQUIRE_FALSE(v.gate_violations.empty());
  CHECK(v.gate_violations.front().find("eps0") != std::string::npos);
}

TEST_CASE("short decay run reports its fit") {
  RunConfig c = tiny_decay();
  c.calibrate_eps0 = false;
  const DecayVerdict v = run_decay(c);
  CHECK(v.ran);
  CHECK(v.records.size() == 51);
  CHECK(v.series.size() == 51);
  CHECK(v.threshold == doctest::Approx(0.8 * 0.1 * 0.98696).epsilon(1e-4));
  CHECK(v.window_end == doctest::Approx(0.5));
  CHECK(v.amplitude <= 0.01);
  CHECK(v.amplitude > 0.008);
  CHECK(std::isfinite(v.fit.rate));
  CHECK(v.fit.used >= 20);
}

TEST_CASE("continuous dependence") {
  SUBCASE("zero delta") {
    RunConfig c = tiny_cd();
    c.deltas = {0.0, 1e-2};
    const auto v = run_continuous_dependence(c);
    REQUIRE(v.ratios.size() == 2);
    CHECK(v.ratios[0] == 0.0);
    CHECK(v.ratios[1] > 0.0);
  }
  SUBCASE("linear ratios do not depend on delta") {
    RunConfig c = tiny_cd();
    c.nonlinearity = "none";
    const auto v = run_continuous_dependence(c);
    REQUIRE(v.ratios.size() == 2);
    CHECK(v.ratios[0] == doctest::Approx(v.ratios[1]).epsilon(1e-10));
    CHECK(v.final_ratios[0] == doctest::Approx(v.final_ratios[1]).epsilon(1e-10));
    CHECK(v.ratios[0] >= 1.0 - 1e-12);
    CHECK(v.spread == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(v.pass);
  }
  SUBCASE("quadratic ratios agree") {
    const auto v = run_continuous_dependence(tiny_cd());
    CHECK(v.spread <= 2.0);
    CHECK(v.pass);
    CHECK(v.weight == WeightSpec::exponential(0.1).label());
  }
  SUBCASE("zero perturbation") {
    RunConfig c = tiny_cd();
    c.perturbation.amplitude = 0.0;
    const auto v = run_continuous_dependence(c);
    CHECK_FALSE(v.pass);
    CHECK_FALSE(v.message.empty());
  }
}

TEST_CASE("oracle convergence") {
  RunConfig c = load_config(kConfigs / "oracle_convergence.cfg");
  c.nx = 301;
  c.ny_modes = 2;
  c.dt = 0.01;
  c.T = 0.1;
  SUBCASE("zero data has zero error") {
    c.initial.amplitude = 0.0;
    const auto v = run_oracle_convergence(c);
    REQUIRE(v.errors.size() == 3);
    for (double e : v.errors) CHECK(e == 0.0);
    CHECK(v.dx[1] == doctest::Approx(0.5 * v.dx[0]));
    CHECK(v.dt[2] == doctest::Approx(0.25 * v.dt[0]));
  }
  SUBCASE("errors shrink") {
    const auto v = run_oracle_convergence(c);
    REQUIRE(v.errors.size() == 3);
    CHECK(v.errors[1] < v.errors[0]);
    CHECK(v.errors[2] < v.errors[1]);
    CHECK(v.tail_ok);
  }
  SUBCASE("nonlinear configs are refused") {
    c.nonlinearity = "quadratic";
    const auto v = run_oracle_convergence(c);
    CHECK_FALSE(v.pass);
    CHECK(v.errors.empty());
  }
}

TEST_CASE("conservation drift") {
  RunConfig c = load_config(kConfigs / "conservation_drift.cfg");
  c.ny_modes = 4;
  c.periodic_nx = 128;
  c.T = 0.1;
  SUBCASE("zero data") {
    c.initial.amplitude = 0.0;
    const auto v = run_conservation_drift(c);
    CHECK(v.mass0 == 0.0);
    CHECK(v.mass_drift == 0.0);
    CHECK(v.pass);
  }
  SUBCASE("linear drift is at round-off") {
    c.nonlinearity = "none";
    const auto v = run_conservation_drift(c);
    CHECK(v.mass_drift <= 1e-10);
    CHECK(v.energy_drift <= 1e-10);
  }
  SUBCASE("forcing is refused") {
    c.forcing.kind = "gaussian";
    c.forcing.amplitude = 1.0;
    CHECK_FALSE(run_conservation_drift(c).pass);
  }
}

TEST_CASE("experiment outputs") {
  const fs::path dir = scratch("outputs");
  RunConfig c = load_config(kConfigs / "conservation_drift.cfg");
  c.ny_modes = 4;
  c.periodic_nx = 128;
  c.T = 0.05;
  std::string summary;
  run_experiment(c, dir, summary);
  std::ifstream in(dir / "verdict.json");
  const json j = json::parse(in);
  CHECK(j["experiment"] == "conservation_drift");
  CHECK(j.contains("mass_drift"));
  CHECK(j.contains("pass"));
  CHECK(summary.find("conservation_drift") == 0);

  RunConfig d = tiny_decay();
  d.b = 1.0;
  const fs::path gate = dir / "gate";
  CHECK_FALSE(run_experiment(d, gate, summary));
  std::ifstream gin(gate / "verdict.json");
  const json g = json::parse(gin);
  CHECK(g["ran"] == false);
  CHECK_FALSE(g["gate_violations"].empty());
  CHECK_FALSE(fs::exists(gate / "records.csv"));

  RunConfig none = c;
  none.experiment = "none";
  CHECK_THROWS_AS(run_experiment(none, dir, summary), ConfigError);
}
