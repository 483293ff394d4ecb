#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "exg/harness.hpp"
#include "exg/rng.hpp"
#include "exg/stats.hpp"

using namespace exg;

TEST_CASE("config parsing") {
  Config c = parse_config_text("n = 64\n# comment\nlambda = 0.05  # trailing\nt_grid=0.25,0.5\n");
  CHECK(config_get_int(c, "n", 0) == 64);
  CHECK(config_get(c, "lambda", 0) == doctest::Approx(0.05));
  auto grid = config_get_list(c, "t_grid", {});
  REQUIRE(grid.size() == 2);
  CHECK(grid[1] == doctest::Approx(0.5));
  CHECK(config_get(c, "missing", 7.5) == 7.5);
  apply_overrides(c, {"n=128"});
  CHECK(config_get_int(c, "n", 0) == 128);
  CHECK_THROWS_AS(apply_overrides(c, {"oops"}), std::invalid_argument);
}

TEST_CASE("replica pool is worker-count independent") {
  auto body = [](int r) {
    Philox rng(10101, static_cast<uint64_t>(r));
    std::vector<double> out;
    for (int i = 0; i < 4; ++i) out.push_back(rng.uniform());
    return out;
  };
  auto r1 = run_replicas(12, 1, body);
  auto r3 = run_replicas(12, 3, body);
  REQUIRE(r1.size() == r3.size());
  for (size_t i = 0; i < r1.size(); ++i)
    for (size_t j = 0; j < r1[i].size(); ++j) CHECK(r1[i][j] == r3[i][j]);
}

TEST_CASE("estimators") {
  std::vector<double> cst(40, 3.25);
  EstimateRecord v = estimate_variance(cst, "var");
  CHECK(v.estimate == 0.0);
  CHECK(v.se == 0.0);
  CHECK(v.ci_lo <= v.estimate);
  CHECK(v.ci_hi >= v.estimate);

  std::vector<double> small(10, 1.0);
  CHECK_THROWS_AS(estimate_variance(small, "var"), std::invalid_argument);

  // identical vectors are perfectly correlated
  std::vector<double> x;
  Philox rng(5, 0);
  for (int i = 0; i < 64; ++i) x.push_back(rng.normal());
  CHECK(correlation(x, x) == doctest::Approx(1.0).epsilon(1e-12));

  // seeded standard normals: kurtosis lands within 4 SE of 3
  std::vector<double> z;
  Philox rng2(123, 9);
  for (int i = 0; i < 100000; ++i) z.push_back(rng2.normal());
  GaussianDiagnostics g = gaussian_diagnostics(z);
  CHECK(std::abs(g.kurtosis - 3.0) <= 4 * g.kurtosis_se);
  CHECK(std::abs(g.skewness) <= 4 * g.skewness_se);
  CHECK(std::abs(mean(z)) <= 4.0 / std::sqrt(100000.0));
  CHECK(std::abs(variance(z) - 1.0) <= 4.0 * std::sqrt(2.0 / 100000.0));
}

TEST_CASE("manifest serialization and exit codes") {
  RunManifest m;
  m.preset = "demo";
  m.version = "x";
  m.checks.push_back({"a", "", 1.0, 2.0, true, false});
  CHECK(m.exit_code() == 0);
  m.checks.push_back({"b", "", 3.0, 2.0, false, true});
  CHECK(m.exit_code() == 2);
  m.checks.push_back({"c", "", 3.0, 2.0, false, false});
  CHECK(m.exit_code() == 3);
  std::string j = m.to_json();
  CHECK(j.find("\"preset\"") != std::string::npos);
  CHECK(j.find("\"checks\"") != std::string::npos);
}

TEST_CASE("unknown preset is a configuration error") {
  CHECK_THROWS_AS(run_preset("nope", {}, ""), std::invalid_argument);
}

TEST_CASE("preset reruns reproduce bit-identical statistics") {
  Config cfg;
  cfg["n"] = "6";
  cfg["densities"] = "50";
  RunManifest a = run_preset("exact-suite", cfg, "");
  RunManifest b = run_preset("exact-suite", cfg, "");
  REQUIRE(a.checks.size() == b.checks.size());
  for (size_t i = 0; i < a.checks.size(); ++i) {
    CHECK(a.checks[i].statistic == b.checks[i].statistic);
    CHECK(a.checks[i].pass == b.checks[i].pass);
  }
}

TEST_CASE("persisted run round trip") {
  Config cfg;
  cfg["n"] = "5";
  cfg["densities"] = "20";
  std::string dir = "/tmp/exg_test_runs";
  std::filesystem::remove_all(dir);
  RunManifest m = run_preset("exact-suite", cfg, dir);
  bool found_manifest = false;
  for (auto& e : std::filesystem::recursive_directory_iterator(dir)) {
    if (e.path().filename() == "manifest.json") found_manifest = true;
  }
  CHECK(found_manifest);
  std::filesystem::remove_all(dir);
}
