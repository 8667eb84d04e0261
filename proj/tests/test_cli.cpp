#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "xlmimo/cli.hpp"

namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("xlmimo_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const std::string& body) {
  const fs::path path = dir / "config.json";
  std::ofstream out(path);
  out << body;
  return path;
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("xlmimo");
  for (const std::string& a : args) argv.push_back(a.c_str());
  return xlmimo::run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kSeConfig = R"({
  "command": "se",
  "seed": 11,
  "trials": 300,
  "carrier_ghz": 7.0,
  "route": "ss",
  "rx": {"n": 16, "spacing": "0.5lambda"},
  "tx": {"n": 4, "spacing": "0.5lambda"},
  "coupling": "diagonal",
  "clusters": {
    "count": 2,
    "rx_distance": ["200lambda", "400lambda"],
    "tx_distance": ["50lambda", "100lambda"],
    "angle_rad": [-1.0471975511965976, 1.0471975511965976],
    "spread": 1e-8
  },
  "power_db": {"min": -10, "max": 10, "step": 5}
})";

}  // namespace

TEST_CASE("cli corr: emits the spectrum and delta map CSVs") {
  const fs::path dir = fresh_dir("corr");
  const fs::path cfg = write_config(dir, R"({
    "command": "corr",
    "carrier_ghz": 7.0,
    "array": {"n": 32, "spacing": "0.5lambda"},
    "cluster": {"distance": "300lambda", "angle_rad": 0.3926990816987241, "spread": 0.01},
    "delta_grid": {"distance_min": "120lambda", "distance_max": "5000lambda",
                   "distance_points": 4, "angle_min_rad": -1.0, "angle_max_rad": 1.0,
                   "angle_points": 5}
  })");
  CHECK(run({"corr", "--config", cfg.string(), "--out", (dir / "out").string(),
             "--emit-plots"}) == 0);
  const std::string spectrum = slurp(dir / "out" / "spectrum.csv");
  CHECK(spectrum.rfind("index,nearfield_eig,farfield_eig\n", 0) == 0);
  CHECK(std::count(spectrum.begin(), spectrum.end(), '\n') == 33);
  const std::string delta = slurp(dir / "out" / "delta_map.csv");
  CHECK(delta.rfind("d,theta,delta_minus_n\n", 0) == 0);
  CHECK(std::count(delta.begin(), delta.end(), '\n') == 21);
  CHECK(fs::exists(dir / "out" / "spectrum.svg"));
  CHECK(fs::exists(dir / "out" / "delta_map.svg"));
}

TEST_CASE("cli delta-map: standalone grid emission") {
  const fs::path dir = fresh_dir("deltamap");
  const fs::path cfg = write_config(dir, R"({
    "carrier_ghz": 7.0,
    "array": {"n": 64, "spacing": "0.5lambda"},
    "delta_grid": {"distance_min": 5.0, "distance_max": 50.0, "distance_points": 3,
                   "distance_scale": "linear", "angle_min_rad": -0.5, "angle_max_rad": 0.5,
                   "angle_points": 3}
  })");
  CHECK(run({"delta-map", "--config", cfg.string(), "--out", (dir / "out").string()}) == 0);
  CHECK(fs::exists(dir / "out" / "delta_map.csv"));
}

TEST_CASE("cli config failures exit with code 2") {
  const fs::path dir = fresh_dir("bad");

  const fs::path malformed = write_config(dir, "{ not json");
  CHECK(run({"corr", "--config", malformed.string(), "--out", dir.string()}) == 2);

  const fs::path unknown = write_config(dir, R"({
    "carrier_ghz": 7.0,
    "array": {"n": 8, "spacing": "0.5lambda"},
    "cluster": {"distance": "100lambda", "angle_rad": 0.0, "spread": 0.1},
    "surprise": 1
  })");
  CHECK(run({"corr", "--config", unknown.string(), "--out", dir.string()}) == 2);

  const fs::path missing = write_config(dir, R"({"carrier_ghz": 7.0})");
  CHECK(run({"corr", "--config", missing.string(), "--out", dir.string()}) == 2);

  CHECK(run({"corr", "--config", (dir / "nope.json").string()}) == 2);

  // Declared command must match the invoked subcommand.
  const fs::path mismatched = write_config(dir, R"({
    "command": "se", "carrier_ghz": 7.0,
    "array": {"n": 8, "spacing": "0.5lambda"},
    "cluster": {"distance": "100lambda", "angle_rad": 0.0, "spread": 0.1}
  })");
  CHECK(run({"corr", "--config", mismatched.string(), "--out", dir.string()}) == 2);
}

TEST_CASE("cli se: runs, emits schema-stable CSV, deterministic bytes") {
  const fs::path dir = fresh_dir("se");
  const fs::path cfg = write_config(dir, kSeConfig);
  CHECK(run({"se", "--config", cfg.string(), "--out", (dir / "a").string()}) == 0);
  CHECK(run({"se", "--config", cfg.string(), "--out", (dir / "b").string(), "--threads",
             "3"}) == 0);
  const std::string a = slurp(dir / "a" / "se.csv");
  const std::string b = slurp(dir / "b" / "se.csv");
  CHECK(a == b);
  CHECK(a.rfind("power_db,mc_estimate,mc_stderr,approx,upper_bound\n", 0) == 0);
  CHECK(std::count(a.begin(), a.end(), '\n') == 6);
  // The ss route fills both approx and upper bound: no empty cells.
  CHECK(a.find(",,") == std::string::npos);
}

TEST_CASE("cli se: route/approximation mismatch and empty grid rejected") {
  const fs::path dir = fresh_dir("se_bad");
  std::string ds = kSeConfig;
  ds.replace(ds.find("\"ss\""), 4, "\"ds\"");
  ds.insert(ds.rfind('}'), R"(, "approximation": "ss")");
  const fs::path mismatch = write_config(dir, ds);
  CHECK(run({"se", "--config", mismatch.string(), "--out", dir.string()}) == 2);

  std::string empty_grid = kSeConfig;
  const auto pos = empty_grid.find("{\"min\": -10, \"max\": 10, \"step\": 5}");
  empty_grid.replace(pos, 35, "{\"min\": 10, \"max\": -10, \"step\": 5}");
  const fs::path bad_grid = write_config(dir, empty_grid);
  CHECK(run({"se", "--config", bad_grid.string(), "--out", dir.string()}) == 2);
}

TEST_CASE("cli outage: ss approximation column present") {
  const fs::path dir = fresh_dir("outage");
  std::string cfg_body = kSeConfig;
  cfg_body.replace(cfg_body.find("\"command\": \"se\""), 15, "\"command\": \"outage\"");
  const auto pos = cfg_body.find("\"power_db\"");
  cfg_body.replace(pos, std::string("\"power_db\"").size(), "\"threshold_db\"");
  cfg_body.insert(cfg_body.rfind('}'), R"(, "transmit_power_db": 0.0)");
  const fs::path cfg = write_config(dir, cfg_body);
  CHECK(run({"outage", "--config", cfg.string(), "--out", (dir / "out").string()}) == 0);
  const std::string csv = slurp(dir / "out" / "outage.csv");
  CHECK(csv.rfind("threshold_db,mc_estimate,mc_stderr,approx,upper_bound\n", 0) == 0);
  // upper_bound column is empty for outage.
  CHECK(csv.find(",\n") != std::string::npos);
}

TEST_CASE("cli flags override config seed and trials") {
  const fs::path dir = fresh_dir("flags");
  const fs::path cfg = write_config(dir, kSeConfig);
  CHECK(run({"se", "--config", cfg.string(), "--out", (dir / "s1").string(), "--seed", "101",
             "--trials", "150"}) == 0);
  CHECK(run({"se", "--config", cfg.string(), "--out", (dir / "s2").string(), "--seed", "202",
             "--trials", "150"}) == 0);
  CHECK(run({"se", "--config", cfg.string(), "--out", (dir / "s3").string(), "--seed", "101",
             "--trials", "150"}) == 0);
  CHECK(slurp(dir / "s1" / "se.csv") != slurp(dir / "s2" / "se.csv"));
  CHECK(slurp(dir / "s1" / "se.csv") == slurp(dir / "s3" / "se.csv"));
}

TEST_CASE("cli corr: quadrature non-convergence exits with code 3") {
  const fs::path dir = fresh_dir("nonconv");
  const fs::path cfg = write_config(dir, R"({
    "carrier_ghz": 7.0,
    "array": {"n": 64, "spacing": "0.5lambda"},
    "cluster": {"distance": "300lambda", "angle_rad": 0.1, "spread": 1.0},
    "quadrature": {"node_count": 8, "panel_count": 2, "abs_tol": 1e-14}
  })");
  CHECK(run({"corr", "--config", cfg.string(), "--out", (dir / "out").string()}) == 3);
}

TEST_CASE("cli se: ds route fills the determinant bound on small systems") {
  const fs::path dir = fresh_dir("se_ds");
  std::string body = kSeConfig;
  body.replace(body.find("\"ss\""), 4, "\"ds\"");
  body.replace(body.find("\"n\": 16"), 7, "\"n\": 8");
  body.replace(body.find("\"coupling\": \"diagonal\""), 22, "\"coupling\": \"dense\"");
  body.replace(body.find("1e-8"), 4, "0.01");
  const fs::path cfg = write_config(dir, body);
  CHECK(run({"se", "--config", cfg.string(), "--out", (dir / "out").string()}) == 0);
  const std::string csv = slurp(dir / "out" / "se.csv");
  // approx column empty, upper bound present: rows look like "...,,<value>".
  CHECK(csv.find(",,") != std::string::npos);
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);  // header
  int rows = 0;
  while (std::getline(lines, line)) {
    CHECK(line.back() != ',');  // upper_bound cell non-empty
    ++rows;
  }
  CHECK(rows == 5);
}

TEST_CASE("cli compare: manifest replay is byte-identical; single setup rejected") {
  const fs::path dir = fresh_dir("compare");
  const fs::path cfg = write_config(dir, R"({
    "command": "compare",
    "seed": 7,
    "trials": 100,
    "transmit_power_db": 30.0,
    "setups": [
      {"name": "a", "carrier_ghz": 3.5, "n_tx": 8, "n_rx": 2, "bandwidth_mhz": 100,
       "coupling": "diagonal", "rays_per_cluster": 1},
      {"name": "b", "carrier_ghz": 7.0, "n_tx": 16, "n_rx": 2, "bandwidth_mhz": 500,
       "coupling": "dense", "rays_per_cluster": 1}
    ]
  })");
  CHECK(run({"compare", "--config", cfg.string(), "--out", (dir / "run1").string()}) == 0);
  REQUIRE(fs::exists(dir / "run1" / "manifest.json"));
  CHECK(run({"compare", "--config", (dir / "run1" / "manifest.json").string(), "--out",
             (dir / "run2").string()}) == 0);
  for (const char* name : {"capacity_cdf_a.csv", "capacity_cdf_b.csv", "snr_cdf_a.csv",
                           "snr_cdf_b.csv"}) {
    CHECK(slurp(dir / "run1" / name) == slurp(dir / "run2" / name));
  }

  const fs::path single = write_config(dir, R"({
    "command": "compare", "seed": 7, "trials": 100,
    "setups": [{"name": "a", "carrier_ghz": 3.5, "n_tx": 4, "n_rx": 2,
                "bandwidth_mhz": 100, "rays_per_cluster": 1}]
  })");
  CHECK(run({"compare", "--config", single.string(), "--out", (dir / "run3").string()}) == 2);
}
