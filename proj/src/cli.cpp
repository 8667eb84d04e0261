// Copyright 2026 The xlmimo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "xlmimo/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <thread>

#include "xlmimo/csv.hpp"
#include "xlmimo/metrics.hpp"
#include "xlmimo/scenarios.hpp"

namespace xlmimo {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct RunOptions {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  int threads = 0;  // 0 = hardware concurrency
  bool emit_plots = false;

  int resolved_threads() const {
    if (threads > 0) return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
  }
};

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config file: " + path);
  json cfg;
  try {
    in >> cfg;
  } catch (const json::exception& e) {
    fail("config parse error in " + path + ": " + e.what());
  }
  if (!cfg.is_object()) fail("config root must be a JSON object");
  return cfg;
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& ctx) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* k : allowed) {
      if (item.key() == k) {
        ok = true;
        break;
      }
    }
    if (!ok) fail("unknown key '" + item.key() + "' in " + ctx);
  }
}

double require_number(const json& obj, const char* key, const std::string& ctx) {
  if (!obj.contains(key)) fail("missing key '" + std::string(key) + "' in " + ctx);
  if (!obj[key].is_number()) fail("key '" + std::string(key) + "' in " + ctx + " must be numeric");
  return obj[key].get<double>();
}

int require_int(const json& obj, const char* key, const std::string& ctx) {
  const double v = require_number(obj, key, ctx);
  if (v != std::floor(v)) fail("key '" + std::string(key) + "' in " + ctx + " must be integral");
  return static_cast<int>(v);
}

double number_or(const json& obj, const char* key, double fallback, const std::string& ctx) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) fail("key '" + std::string(key) + "' in " + ctx + " must be numeric");
  return obj[key].get<double>();
}

// Length values are either meters (number) or wavelength multiples
// ("200lambda").
double parse_length(const json& v, double wavelength, const std::string& ctx) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    const auto pos = s.find("lambda");
    if (pos == std::string::npos || pos + 6 != s.size()) {
      fail("length '" + s + "' in " + ctx + " must be meters or '<x>lambda'");
    }
    std::size_t used = 0;
    double mult = 0.0;
    try {
      mult = std::stod(s.substr(0, pos), &used);
    } catch (const std::exception&) {
      fail("bad length literal '" + s + "' in " + ctx);
    }
    if (used != pos) fail("bad length literal '" + s + "' in " + ctx);
    return mult * wavelength;
  }
  fail("length in " + ctx + " must be a number or string");
}

QuadratureSpec parse_quadrature(const json& cfg) {
  QuadratureSpec quad;
  if (!cfg.contains("quadrature")) return quad;
  const json& q = cfg["quadrature"];
  check_keys(q, {"node_count", "panel_count", "abs_tol", "rel_tol"}, "quadrature");
  quad.node_count = static_cast<int>(number_or(q, "node_count", quad.node_count, "quadrature"));
  quad.panel_count =
      static_cast<int>(number_or(q, "panel_count", quad.panel_count, "quadrature"));
  quad.abs_tol = number_or(q, "abs_tol", quad.abs_tol, "quadrature");
  quad.rel_tol = number_or(q, "rel_tol", quad.rel_tol, "quadrature");
  try {
    quad.validate();
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  return quad;
}

ArrayGeometry parse_array(const json& obj, double wavelength, const std::string& ctx) {
  check_keys(obj, {"n", "spacing"}, ctx);
  if (!obj.contains("n") || !obj.contains("spacing")) {
    fail(ctx + " requires keys 'n' and 'spacing'");
  }
  const int n = require_int(obj, "n", ctx);
  const double spacing = parse_length(obj["spacing"], wavelength, ctx + ".spacing");
  return ArrayGeometry(n, spacing, wavelength);
}

std::uint64_t resolve_seed(const json& cfg, const RunOptions& opt) {
  if (opt.seed) return *opt.seed;
  if (cfg.contains("seed")) {
    if (!cfg["seed"].is_number_unsigned() && !cfg["seed"].is_number_integer()) {
      fail("'seed' must be a non-negative integer");
    }
    return cfg["seed"].get<std::uint64_t>();
  }
  return 1;
}

int resolve_trials(const json& cfg, const RunOptions& opt, int fallback) {
  int trials = fallback;
  if (cfg.contains("trials")) trials = require_int(cfg, "trials", "config");
  if (opt.trials) trials = *opt.trials;
  if (trials < 1) fail("'trials' must be positive");
  return trials;
}

fs::path prepare_out_dir(const RunOptions& opt) {
  fs::path dir(opt.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec && !fs::exists(dir)) fail("cannot create output directory " + dir.string());
  return dir;
}

std::vector<double> parse_db_grid(const json& obj, const std::string& ctx) {
  check_keys(obj, {"min", "max", "step", "values"}, ctx);
  std::vector<double> grid;
  if (obj.contains("values")) {
    if (!obj["values"].is_array() || obj["values"].empty()) {
      fail(ctx + ".values must be a non-empty array");
    }
    for (const json& v : obj["values"]) grid.push_back(v.get<double>());
  } else {
    const double lo = require_number(obj, "min", ctx);
    const double hi = require_number(obj, "max", ctx);
    const double step = require_number(obj, "step", ctx);
    if (!(step > 0.0) || hi < lo) fail(ctx + ": empty or descending grid");
    for (double db = lo; db <= hi + 1e-9; db += step) grid.push_back(db);
  }
  if (grid.empty()) fail(ctx + ": empty grid");
  return grid;
}

// ---------------------------------------------------------------------------
// corr / delta-map
// ---------------------------------------------------------------------------

struct CorrConfig {
  ArrayGeometry geom{1, 0.5, 1.0};
  double wavelength = 1.0;
  std::optional<ClusterCenter> center;
  std::optional<AngularSpread> spread;
  QuadratureSpec quad;
  json delta_grid;  // empty when absent
};

CorrConfig parse_corr_config(const json& cfg, bool need_cluster, bool need_grid) {
  check_keys(cfg,
             {"command", "seed", "trials", "carrier_ghz", "array", "cluster", "quadrature",
              "delta_grid", "tool_version"},
             "config");
  const double carrier = require_number(cfg, "carrier_ghz", "config");
  if (!(carrier > 0.0)) fail("'carrier_ghz' must be positive");
  CorrConfig out;
  out.wavelength = 299792458.0 / (carrier * 1e9);
  if (!cfg.contains("array")) fail("config requires 'array'");
  out.geom = parse_array(cfg["array"], out.wavelength, "array");
  out.quad = parse_quadrature(cfg);
  if (cfg.contains("cluster")) {
    const json& c = cfg["cluster"];
    check_keys(c, {"distance", "angle_rad", "spread"}, "cluster");
    const double dist = parse_length(c.contains("distance") ? c["distance"] : json(),
                                     out.wavelength, "cluster.distance");
    const double angle = require_number(c, "angle_rad", "cluster");
    const double spread = require_number(c, "spread", "cluster");
    try {
      out.center.emplace(dist, angle);
      out.spread.emplace(angle, spread);
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  } else if (need_cluster) {
    fail("config requires 'cluster'");
  }
  if (cfg.contains("delta_grid")) {
    out.delta_grid = cfg["delta_grid"];
  } else if (need_grid) {
    fail("config requires 'delta_grid'");
  }
  return out;
}

void emit_delta_map(const CorrConfig& conf, const fs::path& dir, bool plots) {
  const json& g = conf.delta_grid;
  check_keys(g,
             {"distance_min", "distance_max", "distance_points", "distance_scale",
              "angle_min_rad", "angle_max_rad", "angle_points"},
             "delta_grid");
  const double dmin = parse_length(g.contains("distance_min") ? g["distance_min"] : json(),
                                   conf.wavelength, "delta_grid.distance_min");
  const double dmax = parse_length(g.contains("distance_max") ? g["distance_max"] : json(),
                                   conf.wavelength, "delta_grid.distance_max");
  const int dpoints = require_int(g, "distance_points", "delta_grid");
  const int apoints = require_int(g, "angle_points", "delta_grid");
  const double amin = require_number(g, "angle_min_rad", "delta_grid");
  const double amax = require_number(g, "angle_max_rad", "delta_grid");
  std::string scale = "log";
  if (g.contains("distance_scale")) scale = g["distance_scale"].get<std::string>();
  if (scale != "log" && scale != "linear") fail("delta_grid.distance_scale must be log|linear");
  if (dpoints < 1 || apoints < 1 || !(dmax >= dmin) || !(amax >= amin) || !(dmin > 0.0)) {
    fail("delta_grid: empty or invalid ranges");
  }

  CsvWriter csv((dir / "delta_map.csv").string(), {"d", "theta", "delta_minus_n"});
  std::vector<ChartSeries> series;
  for (int i = 0; i < dpoints; ++i) {
    const double frac = dpoints == 1 ? 0.0 : static_cast<double>(i) / (dpoints - 1);
    const double d = scale == "log" ? dmin * std::pow(dmax / dmin, frac)
                                    : dmin + (dmax - dmin) * frac;
    ChartSeries s;
    s.label = format_g9(d / conf.wavelength) + "lambda";
    for (int j = 0; j < apoints; ++j) {
      const double theta =
          apoints == 1 ? amin : amin + (amax - amin) * static_cast<double>(j) / (apoints - 1);
      const double delta =
          corr_trace_delta(conf.geom, ClusterCenter(d, theta)) - conf.geom.n_elements;
      csv.row({d, theta, delta});
      s.x.push_back(theta);
      s.y.push_back(delta);
    }
    if (plots && (dpoints <= 8 || i % std::max(1, dpoints / 8) == 0)) {
      series.push_back(std::move(s));
    }
  }
  if (plots) {
    write_svg_chart((dir / "delta_map.svg").string(), "steering norm excess vs angle", series);
  }
}

int cmd_corr(const json& cfg, const RunOptions& opt) {
  CorrConfig conf = parse_corr_config(cfg, /*need_cluster=*/true, /*need_grid=*/false);
  const fs::path dir = prepare_out_dir(opt);

  const CorrelationMatrix nf = nearfield_corr(conf.geom, *conf.center, *conf.spread, conf.quad);
  const CorrelationMatrix ff = farfield_corr(conf.geom, *conf.spread);
  const VectorXd nf_eigs = nf.eig().eigenvalues;
  const VectorXd ff_eigs = ff.eig().eigenvalues;

  CsvWriter csv((dir / "spectrum.csv").string(), {"index", "nearfield_eig", "farfield_eig"});
  for (int i = 0; i < conf.geom.n_elements; ++i) {
    csv.row({static_cast<double>(i + 1), nf_eigs[i], ff_eigs[i]});
  }
  if (opt.emit_plots) {
    ChartSeries a{"nearfield", {}, {}};
    ChartSeries b{"farfield", {}, {}};
    for (int i = 0; i < conf.geom.n_elements; ++i) {
      a.x.push_back(i + 1);
      a.y.push_back(nf_eigs[i]);
      b.x.push_back(i + 1);
      b.y.push_back(ff_eigs[i]);
    }
    write_svg_chart((dir / "spectrum.svg").string(), "correlation eigenvalues", {a, b});
  }
  if (!conf.delta_grid.is_null()) emit_delta_map(conf, dir, opt.emit_plots);
  return 0;
}

int cmd_delta_map(const json& cfg, const RunOptions& opt) {
  CorrConfig conf = parse_corr_config(cfg, /*need_cluster=*/false, /*need_grid=*/true);
  emit_delta_map(conf, prepare_out_dir(opt), opt.emit_plots);
  return 0;
}

// ---------------------------------------------------------------------------
// se / outage
// ---------------------------------------------------------------------------

struct LinkConfig {
  LinkModel link;
  double wavelength;
  std::string route;
  std::string approximation;  // resolved: "ss" or "none"
  QuadratureSpec quad;
};

LinkConfig parse_link_config(const json& cfg, std::uint64_t seed) {
  check_keys(cfg,
             {"command", "seed", "trials", "carrier_ghz", "route", "approximation", "rx", "tx",
              "coupling", "path_loss_db", "clusters", "quadrature", "power_db", "threshold_db",
              "transmit_power_db", "tool_version"},
             "config");
  const double carrier = require_number(cfg, "carrier_ghz", "config");
  if (!(carrier > 0.0)) fail("'carrier_ghz' must be positive");
  const double wavelength = 299792458.0 / (carrier * 1e9);

  if (!cfg.contains("rx") || !cfg.contains("tx")) fail("config requires 'rx' and 'tx' arrays");
  ArrayGeometry rx = parse_array(cfg["rx"], wavelength, "rx");
  ArrayGeometry tx = parse_array(cfg["tx"], wavelength, "tx");

  std::string route = "analytical";
  if (cfg.contains("route")) route = cfg["route"].get<std::string>();
  if (route != "ss" && route != "ds" && route != "analytical") {
    fail("'route' must be one of ss|ds|analytical");
  }
  std::string approx = "auto";
  if (cfg.contains("approximation")) approx = cfg["approximation"].get<std::string>();
  if (approx != "auto" && approx != "ss" && approx != "none") {
    fail("'approximation' must be one of auto|ss|none");
  }
  if (approx == "ss" && route == "ds") {
    fail("approximation 'ss' is not defined for the ds route");
  }
  if (approx == "auto") approx = (route == "ss") ? "ss" : "none";

  std::string coupling_mode = "diagonal";
  if (cfg.contains("coupling")) coupling_mode = cfg["coupling"].get<std::string>();
  if (coupling_mode != "diagonal" && coupling_mode != "dense") {
    fail("'coupling' must be diagonal|dense");
  }
  if (approx == "ss" && coupling_mode != "diagonal") {
    fail("approximation 'ss' requires diagonal coupling");
  }

  if (!cfg.contains("clusters")) fail("config requires 'clusters'");
  const json& cl = cfg["clusters"];
  std::vector<ClusterSpec> rx_clusters, tx_clusters;
  const RngStream seed_stream(seed, 0xC1);
  if (cl.contains("count")) {
    check_keys(cl, {"count", "rx_distance", "tx_distance", "angle_rad", "spread"}, "clusters");
    const int count = require_int(cl, "count", "clusters");
    if (count < 1) fail("clusters.count must be >= 1");
    const double spread = require_number(cl, "spread", "clusters");
    const auto range = [&](const char* key, double wl) -> std::pair<double, double> {
      if (!cl.contains(key)) fail(std::string("clusters.") + key + " required");
      const json& r = cl[key];
      if (!r.is_array() || r.size() != 2) fail(std::string("clusters.") + key + " must be [lo, hi]");
      return {parse_length(r[0], wl, key), parse_length(r[1], wl, key)};
    };
    const auto [rd_lo, rd_hi] = range("rx_distance", wavelength);
    const auto [td_lo, td_hi] = range("tx_distance", wavelength);
    if (!cl.contains("angle_rad") || !cl["angle_rad"].is_array() || cl["angle_rad"].size() != 2) {
      fail("clusters.angle_rad must be [lo, hi]");
    }
    const double a_lo = cl["angle_rad"][0].get<double>();
    const double a_hi = cl["angle_rad"][1].get<double>();
    RngStream rx_geom_stream = seed_stream.derive(1);
    RngStream tx_geom_stream = seed_stream.derive(2);
    try {
      for (int i = 0; i < count; ++i) {
        const double rd = rx_geom_stream.uniform(rd_lo, rd_hi);
        const double ra = rx_geom_stream.uniform(a_lo, a_hi);
        rx_clusters.push_back({ClusterCenter(rd, ra), AngularSpread(ra, spread)});
        const double td = tx_geom_stream.uniform(td_lo, td_hi);
        const double ta = tx_geom_stream.uniform(a_lo, a_hi);
        tx_clusters.push_back({ClusterCenter(td, ta), AngularSpread(ta, spread)});
      }
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  } else {
    check_keys(cl, {"rx", "tx"}, "clusters");
    const auto parse_list = [&](const char* key) {
      if (!cl.contains(key) || !cl[key].is_array() || cl[key].empty()) {
        fail(std::string("clusters.") + key + " must be a non-empty array");
      }
      std::vector<ClusterSpec> list;
      for (const json& c : cl[key]) {
        check_keys(c, {"distance", "angle_rad", "spread"}, "clusters entry");
        const double d = parse_length(c.contains("distance") ? c["distance"] : json(),
                                      wavelength, "clusters entry distance");
        const double a = require_number(c, "angle_rad", "clusters entry");
        const double s = require_number(c, "spread", "clusters entry");
        try {
          list.push_back({ClusterCenter(d, a), AngularSpread(a, s)});
        } catch (const std::invalid_argument& e) {
          fail(e.what());
        }
      }
      return list;
    };
    rx_clusters = parse_list("rx");
    tx_clusters = parse_list("tx");
    if (rx_clusters.size() != tx_clusters.size()) {
      fail("explicit cluster lists must have matching lengths");
    }
  }

  const int paths = static_cast<int>(rx_clusters.size());
  CouplingMatrix coupling = coupling_mode == "diagonal"
                                ? CouplingMatrix::make_diagonal(paths, seed_stream.derive(3))
                                : CouplingMatrix::make_dense(paths, seed_stream.derive(3));

  const double pl_db = number_or(cfg, "path_loss_db", 0.0, "config");
  LinkConfig out{LinkModel{std::move(tx), std::move(rx), std::move(tx_clusters),
                           std::move(rx_clusters), std::move(coupling),
                           std::pow(10.0, -pl_db / 10.0)},
                 wavelength, route, approx, parse_quadrature(cfg)};
  out.link.validate();
  return out;
}

RealizationFn make_route_fn(const LinkConfig& conf, const CorrCache& cache,
                            const CorrelationMatrix& mean_rx, const CorrelationMatrix& mean_tx,
                            const RngStream& base) {
  if (conf.route == "ss") {
    return [&conf, &cache, base](int t) {
      return synth_ss(conf.link, cache, base.derive(t), /*truncate_rank1=*/true).matrix;
    };
  }
  if (conf.route == "ds") {
    return [&conf, &mean_rx, &mean_tx, base](int t) {
      return synth_ds(conf.link, mean_rx, mean_tx, base.derive(t)).matrix;
    };
  }
  return [&conf, &cache, base](int t) {
    return synth_analytical(conf.link, cache, base.derive(t)).matrix;
  };
}

int cmd_se(const json& cfg, const RunOptions& opt) {
  const std::uint64_t seed = resolve_seed(cfg, opt);
  const LinkConfig conf = parse_link_config(cfg, seed);
  if (!cfg.contains("power_db")) fail("config requires 'power_db' grid");
  const std::vector<double> grid_db = parse_db_grid(cfg["power_db"], "power_db");
  const int trials = resolve_trials(cfg, opt, 10000);
  const fs::path dir = prepare_out_dir(opt);

  const CorrCache cache = build_corr_cache(conf.link, conf.quad);
  const CorrelationMatrix mean_rx = mean_corr(cache.rx);
  const CorrelationMatrix mean_tx = mean_corr(cache.tx);
  mean_rx.cache_eig();
  mean_tx.cache_eig();
  const RngStream base(seed, 0xE0);
  const RealizationFn fn = make_route_fn(conf, cache, mean_rx, mean_tx, base);

  const int n_tx = conf.link.tx_geom.n_elements;
  std::vector<double> gammas;
  for (double db : grid_db) gammas.push_back(std::pow(10.0, db / 10.0) / n_tx);
  const std::vector<McEstimate> mc =
      ergodic_se_mc_grid(fn, trials, gammas, opt.resolved_threads());

  std::optional<SsLinkSummary> summary;
  if (conf.approximation == "ss" || conf.route == "ss") {
    summary = make_ss_summary(conf.link, cache);
  }
  const bool ds_bound = conf.route == "ds" && conf.link.rx_geom.n_elements <= 12 &&
                        conf.link.tx_geom.n_elements <= 12 &&
                        conf.link.coupling.tx_count() <= 12;
  VectorXd lam_rx, lam_tx, lam_c;
  if (ds_bound) {
    lam_rx = mean_rx.eig().eigenvalues;
    lam_tx = mean_tx.eig().eigenvalues;
    const MatrixXcd& a = conf.link.coupling.entries();
    lam_c = hermitian_eig(MatrixXcd(a.adjoint() * a)).eigenvalues;
  }

  CsvWriter csv((dir / "se.csv").string(),
                {"power_db", "mc_estimate", "mc_stderr", "approx", "upper_bound"});
  ChartSeries mc_s{"mc", {}, {}}, ap_s{"approx", {}, {}}, ub_s{"upper_bound", {}, {}};
  for (std::size_t i = 0; i < grid_db.size(); ++i) {
    std::optional<double> approx, upper;
    if (summary && conf.approximation == "ss") approx = se_ss_approx(*summary, gammas[i]);
    if (summary) upper = se_ss_upper(*summary, gammas[i]);
    if (ds_bound) upper = se_ds_upper(lam_rx, lam_tx, lam_c, gammas[i]);
    csv.row({grid_db[i], mc[i].mean, mc[i].stderr_, approx, upper});
    mc_s.x.push_back(grid_db[i]);
    mc_s.y.push_back(mc[i].mean);
    if (approx) ap_s.x.push_back(grid_db[i]), ap_s.y.push_back(*approx);
    if (upper) ub_s.x.push_back(grid_db[i]), ub_s.y.push_back(*upper);
  }
  if (opt.emit_plots) {
    std::vector<ChartSeries> series{mc_s};
    if (!ap_s.x.empty()) series.push_back(ap_s);
    if (!ub_s.x.empty()) series.push_back(ub_s);
    write_svg_chart((dir / "se.svg").string(), "ergodic spectral efficiency", series);
  }
  return 0;
}

int cmd_outage(const json& cfg, const RunOptions& opt) {
  const std::uint64_t seed = resolve_seed(cfg, opt);
  const LinkConfig conf = parse_link_config(cfg, seed);
  if (!cfg.contains("threshold_db")) fail("config requires 'threshold_db' grid");
  const std::vector<double> grid_db = parse_db_grid(cfg["threshold_db"], "threshold_db");
  const double power_db = number_or(cfg, "transmit_power_db", 0.0, "config");
  const double gamma_bar = std::pow(10.0, power_db / 10.0);
  const int trials = resolve_trials(cfg, opt, 10000);
  const fs::path dir = prepare_out_dir(opt);

  const CorrCache cache = build_corr_cache(conf.link, conf.quad);
  const CorrelationMatrix mean_rx = mean_corr(cache.rx);
  const CorrelationMatrix mean_tx = mean_corr(cache.tx);
  mean_rx.cache_eig();
  mean_tx.cache_eig();
  const RngStream base(seed, 0xE1);
  const RealizationFn fn = make_route_fn(conf, cache, mean_rx, mean_tx, base);

  std::vector<double> thresholds;
  for (double db : grid_db) thresholds.push_back(std::pow(10.0, db / 10.0));
  const std::vector<OutageEstimate> mc =
      outage_mc_grid(fn, trials, gamma_bar, thresholds, opt.resolved_threads());

  std::optional<SsLinkSummary> summary;
  if (conf.approximation == "ss") summary = make_ss_summary(conf.link, cache);

  CsvWriter csv((dir / "outage.csv").string(),
                {"threshold_db", "mc_estimate", "mc_stderr", "approx", "upper_bound"});
  ChartSeries mc_s{"mc", {}, {}}, ap_s{"approx", {}, {}};
  for (std::size_t i = 0; i < grid_db.size(); ++i) {
    std::optional<double> approx;
    if (summary) approx = op_ss_approx(*summary, gamma_bar, thresholds[i]);
    csv.row({grid_db[i], mc[i].probability, mc[i].wilson_half_width(), approx, std::nullopt});
    mc_s.x.push_back(grid_db[i]);
    mc_s.y.push_back(mc[i].probability);
    if (approx) ap_s.x.push_back(grid_db[i]), ap_s.y.push_back(*approx);
  }
  if (opt.emit_plots) {
    std::vector<ChartSeries> series{mc_s};
    if (!ap_s.x.empty()) series.push_back(ap_s);
    write_svg_chart((dir / "outage.svg").string(), "outage probability", series);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// compare
// ---------------------------------------------------------------------------

SystemSetup parse_setup(const json& obj, std::size_t index) {
  const std::string ctx = "setups[" + std::to_string(index) + "]";
  check_keys(obj,
             {"name", "carrier_ghz", "n_tx", "n_rx", "bandwidth_mhz", "coupling",
              "tx_rx_distance_m", "cluster_distance_m", "cluster_angle_rad", "spread",
              "rays_per_cluster", "spacing_lambda"},
             ctx);
  SystemSetup s;
  s.name = obj.contains("name") ? obj["name"].get<std::string>() : "setup" + std::to_string(index);
  for (char c : s.name) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') {
      fail(ctx + ".name must be alphanumeric/underscore/dash");
    }
  }
  s.carrier_ghz = require_number(obj, "carrier_ghz", ctx);
  s.n_tx = require_int(obj, "n_tx", ctx);
  s.n_rx = require_int(obj, "n_rx", ctx);
  s.bandwidth_mhz = require_number(obj, "bandwidth_mhz", ctx);
  if (obj.contains("coupling")) {
    const std::string mode = obj["coupling"].get<std::string>();
    if (mode == "diagonal") {
      s.coupling_mode = CouplingMatrix::Sparsity::diagonal;
    } else if (mode == "dense") {
      s.coupling_mode = CouplingMatrix::Sparsity::dense;
    } else {
      fail(ctx + ".coupling must be diagonal|dense");
    }
  }
  s.tx_rx_distance_m = number_or(obj, "tx_rx_distance_m", s.tx_rx_distance_m, ctx);
  if (obj.contains("cluster_distance_m")) {
    const json& r = obj["cluster_distance_m"];
    if (!r.is_array() || r.size() != 2) fail(ctx + ".cluster_distance_m must be [lo, hi]");
    s.cluster_distance_min_m = r[0].get<double>();
    s.cluster_distance_max_m = r[1].get<double>();
  }
  if (obj.contains("cluster_angle_rad")) {
    const json& r = obj["cluster_angle_rad"];
    if (!r.is_array() || r.size() != 2) fail(ctx + ".cluster_angle_rad must be [lo, hi]");
    s.cluster_angle_min_rad = r[0].get<double>();
    s.cluster_angle_max_rad = r[1].get<double>();
  }
  s.angular_spread = number_or(obj, "spread", s.angular_spread, ctx);
  if (obj.contains("rays_per_cluster")) s.rays_per_cluster = require_int(obj, "rays_per_cluster", ctx);
  s.spacing_wavelengths = number_or(obj, "spacing_lambda", s.spacing_wavelengths, ctx);
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    fail(ctx + ": " + e.what());
  }
  return s;
}

json setup_to_json(const SystemSetup& s) {
  json out;
  out["name"] = s.name;
  out["carrier_ghz"] = s.carrier_ghz;
  out["n_tx"] = s.n_tx;
  out["n_rx"] = s.n_rx;
  out["bandwidth_mhz"] = s.bandwidth_mhz;
  out["coupling"] =
      s.coupling_mode == CouplingMatrix::Sparsity::diagonal ? "diagonal" : "dense";
  out["tx_rx_distance_m"] = s.tx_rx_distance_m;
  out["cluster_distance_m"] = {s.cluster_distance_min_m, s.cluster_distance_max_m};
  out["cluster_angle_rad"] = {s.cluster_angle_min_rad, s.cluster_angle_max_rad};
  out["spread"] = s.angular_spread;
  out["rays_per_cluster"] = s.rays_per_cluster;
  out["spacing_lambda"] = s.spacing_wavelengths;
  return out;
}

int cmd_compare(const json& cfg, const RunOptions& opt) {
  check_keys(cfg,
             {"command", "seed", "trials", "transmit_power_db", "setups", "quadrature",
              "tool_version"},
             "config");
  if (!cfg.contains("setups") || !cfg["setups"].is_array()) fail("config requires 'setups' array");
  if (cfg["setups"].size() < 2) fail("compare requires at least two setups");
  std::vector<SystemSetup> setups;
  for (std::size_t i = 0; i < cfg["setups"].size(); ++i) {
    setups.push_back(parse_setup(cfg["setups"][i], i));
  }
  const double power_db = number_or(cfg, "transmit_power_db", 40.0, "config");
  const std::uint64_t seed = resolve_seed(cfg, opt);
  const int trials = resolve_trials(cfg, opt, 1000);
  const QuadratureSpec quad = parse_quadrature(cfg);
  const fs::path dir = prepare_out_dir(opt);

  const RngStream stream(seed, 0xC0);
  const ComparisonResult result =
      run_comparison(setups, trials, power_db, stream, opt.resolved_threads(), quad);

  for (const SetupResult& r : result.per_setup) {
    CsvWriter cap((dir / ("capacity_cdf_" + r.name + ".csv")).string(), {"value", "cdf"});
    for (int i = 0; i < r.capacity_bits_per_s.values.size(); ++i) {
      cap.row({r.capacity_bits_per_s.values[i],
               static_cast<double>(i + 1) / result.trials});
    }
    CsvWriter snr((dir / ("snr_cdf_" + r.name + ".csv")).string(), {"value", "cdf"});
    for (int i = 0; i < r.receive_snr_db.values.size(); ++i) {
      snr.row({r.receive_snr_db.values[i], static_cast<double>(i + 1) / result.trials});
    }
  }
  if (opt.emit_plots) {
    std::vector<ChartSeries> cap_series, snr_series;
    for (const SetupResult& r : result.per_setup) {
      ChartSeries c{r.name, {}, {}}, s{r.name, {}, {}};
      for (int i = 0; i < r.capacity_bits_per_s.values.size(); ++i) {
        c.x.push_back(r.capacity_bits_per_s.values[i]);
        c.y.push_back(static_cast<double>(i + 1) / result.trials);
        s.x.push_back(r.receive_snr_db.values[i]);
        s.y.push_back(static_cast<double>(i + 1) / result.trials);
      }
      cap_series.push_back(std::move(c));
      snr_series.push_back(std::move(s));
    }
    write_svg_chart((dir / "capacity_cdf.svg").string(), "capacity CDF", cap_series);
    write_svg_chart((dir / "snr_cdf.svg").string(), "receive SNR CDF", snr_series);
  }

  json manifest;
  manifest["tool_version"] = kToolVersion;
  manifest["command"] = "compare";
  manifest["seed"] = seed;
  manifest["trials"] = trials;
  manifest["transmit_power_db"] = power_db;
  manifest["setups"] = json::array();
  for (const SystemSetup& s : setups) manifest["setups"].push_back(setup_to_json(s));
  {
    QuadratureSpec q = quad;
    manifest["quadrature"] = {{"node_count", q.node_count},
                              {"panel_count", q.panel_count},
                              {"abs_tol", q.abs_tol},
                              {"rel_tol", q.rel_tol}};
  }
  std::ofstream mf(dir / "manifest.json");
  mf << manifest.dump(2) << '\n';
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"near-field XL-MIMO channel-model analysis toolkit"};
  app.require_subcommand(1);

  RunOptions opt;
  std::uint64_t seed_flag = 0;
  int trials_flag = 0;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "JSON configuration file")->required();
    sub->add_option("--seed", seed_flag, "master seed override");
    sub->add_option("--trials", trials_flag, "Monte-Carlo trial count override");
    sub->add_option("--out", opt.out_dir, "output directory");
    sub->add_option("--threads", opt.threads, "worker thread count (results are unaffected)");
    sub->add_flag("--emit-plots", opt.emit_plots, "also write quick-look SVG charts");
  };

  CLI::App* corr = app.add_subcommand("corr", "correlation eigen-spectra and trace maps");
  CLI::App* se = app.add_subcommand("se", "ergodic spectral efficiency sweeps");
  CLI::App* outage = app.add_subcommand("outage", "beamforming outage sweeps");
  CLI::App* compare = app.add_subcommand("compare", "cross-configuration comparison study");
  CLI::App* delta_map = app.add_subcommand("delta-map", "steering-norm excess over (d, theta)");
  for (CLI::App* sub : {corr, se, outage, compare, delta_map}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  {
    CLI::App* active = app.get_subcommands().front();
    if (active->count("--seed") > 0) opt.seed = seed_flag;
    if (active->count("--trials") > 0) opt.trials = trials_flag;
  }

  try {
    const json cfg = load_config(opt.config_path);
    if (cfg.contains("command") && cfg["command"].is_string()) {
      const std::string declared = cfg["command"].get<std::string>();
      const std::string invoked = app.get_subcommands().front()->get_name();
      if (declared != invoked) {
        fail("config declares command '" + declared + "' but '" + invoked + "' was invoked");
      }
    }
    if (corr->parsed()) return cmd_corr(cfg, opt);
    if (se->parsed()) return cmd_se(cfg, opt);
    if (outage->parsed()) return cmd_outage(cfg, opt);
    if (compare->parsed()) return cmd_compare(cfg, opt);
    if (delta_map->parsed()) return cmd_delta_map(cfg, opt);
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const NonConvergenceError& e) {
    std::cerr << "numerical non-convergence: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace xlmimo
