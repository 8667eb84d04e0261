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

#include "xlmimo/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "xlmimo/parallel.hpp"

namespace xlmimo {

namespace {

constexpr double kSpeedOfLight = 299792458.0;

enum GeomTag : std::uint64_t {
  kRxClusterGeom = 21,
  kTxClusterGeom = 22,
  kCoupling = 23,
  kTrialBase = 24,
};

}  // namespace

double umi_path_loss_db(double d_tr_m, double f_c_ghz) {
  if (!(d_tr_m > 0.0) || !(f_c_ghz > 0.0)) {
    throw std::invalid_argument("umi_path_loss_db: distance and carrier must be positive");
  }
  return 32.4 + 21.0 * std::log10(d_tr_m) + 20.0 * std::log10(f_c_ghz);
}

double cluster_count_raw(double f_c_ghz) {
  if (!(f_c_ghz >= 0.0)) throw std::invalid_argument("cluster_count: carrier must be >= 0");
  return 3.41 * std::exp(-0.17 * f_c_ghz) + 1.86;
}

int cluster_count(double f_c_ghz) {
  if (!(f_c_ghz > 0.0)) throw std::invalid_argument("cluster_count: carrier must be positive");
  return std::max(1, static_cast<int>(std::lround(cluster_count_raw(f_c_ghz))));
}

void SystemSetup::validate() const {
  if (!(carrier_ghz >= 1.0 && carrier_ghz <= 100.0)) {
    throw std::invalid_argument("SystemSetup: carrier must lie in [1, 100] GHz");
  }
  if (n_tx < 1 || n_rx < 1) throw std::invalid_argument("SystemSetup: element counts must be >= 1");
  if (!(bandwidth_mhz > 0.0)) throw std::invalid_argument("SystemSetup: bandwidth must be positive");
  if (!(tx_rx_distance_m > 0.0)) {
    throw std::invalid_argument("SystemSetup: link distance must be positive");
  }
  if (!(cluster_distance_min_m > 0.0) || cluster_distance_max_m < cluster_distance_min_m) {
    throw std::invalid_argument("SystemSetup: bad cluster distance range");
  }
  if (cluster_angle_max_rad < cluster_angle_min_rad ||
      cluster_angle_min_rad <= -kPi / 2 || cluster_angle_max_rad >= kPi / 2) {
    throw std::invalid_argument("SystemSetup: cluster angles must lie inside (-pi/2, pi/2)");
  }
  if (!(angular_spread > 0.0)) throw std::invalid_argument("SystemSetup: spread must be positive");
  if (rays_per_cluster < 1) throw std::invalid_argument("SystemSetup: need at least one ray");
  if (!(spacing_wavelengths > 0.0)) {
    throw std::invalid_argument("SystemSetup: spacing must be positive");
  }
}

SystemSetup reference_setup_sub6() {
  SystemSetup s;
  s.name = "sub6_3p5ghz";
  s.carrier_ghz = 3.5;
  s.n_tx = 32;
  s.n_rx = 4;
  s.bandwidth_mhz = 100.0;
  s.coupling_mode = CouplingMatrix::Sparsity::diagonal;
  return s;
}

SystemSetup reference_setup_midband(int n_tx) {
  SystemSetup s;
  s.name = "midband_7ghz_" + std::to_string(n_tx);
  s.carrier_ghz = 7.0;
  s.n_tx = n_tx;
  s.n_rx = 8;
  s.bandwidth_mhz = 500.0;
  s.coupling_mode = CouplingMatrix::Sparsity::diagonal;
  return s;
}

SystemSetup reference_setup_mmwave() {
  SystemSetup s;
  s.name = "mmwave_28ghz";
  s.carrier_ghz = 28.0;
  s.n_tx = 512;
  s.n_rx = 16;
  s.bandwidth_mhz = 1600.0;
  s.coupling_mode = CouplingMatrix::Sparsity::dense;
  return s;
}

LinkModel build_link(const SystemSetup& setup, const RngStream& stream) {
  setup.validate();
  const double wavelength = kSpeedOfLight / (setup.carrier_ghz * 1e9);
  const double spacing = setup.spacing_wavelengths * wavelength;
  const ArrayGeometry tx_geom(setup.n_tx, spacing, wavelength);
  const ArrayGeometry rx_geom(setup.n_rx, spacing, wavelength);

  const int clusters = cluster_count(setup.carrier_ghz);
  const int paths = clusters * setup.rays_per_cluster;

  const auto draw_side = [&](GeomTag tag) {
    RngStream geom = stream.derive(tag);
    std::vector<ClusterSpec> specs;
    specs.reserve(paths);
    for (int c = 0; c < clusters; ++c) {
      const double dist =
          geom.uniform(setup.cluster_distance_min_m, setup.cluster_distance_max_m);
      const double center_angle =
          geom.uniform(setup.cluster_angle_min_rad, setup.cluster_angle_max_rad);
      const AngularSpread cluster_spread(center_angle, setup.angular_spread);
      for (int r = 0; r < setup.rays_per_cluster; ++r) {
        // Ray centers share the cluster's angular density; redraw the rare
        // sample that spills past the broadside limit.
        double ray_angle = 0.0;
        for (int attempt = 0; attempt < 64; ++attempt) {
          ray_angle = sample_vmd(geom, cluster_spread, 1)[0];
          if (std::abs(ray_angle) < kPi / 2 - 1e-6) break;
        }
        specs.push_back(ClusterSpec{ClusterCenter(dist, ray_angle),
                                    AngularSpread(ray_angle, setup.angular_spread)});
      }
    }
    return specs;
  };

  std::vector<ClusterSpec> rx_clusters = draw_side(kRxClusterGeom);
  std::vector<ClusterSpec> tx_clusters = draw_side(kTxClusterGeom);

  CouplingMatrix coupling =
      setup.coupling_mode == CouplingMatrix::Sparsity::diagonal
          ? CouplingMatrix::make_diagonal(paths, stream.derive(kCoupling))
          : CouplingMatrix::make_dense(paths, stream.derive(kCoupling));

  const double pl_db = umi_path_loss_db(setup.tx_rx_distance_m, setup.carrier_ghz);
  LinkModel link{tx_geom, rx_geom, std::move(tx_clusters), std::move(rx_clusters),
                 std::move(coupling), std::pow(10.0, -pl_db / 10.0)};
  link.validate();
  return link;
}

double EmpiricalCdf::fraction_at_or_below(double x) const {
  const double* begin = values.data();
  const double* end = begin + values.size();
  return static_cast<double>(std::upper_bound(begin, end, x) - begin) / values.size();
}

double EmpiricalCdf::quantile(double p) const {
  if (values.size() == 0) throw std::invalid_argument("EmpiricalCdf: empty");
  const double clamped = std::clamp(p, 0.0, 1.0);
  const Eigen::Index idx = std::min<Eigen::Index>(
      values.size() - 1, static_cast<Eigen::Index>(std::ceil(clamped * values.size())) - 1);
  return values[std::max<Eigen::Index>(idx, 0)];
}

ComparisonResult run_comparison(const std::vector<SystemSetup>& setups, int trials,
                                double transmit_power_db, const RngStream& stream,
                                int threads, const QuadratureSpec& quad) {
  if (trials < 100) throw std::invalid_argument("run_comparison: need at least 100 trials");
  if (setups.empty()) throw std::invalid_argument("run_comparison: need at least one setup");

  ComparisonResult result;
  result.trials = trials;
  result.seed = stream.master_seed();
  const double power = std::pow(10.0, transmit_power_db / 10.0);

  for (std::size_t s = 0; s < setups.size(); ++s) {
    const RngStream setup_stream = stream.derive(0x5E10 + s);
    const LinkModel link = build_link(setups[s], setup_stream);
    const CorrCache cache = build_corr_cache(link, quad);
    const double gamma = power / setups[s].n_tx;
    const double gamma_bar = power;
    const double bw_hz = setups[s].bandwidth_mhz * 1e6;

    std::vector<double> capacity(trials);
    std::vector<double> rsnr_db(trials);
    parallel_for(trials, threads, [&](int t) {
      const ChannelRealization real =
          synth_analytical(link, cache, setup_stream.derive(kTrialBase + t));
      const VectorXd eigs = gram_eigenvalues(real.matrix);
      double se = 0.0;
      for (int i = 0; i < eigs.size(); ++i) {
        se += std::log2(1.0 + gamma * std::max(eigs[i], 0.0));
      }
      capacity[t] = bw_hz * se;
      rsnr_db[t] = 10.0 * std::log10(gamma_bar * std::max(eigs[0], 1e-300));
    });

    std::sort(capacity.begin(), capacity.end());
    std::sort(rsnr_db.begin(), rsnr_db.end());
    SetupResult out;
    out.name = setups[s].name;
    out.capacity_bits_per_s.values = Eigen::Map<VectorXd>(capacity.data(), trials);
    out.receive_snr_db.values = Eigen::Map<VectorXd>(rsnr_db.data(), trials);
    result.per_setup.push_back(std::move(out));
  }
  return result;
}

}  // namespace xlmimo
