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

#pragma once

#include <string>
#include <vector>

#include "xlmimo/channel.hpp"
#include "xlmimo/metrics.hpp"
#include "xlmimo/rng.hpp"

namespace xlmimo {

/// Urban-micro line-of-sight path loss in dB:
/// 32.4 + 21 log10(d) + 20 log10(f), d in meters, f in GHz.
double umi_path_loss_db(double d_tr_m, double f_c_ghz);

/// Empirical cluster-count law 3.41 e^{-0.17 f} + 1.86 (f in GHz).
double cluster_count_raw(double f_c_ghz);
/// Rounded to the nearest integer, floored at one cluster.
int cluster_count(double f_c_ghz);

/// One practical system configuration (carrier, arrays, bandwidth, coupling
/// regime, and the sampling ranges for cluster geometry).
struct SystemSetup {
  std::string name;
  double carrier_ghz = 7.0;
  int n_tx = 8;
  int n_rx = 8;
  double bandwidth_mhz = 100.0;
  CouplingMatrix::Sparsity coupling_mode = CouplingMatrix::Sparsity::diagonal;
  double tx_rx_distance_m = 20.0;
  double cluster_distance_min_m = 10.0;
  double cluster_distance_max_m = 15.0;
  double cluster_angle_min_rad = -kPi / 3.0;
  double cluster_angle_max_rad = kPi / 3.0;
  double angular_spread = 0.01;  // rho per ray
  int rays_per_cluster = 5;
  double spacing_wavelengths = 0.5;

  void validate() const;
};

/// The three reference configurations compared in the cross-band study.
SystemSetup reference_setup_sub6();                 // 3.5 GHz, 32x4, 100 MHz, diagonal
SystemSetup reference_setup_midband(int n_tx);      // 7 GHz, {128,256,1024}x8, 500 MHz
SystemSetup reference_setup_mmwave();               // 28 GHz, 512x16, 1600 MHz, dense

/// Samples cluster geometry (cluster_count clusters, each realized as
/// rays_per_cluster co-located rays), builds the coupling matrix, and applies
/// the UMi path loss as a linear amplitude factor.
LinkModel build_link(const SystemSetup& setup, const RngStream& stream);

/// Sorted empirical distribution; probabilities are (i+1)/n.
struct EmpiricalCdf {
  VectorXd values;

  double fraction_at_or_below(double x) const;
  double quantile(double p) const;
};

struct SetupResult {
  std::string name;
  EmpiricalCdf capacity_bits_per_s;
  EmpiricalCdf receive_snr_db;
};

struct ComparisonResult {
  std::vector<SetupResult> per_setup;
  int trials = 0;
  std::uint64_t seed = 0;
};

/// Monte-Carlo cross-configuration study: per trial draws an analytical-route
/// channel and records bandwidth-scaled capacity and the beamforming receive
/// SNR.  Cluster geometry is drawn once per setup from the master stream;
/// trials vary only the fading.
ComparisonResult run_comparison(const std::vector<SystemSetup>& setups, int trials,
                                double transmit_power_db, const RngStream& stream,
                                int threads = 1, const QuadratureSpec& quad = {});

}  // namespace xlmimo
