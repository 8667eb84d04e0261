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

#include <cstdint>
#include <utility>
#include <vector>

#include "xlmimo/correlation.hpp"
#include "xlmimo/geometry.hpp"
#include "xlmimo/rng.hpp"
#include "xlmimo/types.hpp"

namespace xlmimo {

/// Power coupling between receive-side and transmit-side clusters.  The
/// squared entries sum to one so the coupling only allocates power.
class CouplingMatrix {
 public:
  enum class Sparsity { diagonal, dense };

  CouplingMatrix(MatrixXcd entries, Sparsity tag);

  const MatrixXcd& entries() const { return entries_; }
  Sparsity sparsity() const { return tag_; }
  Eigen::Index rx_count() const { return entries_.rows(); }
  Eigen::Index tx_count() const { return entries_.cols(); }

  /// Equal-magnitude diagonal allocation with random phases.
  static CouplingMatrix make_diagonal(int paths, const RngStream& stream);
  /// A_w A_w^H with i.i.d. CN(0,1) entries, normalized to unit Frobenius norm.
  static CouplingMatrix make_dense(int paths, const RngStream& stream);

 private:
  MatrixXcd entries_;
  Sparsity tag_;
};

/// One cluster as the synthesis modules see it: center position plus angular
/// spread.
struct ClusterSpec {
  ClusterCenter center;
  AngularSpread spread;
};

/// Complete point-to-point link description.  path_loss is the linear power
/// attenuation; its square root scales every synthesized channel matrix.
struct LinkModel {
  ArrayGeometry tx_geom;
  ArrayGeometry rx_geom;
  std::vector<ClusterSpec> tx_clusters;
  std::vector<ClusterSpec> rx_clusters;
  CouplingMatrix coupling;
  double path_loss = 1.0;

  void validate() const;
};

/// Per-cluster spatial correlation matrices shared across realizations.
struct CorrCache {
  std::vector<CorrelationMatrix> rx;
  std::vector<CorrelationMatrix> tx;
};

/// Builds (and eigen-warms) the per-cluster correlation matrices of a link.
CorrCache build_corr_cache(const LinkModel& link, const QuadratureSpec& quad = {},
                           DistanceMode mode = DistanceMode::fresnel);

enum class Provenance { oracle, analytical, ss_equivalent, ds_equivalent };

struct ChannelRealization {
  MatrixXcd matrix;
  Provenance provenance;
  std::uint64_t master_seed;
  std::uint64_t stream_id;
};

/// Scatterer-level channel for one cluster pair:
///   amplitude / sqrt(Qr Qt) * sum_{qr,qt} e^{j phi}
///     (g_r e^{-j k Dr}/c_r)(g_t e^{+j k Dt}/c_t).
MatrixXcd oracle_pair_channel(const ArrayGeometry& rx_geom, const ArrayGeometry& tx_geom,
                              const std::vector<ScattererParam>& rx_scatterers,
                              const std::vector<ScattererParam>& tx_scatterers,
                              const VectorXcd& rx_gains, const VectorXcd& tx_gains,
                              const MatrixXd& phases, double amplitude,
                              DistanceMode mode = DistanceMode::fresnel);

/// Electromagnetic reference synthesis: explicit scatterers drawn from each
/// cluster's angular density, gains CN(0,1), phases U(-pi, pi).
ChannelRealization synth_oracle(const LinkModel& link, int q_per_cluster,
                                const RngStream& stream,
                                DistanceMode mode = DistanceMode::fresnel);

/// Karhunen-Loeve draw: per-cluster ray vectors through the correlation
/// square roots, combined as sqrt(PL) H_R A H_T^H.
ChannelRealization synth_analytical(const LinkModel& link, const CorrCache& cache,
                                    const RngStream& stream);

/// Analytical draw that also exposes the per-cluster ray vectors (columns of
/// H_R and H_T) for statistical validation.
struct AnalyticalDraw {
  MatrixXcd rx_rays;
  MatrixXcd tx_rays;
  MatrixXcd channel;
};
AnalyticalDraw synth_analytical_draw(const LinkModel& link, const CorrCache& cache,
                                     const RngStream& stream);

/// Rank-1-cluster equivalent synthesis Pi_R Lambda_R A Lambda_T^H Pi_T^H.
/// Requires diagonal-like coupling and per-cluster eigenvalue ratios
/// lambda_2/lambda_1 <= 1e-2 unless truncate_rank1 forces the dominant pair.
ChannelRealization synth_ss(const LinkModel& link, const CorrCache& cache,
                            const RngStream& stream, bool truncate_rank1 = false);

/// Double-scattering equivalent synthesis using the side-average correlation
/// matrices: sqrt(PL) Theta_R^{1/2} H_wR A H_wT^H Theta_T^{H/2}.
ChannelRealization synth_ds(const LinkModel& link, const CorrelationMatrix& mean_rx,
                            const CorrelationMatrix& mean_tx, const RngStream& stream);

/// Transmit/receive eigenmodes of the link: eigen-systems of
/// sum |alpha|^2 Tr(Theta_rx) Theta_tx and the mirrored receive form.
struct LinkEigenmodes {
  HermitianEig tx;
  HermitianEig rx;
};
LinkEigenmodes eigenmodes(const LinkModel& link, const CorrCache& cache);

/// Kronecker product Theta_rx (x) Theta_tx of two correlation matrices.
MatrixXcd kron_joint_corr(const CorrelationMatrix& rx, const CorrelationMatrix& tx);

}  // namespace xlmimo
