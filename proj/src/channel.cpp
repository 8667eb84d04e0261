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

#include "xlmimo/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace xlmimo {

namespace {

// Child-stream tags; stable so reordering synthesis code never changes the
// drawn randomness.
enum StreamTag : std::uint64_t {
  kRxGain = 1,
  kRxAngle = 2,
  kTxGain = 3,
  kTxAngle = 4,
  kPairPhase = 5,
  kRxRay = 6,
  kTxRay = 7,
  kSsRx = 8,
  kSsTx = 9,
  kDsRx = 10,
  kDsTx = 11,
};

RngStream child(const RngStream& stream, StreamTag tag, std::uint64_t index) {
  return stream.derive(static_cast<std::uint64_t>(tag) * 0x10000ull + index);
}

void check_finite(const MatrixXcd& m, const char* who) {
  if (!m.allFinite()) throw std::runtime_error(std::string(who) + ": non-finite entries");
}

}  // namespace

CouplingMatrix::CouplingMatrix(MatrixXcd entries, Sparsity tag)
    : entries_(std::move(entries)), tag_(tag) {
  if (entries_.size() == 0) throw std::invalid_argument("CouplingMatrix: empty");
  const double norm = entries_.norm();
  if (std::abs(norm - 1.0) > 1e-10) {
    throw std::invalid_argument("CouplingMatrix: squared entries must sum to 1");
  }
}

CouplingMatrix CouplingMatrix::make_diagonal(int paths, const RngStream& stream) {
  if (paths < 1) throw std::invalid_argument("CouplingMatrix: need at least one path");
  RngStream phases = stream.derive(0xA110C);
  MatrixXcd a = MatrixXcd::Zero(paths, paths);
  const double mag = 1.0 / std::sqrt(static_cast<double>(paths));
  for (int i = 0; i < paths; ++i) {
    a(i, i) = std::polar(mag, phases.uniform(-kPi, kPi));
  }
  return CouplingMatrix(std::move(a), Sparsity::diagonal);
}

CouplingMatrix CouplingMatrix::make_dense(int paths, const RngStream& stream) {
  if (paths < 1) throw std::invalid_argument("CouplingMatrix: need at least one path");
  RngStream gen = stream.derive(0xA110D);
  const MatrixXcd w = gen.cgauss_matrix(paths, paths);
  MatrixXcd a = w * w.adjoint();
  a /= a.norm();
  return CouplingMatrix(std::move(a), Sparsity::dense);
}

void LinkModel::validate() const {
  if (coupling.rx_count() != static_cast<Eigen::Index>(rx_clusters.size()) ||
      coupling.tx_count() != static_cast<Eigen::Index>(tx_clusters.size())) {
    throw std::invalid_argument("LinkModel: coupling dimensions must match cluster lists");
  }
  if (!(path_loss > 0.0)) throw std::invalid_argument("LinkModel: path_loss must be positive");
}

CorrCache build_corr_cache(const LinkModel& link, const QuadratureSpec& quad,
                           DistanceMode mode) {
  link.validate();
  CorrCache cache;
  cache.rx.reserve(link.rx_clusters.size());
  for (const ClusterSpec& c : link.rx_clusters) {
    cache.rx.push_back(nearfield_corr(link.rx_geom, c.center, c.spread, quad, mode));
    cache.rx.back().cache_eig();
  }
  cache.tx.reserve(link.tx_clusters.size());
  for (const ClusterSpec& c : link.tx_clusters) {
    cache.tx.push_back(nearfield_corr(link.tx_geom, c.center, c.spread, quad, mode));
    cache.tx.back().cache_eig();
  }
  return cache;
}

MatrixXcd oracle_pair_channel(const ArrayGeometry& rx_geom, const ArrayGeometry& tx_geom,
                              const std::vector<ScattererParam>& rx_scatterers,
                              const std::vector<ScattererParam>& tx_scatterers,
                              const VectorXcd& rx_gains, const VectorXcd& tx_gains,
                              const MatrixXd& phases, double amplitude, DistanceMode mode) {
  const int qr = static_cast<int>(rx_scatterers.size());
  const int qt = static_cast<int>(tx_scatterers.size());
  if (qr < 1 || qt < 1) throw std::invalid_argument("oracle_pair_channel: need scatterers");
  if (rx_gains.size() != qr || tx_gains.size() != qt || phases.rows() != qr ||
      phases.cols() != qt) {
    throw std::invalid_argument("oracle_pair_channel: inconsistent scatterer arrays");
  }

  const VectorXd eta_r = element_offsets(rx_geom);
  const VectorXd eta_t = element_offsets(tx_geom);
  const double kr = rx_geom.wave_number();
  const double kt = tx_geom.wave_number();

  MatrixXcd u(rx_geom.n_elements, qr);
  for (int q = 0; q < qr; ++q) {
    const ScattererParam& s = rx_scatterers[q];
    for (int n = 0; n < rx_geom.n_elements; ++n) {
      const double dist = point_distance(s.distance, s.angle, eta_r[n], mode);
      u(n, q) = rx_gains[q] * std::polar(s.distance / dist, -kr * dist);
    }
  }
  MatrixXcd v(tx_geom.n_elements, qt);
  for (int q = 0; q < qt; ++q) {
    const ScattererParam& s = tx_scatterers[q];
    for (int n = 0; n < tx_geom.n_elements; ++n) {
      const double dist = point_distance(s.distance, s.angle, eta_t[n], mode);
      v(n, q) = tx_gains[q] * std::polar(s.distance / dist, kt * dist);
    }
  }
  const MatrixXcd phase = phases.unaryExpr([](double p) { return std::polar(1.0, p); });
  return amplitude / std::sqrt(static_cast<double>(qr) * qt) * (u * phase * v.transpose());
}

ChannelRealization synth_oracle(const LinkModel& link, int q_per_cluster,
                                const RngStream& stream, DistanceMode mode) {
  link.validate();
  if (q_per_cluster < 1) throw std::invalid_argument("synth_oracle: need q_per_cluster >= 1");
  const int lr = static_cast<int>(link.rx_clusters.size());
  const int lt = static_cast<int>(link.tx_clusters.size());

  std::vector<std::vector<ScattererParam>> rx_scat(lr), tx_scat(lt);
  std::vector<VectorXcd> rx_gain(lr), tx_gain(lt);
  for (int l = 0; l < lr; ++l) {
    const ClusterSpec& c = link.rx_clusters[l];
    RngStream ang = child(stream, kRxAngle, l);
    const VectorXd angles = sample_vmd(ang, c.spread, q_per_cluster);
    for (int q = 0; q < q_per_cluster; ++q) {
      rx_scat[l].emplace_back(c.center.distance, angles[q]);
    }
    RngStream g = child(stream, kRxGain, l);
    rx_gain[l] = g.cgauss_vector(q_per_cluster);
  }
  for (int l = 0; l < lt; ++l) {
    const ClusterSpec& c = link.tx_clusters[l];
    RngStream ang = child(stream, kTxAngle, l);
    const VectorXd angles = sample_vmd(ang, c.spread, q_per_cluster);
    for (int q = 0; q < q_per_cluster; ++q) {
      tx_scat[l].emplace_back(c.center.distance, angles[q]);
    }
    RngStream g = child(stream, kTxGain, l);
    tx_gain[l] = g.cgauss_vector(q_per_cluster);
  }

  MatrixXcd h = MatrixXcd::Zero(link.rx_geom.n_elements, link.tx_geom.n_elements);
  for (int ir = 0; ir < lr; ++ir) {
    for (int it = 0; it < lt; ++it) {
      const Complex alpha = link.coupling.entries()(ir, it);
      if (std::abs(alpha) == 0.0) continue;
      RngStream ph = child(stream, kPairPhase, static_cast<std::uint64_t>(ir) * lt + it);
      MatrixXd phases(q_per_cluster, q_per_cluster);
      for (int a = 0; a < q_per_cluster; ++a) {
        for (int b = 0; b < q_per_cluster; ++b) phases(a, b) = ph.uniform(-kPi, kPi);
      }
      h += oracle_pair_channel(link.rx_geom, link.tx_geom, rx_scat[ir], tx_scat[it],
                               rx_gain[ir], tx_gain[it], phases, std::abs(alpha), mode);
    }
  }
  h *= std::sqrt(link.path_loss);
  check_finite(h, "synth_oracle");
  return {std::move(h), Provenance::oracle, stream.master_seed(), stream.stream_id()};
}

AnalyticalDraw synth_analytical_draw(const LinkModel& link, const CorrCache& cache,
                                     const RngStream& stream) {
  link.validate();
  const int lr = static_cast<int>(link.rx_clusters.size());
  const int lt = static_cast<int>(link.tx_clusters.size());
  if (static_cast<int>(cache.rx.size()) != lr || static_cast<int>(cache.tx.size()) != lt) {
    throw std::invalid_argument("synth_analytical: cache does not match link clusters");
  }
  AnalyticalDraw draw;
  draw.rx_rays.resize(link.rx_geom.n_elements, lr);
  for (int l = 0; l < lr; ++l) {
    const MatrixXcd& factor = cache.rx[l].sqrt_factor();
    RngStream g = child(stream, kRxRay, l);
    draw.rx_rays.col(l) = factor * g.cgauss_vector(static_cast<int>(factor.cols()));
  }
  draw.tx_rays.resize(link.tx_geom.n_elements, lt);
  for (int l = 0; l < lt; ++l) {
    const MatrixXcd& factor = cache.tx[l].sqrt_factor();
    RngStream g = child(stream, kTxRay, l);
    draw.tx_rays.col(l) = factor * g.cgauss_vector(static_cast<int>(factor.cols()));
  }
  draw.channel = std::sqrt(link.path_loss) *
                 (draw.rx_rays * link.coupling.entries() * draw.tx_rays.adjoint());
  check_finite(draw.channel, "synth_analytical");
  return draw;
}

ChannelRealization synth_analytical(const LinkModel& link, const CorrCache& cache,
                                    const RngStream& stream) {
  AnalyticalDraw draw = synth_analytical_draw(link, cache, stream);
  return {std::move(draw.channel), Provenance::analytical, stream.master_seed(),
          stream.stream_id()};
}

ChannelRealization synth_ss(const LinkModel& link, const CorrCache& cache,
                            const RngStream& stream, bool truncate_rank1) {
  link.validate();
  const int lr = static_cast<int>(link.rx_clusters.size());
  const int lt = static_cast<int>(link.tx_clusters.size());
  const MatrixXcd& a = link.coupling.entries();
  for (int i = 0; i < a.rows(); ++i) {
    int nonzero = 0;
    for (int j = 0; j < a.cols(); ++j) nonzero += std::abs(a(i, j)) > 1e-14;
    if (nonzero > 1) {
      throw std::invalid_argument("synth_ss: coupling must be diagonal-like (rows)");
    }
  }
  for (int j = 0; j < a.cols(); ++j) {
    int nonzero = 0;
    for (int i = 0; i < a.rows(); ++i) nonzero += std::abs(a(i, j)) > 1e-14;
    if (nonzero > 1) {
      throw std::invalid_argument("synth_ss: coupling must be diagonal-like (columns)");
    }
  }

  const auto dominant = [&](const CorrelationMatrix& corr, const char* side) {
    const HermitianEig& eig = corr.eig();
    if (!truncate_rank1 && eig.eigenvalues.size() > 1 &&
        eig.eigenvalues[1] > 1e-2 * eig.eigenvalues[0]) {
      throw std::invalid_argument(std::string("synth_ss: ") + side +
                                  " cluster is not effectively rank-1");
    }
    return std::make_pair(eig.eigenvalues[0], VectorXcd(eig.eigenvectors.col(0)));
  };

  MatrixXcd pi_r(link.rx_geom.n_elements, lr);
  VectorXcd lam_r(lr);
  for (int l = 0; l < lr; ++l) {
    auto [chi, u] = dominant(cache.rx[l], "rx");
    pi_r.col(l) = u;
    RngStream g = child(stream, kSsRx, l);
    lam_r[l] = std::sqrt(chi) * g.cgauss();
  }
  MatrixXcd pi_t(link.tx_geom.n_elements, lt);
  VectorXcd lam_t(lt);
  for (int l = 0; l < lt; ++l) {
    auto [chi, u] = dominant(cache.tx[l], "tx");
    pi_t.col(l) = u;
    RngStream g = child(stream, kSsTx, l);
    lam_t[l] = std::sqrt(chi) * g.cgauss();
  }

  const VectorXcd lam_t_conj = lam_t.conjugate();
  MatrixXcd h = std::sqrt(link.path_loss) *
                (pi_r * lam_r.asDiagonal() * a * lam_t_conj.asDiagonal() * pi_t.adjoint());
  check_finite(h, "synth_ss");
  return {std::move(h), Provenance::ss_equivalent, stream.master_seed(), stream.stream_id()};
}

ChannelRealization synth_ds(const LinkModel& link, const CorrelationMatrix& mean_rx,
                            const CorrelationMatrix& mean_tx, const RngStream& stream) {
  link.validate();
  if (mean_rx.dim() != link.rx_geom.n_elements || mean_tx.dim() != link.tx_geom.n_elements) {
    throw std::invalid_argument("synth_ds: mean correlation dimensions mismatch");
  }
  const MatrixXcd& br = mean_rx.sqrt_factor();
  const MatrixXcd& bt = mean_tx.sqrt_factor();
  RngStream gr = child(stream, kDsRx, 0);
  RngStream gt = child(stream, kDsTx, 0);
  const MatrixXcd hw_r =
      gr.cgauss_matrix(static_cast<int>(br.cols()), static_cast<int>(link.rx_clusters.size()));
  const MatrixXcd hw_t =
      gt.cgauss_matrix(static_cast<int>(bt.cols()), static_cast<int>(link.tx_clusters.size()));
  MatrixXcd h = std::sqrt(link.path_loss) *
                (br * hw_r * link.coupling.entries() * hw_t.adjoint() * bt.adjoint());
  check_finite(h, "synth_ds");
  return {std::move(h), Provenance::ds_equivalent, stream.master_seed(), stream.stream_id()};
}

LinkEigenmodes eigenmodes(const LinkModel& link, const CorrCache& cache) {
  link.validate();
  const int lr = static_cast<int>(link.rx_clusters.size());
  const int lt = static_cast<int>(link.tx_clusters.size());
  MatrixXcd m_tx = MatrixXcd::Zero(link.tx_geom.n_elements, link.tx_geom.n_elements);
  MatrixXcd m_rx = MatrixXcd::Zero(link.rx_geom.n_elements, link.rx_geom.n_elements);
  for (int ir = 0; ir < lr; ++ir) {
    for (int it = 0; it < lt; ++it) {
      const double w = std::norm(link.coupling.entries()(ir, it));
      if (w == 0.0) continue;
      m_tx += w * cache.rx[ir].trace_real() * cache.tx[it].matrix();
      m_rx += w * cache.tx[it].trace_real() * cache.rx[ir].matrix();
    }
  }
  return {hermitian_eig(m_tx), hermitian_eig(m_rx)};
}

MatrixXcd kron_joint_corr(const CorrelationMatrix& rx, const CorrelationMatrix& tx) {
  const Eigen::Index nr = rx.dim();
  const Eigen::Index nt = tx.dim();
  MatrixXcd out(nr * nt, nr * nt);
  for (Eigen::Index i = 0; i < nr; ++i) {
    for (Eigen::Index j = 0; j < nr; ++j) {
      out.block(i * nt, j * nt, nt, nt) = rx.matrix()(i, j) * tx.matrix();
    }
  }
  return out;
}

}  // namespace xlmimo
