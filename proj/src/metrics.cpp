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

#include "xlmimo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "xlmimo/parallel.hpp"
#include "xlmimo/special_functions.hpp"

namespace xlmimo {

namespace {

constexpr double kWilsonZ = 1.959963984540054;  // 95% score interval

McEstimate reduce_mean(const std::vector<double>& values) {
  const int n = static_cast<int>(values.size());
  McEstimate est;
  est.trials = n;
  est.mean = tree_sum(values) / n;
  if (n > 1) {
    std::vector<double> sq(n);
    for (int i = 0; i < n; ++i) {
      const double d = values[i] - est.mean;
      sq[i] = d * d;
    }
    est.stderr_ = std::sqrt(tree_sum(sq) / (static_cast<double>(n) * (n - 1)));
  }
  return est;
}

OutageEstimate wilson(int successes, int n) {
  OutageEstimate est;
  est.trials = n;
  est.probability = static_cast<double>(successes) / n;
  const double z2 = kWilsonZ * kWilsonZ;
  const double denom = 1.0 + z2 / n;
  const double center = (est.probability + z2 / (2.0 * n)) / denom;
  const double half =
      kWilsonZ *
      std::sqrt(est.probability * (1.0 - est.probability) / n + z2 / (4.0 * n * n)) / denom;
  est.wilson_low = std::max(0.0, center - half);
  est.wilson_high = std::min(1.0, center + half);
  return est;
}

// Elementary symmetric sums e_0..e_k of the entries of v.
std::vector<double> elementary_symmetric(const VectorXd& v, int k) {
  std::vector<double> e(k + 1, 0.0);
  e[0] = 1.0;
  for (int i = 0; i < v.size(); ++i) {
    for (int j = std::min<int>(k, i + 1); j >= 1; --j) {
      e[j] += v[i] * e[j - 1];
    }
  }
  return e;
}

std::vector<VectorXd> collect_gram_eigs(const RealizationFn& fn, int trials, int threads) {
  if (trials < 1) throw std::invalid_argument("mc estimator: need at least one trial");
  std::vector<VectorXd> eigs(trials);
  parallel_for(trials, threads, [&](int t) {
    const MatrixXcd h = fn(t);
    if (!h.allFinite()) throw std::invalid_argument("mc estimator: non-finite realization");
    eigs[t] = gram_eigenvalues(h);
  });
  return eigs;
}

double se_from_eigs(const VectorXd& eigs, double gamma) {
  double se = 0.0;
  for (int i = 0; i < eigs.size(); ++i) {
    se += std::log2(1.0 + gamma * std::max(eigs[i], 0.0));
  }
  return se;
}

}  // namespace

SnrGrid::SnrGrid(std::vector<double> v) : values(std::move(v)) {
  if (values.empty()) throw std::invalid_argument("SnrGrid: empty grid");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0)) throw std::invalid_argument("SnrGrid: values must be positive");
    if (i > 0 && !(values[i] > values[i - 1])) {
      throw std::invalid_argument("SnrGrid: values must be strictly ascending");
    }
  }
}

SnrGrid SnrGrid::from_db_range(double lo_db, double hi_db, double step_db) {
  if (!(step_db > 0.0) || hi_db < lo_db) {
    throw std::invalid_argument("SnrGrid: bad dB range");
  }
  std::vector<double> v;
  for (double db = lo_db; db <= hi_db + 1e-9; db += step_db) {
    v.push_back(std::pow(10.0, db / 10.0));
  }
  return SnrGrid(std::move(v));
}

VectorXd gram_eigenvalues(const MatrixXcd& h) {
  MatrixXcd gram;
  if (h.rows() <= h.cols()) {
    gram = h * h.adjoint();
  } else {
    gram = h.adjoint() * h;
  }
  Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(gram);
  VectorXd out = solver.eigenvalues().reverse();
  return out;
}

McEstimate ergodic_se_mc(const RealizationFn& fn, int trials, double gamma, int threads) {
  const std::vector<VectorXd> eigs = collect_gram_eigs(fn, trials, threads);
  std::vector<double> values(trials);
  for (int t = 0; t < trials; ++t) values[t] = se_from_eigs(eigs[t], gamma);
  return reduce_mean(values);
}

McEstimate ergodic_se_mc(const std::vector<MatrixXcd>& realizations, double gamma) {
  return ergodic_se_mc(
      [&](int t) -> MatrixXcd { return realizations[t]; },
      static_cast<int>(realizations.size()), gamma, 1);
}

std::vector<McEstimate> ergodic_se_mc_grid(const RealizationFn& fn, int trials,
                                           const std::vector<double>& gammas, int threads) {
  const std::vector<VectorXd> eigs = collect_gram_eigs(fn, trials, threads);
  std::vector<McEstimate> out;
  out.reserve(gammas.size());
  std::vector<double> values(trials);
  for (double gamma : gammas) {
    for (int t = 0; t < trials; ++t) values[t] = se_from_eigs(eigs[t], gamma);
    out.push_back(reduce_mean(values));
  }
  return out;
}

OutageEstimate outage_mc(const RealizationFn& fn, int trials, double gamma_bar,
                         double gamma_th, int threads) {
  return outage_mc_grid(fn, trials, gamma_bar, {gamma_th}, threads).front();
}

std::vector<OutageEstimate> outage_mc_grid(const RealizationFn& fn, int trials,
                                           double gamma_bar,
                                           const std::vector<double>& gamma_ths,
                                           int threads) {
  if (!(gamma_bar > 0.0)) throw std::invalid_argument("outage_mc: gamma_bar must be positive");
  for (double th : gamma_ths) {
    if (!(th > 0.0)) throw std::invalid_argument("outage_mc: thresholds must be positive");
  }
  const std::vector<VectorXd> eigs = collect_gram_eigs(fn, trials, threads);
  std::vector<double> lambda_max(trials);
  for (int t = 0; t < trials; ++t) lambda_max[t] = eigs[t].size() ? eigs[t][0] : 0.0;
  std::vector<OutageEstimate> out;
  out.reserve(gamma_ths.size());
  for (double th : gamma_ths) {
    const double cut = th / gamma_bar;
    int outages = 0;
    for (int t = 0; t < trials; ++t) outages += lambda_max[t] <= cut;
    out.push_back(wilson(outages, trials));
  }
  return out;
}

VectorXd SsLinkSummary::varpi() const {
  return alpha_sq.array() * chi_rx.array() * chi_tx.array() * lambda_rx.array() *
         lambda_tx.array();
}

SsLinkSummary make_ss_summary(const LinkModel& link, const CorrCache& cache) {
  link.validate();
  const MatrixXcd& a = link.coupling.entries();
  // Diagonal-like coupling: exactly one nonzero per used row/column.
  struct Path {
    int rx;
    int tx;
    double power;
  };
  std::vector<Path> paths;
  for (int it = 0; it < a.cols(); ++it) {
    int found = -1;
    for (int ir = 0; ir < a.rows(); ++ir) {
      if (std::abs(a(ir, it)) > 1e-14) {
        if (found >= 0) {
          throw std::invalid_argument("make_ss_summary: coupling must be diagonal-like");
        }
        found = ir;
      }
    }
    if (found >= 0) paths.push_back({found, it, std::norm(a(found, it))});
  }
  const int l = static_cast<int>(paths.size());
  if (l == 0) throw std::invalid_argument("make_ss_summary: coupling has no active paths");

  SsLinkSummary s;
  s.alpha_sq.resize(l);
  s.chi_rx.resize(l);
  s.chi_tx.resize(l);
  MatrixXcd pi_r(link.rx_geom.n_elements, l);
  MatrixXcd pi_t(link.tx_geom.n_elements, l);
  for (int i = 0; i < l; ++i) {
    s.alpha_sq[i] = paths[i].power;
    const HermitianEig& er = cache.rx[paths[i].rx].eig();
    const HermitianEig& et = cache.tx[paths[i].tx].eig();
    s.chi_rx[i] = er.eigenvalues[0];
    s.chi_tx[i] = et.eigenvalues[0];
    pi_r.col(i) = er.eigenvectors.col(0);
    pi_t.col(i) = et.eigenvectors.col(0);
  }
  s.lambda_rx = hermitian_eig(pi_r.adjoint() * pi_r).eigenvalues;
  s.lambda_tx = hermitian_eig(pi_t.adjoint() * pi_t).eigenvalues;
  return s;
}

double se_ss_approx(const SsLinkSummary& summary, double gamma, const QuadratureSpec& quad) {
  if (gamma < 0.0) throw std::invalid_argument("se_ss_approx: gamma must be >= 0");
  const VectorXd varpi = summary.varpi();
  if ((varpi.array() < 0.0).any()) {
    throw std::invalid_argument("se_ss_approx: path factors must be non-negative");
  }
  // Substituting g = t^2 removes the sqrt from the Bessel argument; K0's
  // envelope makes [0, 20] hold everything above 1e-15 of the mass.
  constexpr double kUpper = 20.0;
  double total = 0.0;
  for (int l = 0; l < varpi.size(); ++l) {
    const double w = gamma * varpi[l];
    if (w == 0.0) continue;
    total += integrate_1d(
        [w](double t) {
          return 4.0 * t * std::log2(1.0 + w * t * t) * bessel_k(0, 2.0 * t);
        },
        0.0, kUpper, quad);
  }
  return total;
}

double se_ss_upper(const SsLinkSummary& summary, double gamma) {
  if (gamma < 0.0) throw std::invalid_argument("se_ss_upper: gamma must be >= 0");
  const VectorXd varpi = summary.varpi();
  double total = 0.0;
  for (int l = 0; l < varpi.size(); ++l) {
    total += std::log2(1.0 + gamma * varpi[l]);
  }
  return total;
}

double se_ds_upper(const VectorXd& lambda_rx, const VectorXd& lambda_tx,
                   const VectorXd& lambda_coupling, double gamma) {
  constexpr int kDimLimit = 12;
  if (lambda_rx.size() > kDimLimit || lambda_tx.size() > kDimLimit ||
      lambda_coupling.size() > kDimLimit) {
    throw std::invalid_argument(
        "se_ds_upper: subset enumeration is limited to dimension 12; "
        "use the Monte-Carlo estimator for larger systems");
  }
  if (gamma < 0.0) throw std::invalid_argument("se_ds_upper: gamma must be >= 0");
  const int r = static_cast<int>(
      std::min({lambda_rx.size(), lambda_tx.size(), lambda_coupling.size()}));
  const std::vector<double> er = elementary_symmetric(lambda_rx, r);
  const std::vector<double> ec = elementary_symmetric(lambda_coupling, r);
  const std::vector<double> et = elementary_symmetric(lambda_tx, r);
  double total = 0.0;
  double k_factorial_sq = 1.0;
  double gamma_pow = 1.0;
  for (int k = 0; k <= r; ++k) {
    if (k > 0) {
      k_factorial_sq *= static_cast<double>(k) * k;
      gamma_pow *= gamma;
    }
    total += k_factorial_sq * gamma_pow * er[k] * ec[k] * et[k];
  }
  return std::log2(total);
}

double op_ss_approx(const SsLinkSummary& summary, double gamma_bar, double gamma_th) {
  if (!(gamma_bar > 0.0) || !(gamma_th >= 0.0)) {
    throw std::invalid_argument("op_ss_approx: gamma_bar must be > 0 and gamma_th >= 0");
  }
  const VectorXd varpi = summary.varpi();
  double prod = 1.0;
  for (int l = 0; l < varpi.size(); ++l) {
    if (!(varpi[l] > 0.0)) throw std::invalid_argument("op_ss_approx: varpi must be positive");
    prod *= product_exp_cdf(gamma_th / (gamma_bar * varpi[l]), 1.0, 1.0);
  }
  return prod;
}

double product_exp_cdf(double z, double lambda1, double lambda2) {
  if (!(lambda1 > 0.0) || !(lambda2 > 0.0)) {
    throw std::invalid_argument("product_exp_cdf: rates must be positive");
  }
  if (z < 0.0) throw std::invalid_argument("product_exp_cdf: z must be >= 0");
  const double u = lambda1 * lambda2 * z;
  if (u == 0.0) return 0.0;
  if (u < 1e-8) {
    // 2 sqrt(u) K1(2 sqrt(u)) = 1 + u ln u - (1 - 2 gamma_E) u + O(u^2 ln u)
    return -u * std::log(u) + (1.0 - 2.0 * kEulerGamma) * u;
  }
  const double root = 2.0 * std::sqrt(u);
  return 1.0 - root * bessel_k(1, root);
}

double product_exp_pdf(double z, double lambda1, double lambda2) {
  if (!(lambda1 > 0.0) || !(lambda2 > 0.0)) {
    throw std::invalid_argument("product_exp_pdf: rates must be positive");
  }
  if (z < 0.0) throw std::invalid_argument("product_exp_pdf: z must be >= 0");
  if (z == 0.0) return std::numeric_limits<double>::infinity();
  return 2.0 * lambda1 * lambda2 * bessel_k(0, 2.0 * std::sqrt(lambda1 * lambda2 * z));
}

}  // namespace xlmimo
