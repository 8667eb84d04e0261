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

#include <functional>
#include <vector>

#include "xlmimo/channel.hpp"
#include "xlmimo/quadrature.hpp"
#include "xlmimo/types.hpp"

namespace xlmimo {

/// Strictly ascending positive SNR grid (linear scale).
struct SnrGrid {
  std::vector<double> values;

  explicit SnrGrid(std::vector<double> v);
  static SnrGrid from_db_range(double lo_db, double hi_db, double step_db);
};

/// Deterministic per-trial channel source; must return the same matrix for
/// the same trial index.
using RealizationFn = std::function<MatrixXcd(int)>;

/// Nonzero eigenvalues of H^H H (descending), computed on the smaller Gram
/// side for stability and speed.
VectorXd gram_eigenvalues(const MatrixXcd& h);

struct McEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  int trials = 0;
};

/// Sample mean of log2 det(I + gamma H H^H) with standard error.
McEstimate ergodic_se_mc(const RealizationFn& fn, int trials, double gamma, int threads = 1);
McEstimate ergodic_se_mc(const std::vector<MatrixXcd>& realizations, double gamma);

/// Shared-realization sweep: eigenvalues are computed once per trial and
/// reused across the SNR grid.
std::vector<McEstimate> ergodic_se_mc_grid(const RealizationFn& fn, int trials,
                                           const std::vector<double>& gammas, int threads = 1);

struct OutageEstimate {
  double probability = 0.0;
  double wilson_low = 0.0;
  double wilson_high = 0.0;
  int trials = 0;

  double wilson_half_width() const { return 0.5 * (wilson_high - wilson_low); }
};

/// Empirical Pr(lambda_max(H^H H) <= gamma_th / gamma_bar) with a Wilson
/// score interval (z = 1.96).
OutageEstimate outage_mc(const RealizationFn& fn, int trials, double gamma_bar,
                         double gamma_th, int threads = 1);
std::vector<OutageEstimate> outage_mc_grid(const RealizationFn& fn, int trials,
                                           double gamma_bar,
                                           const std::vector<double>& gamma_ths,
                                           int threads = 1);

/// Per-path factors of a rank-1-cluster link: coupling power, dominant
/// correlation eigenvalues chi, and the eigenvalues of Pi^H Pi capturing
/// steering non-orthogonality.
struct SsLinkSummary {
  VectorXd alpha_sq;
  VectorXd chi_rx;
  VectorXd chi_tx;
  VectorXd lambda_rx;
  VectorXd lambda_tx;

  int paths() const { return static_cast<int>(alpha_sq.size()); }
  /// varpi_l = |alpha_l|^2 chi_rx chi_tx lambda_rx lambda_tx.
  VectorXd varpi() const;
};

/// Extracts the per-path summary from a diagonal-like coupled link.
SsLinkSummary make_ss_summary(const LinkModel& link, const CorrCache& cache);

/// Ergodic-SE approximation for rank-1 clusters, evaluated through the
/// product-exponential integral sum_l int 2 log2(1 + gamma varpi_l g)
/// K0(2 sqrt g) dg.
double se_ss_approx(const SsLinkSummary& summary, double gamma,
                    const QuadratureSpec& quad = {64, 1024, 1e-10, 1e-9});

/// Jensen upper bound sum_l log2(1 + gamma varpi_l).
double se_ss_upper(const SsLinkSummary& summary, double gamma);

/// Determinant-expansion upper bound for the double-scattering ergodic SE:
/// log2 sum_k (k!)^2 gamma^k e_k(rx) e_k(coupling) e_k(tx) over the
/// elementary symmetric sums of the three eigenvalue sets.  Dimensions are
/// limited to 12; beyond that use the Monte-Carlo estimator.
double se_ds_upper(const VectorXd& lambda_rx, const VectorXd& lambda_tx,
                   const VectorXd& lambda_coupling, double gamma);

/// Outage approximation for rank-1 clusters: product over paths of the
/// product-exponential CDF at gamma_th / (gamma_bar varpi_l).
double op_ss_approx(const SsLinkSummary& summary, double gamma_bar, double gamma_th);

/// CDF / PDF of Z = X Y for independent X ~ Exp(l1), Y ~ Exp(l2):
///   F(z) = 1 - 2 sqrt(l1 l2 z) K1(2 sqrt(l1 l2 z)),
///   f(z) = 2 l1 l2 K0(2 sqrt(l1 l2 z)).
double product_exp_cdf(double z, double lambda1, double lambda2);
double product_exp_pdf(double z, double lambda1, double lambda2);

}  // namespace xlmimo
