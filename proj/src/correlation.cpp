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

#include "xlmimo/correlation.hpp"

#include <algorithm>
#include <cmath>

#include "xlmimo/special_functions.hpp"

namespace xlmimo {

double vmd_pdf(double theta, const AngularSpread& spread) {
  const double k = 1.0 / spread.concentration_inv;
  const double num = std::exp(k * (std::cos(theta - spread.mean_angle) - 1.0));
  return num / (kTwoPi * bessel_i0_scaled(k));
}

VectorXd sample_vmd(RngStream& stream, const AngularSpread& spread, int n) {
  if (n < 1) throw std::invalid_argument("sample_vmd: need n >= 1");
  VectorXd out(n);
  const double k = 1.0 / spread.concentration_inv;
  if (k < 1e-10) {
    for (int i = 0; i < n; ++i) out[i] = stream.uniform(-kPi, kPi);
    return out;
  }
  // Best-Fisher envelope parameters; rho is written in a cancellation-free
  // form so tiny and huge concentrations behave alike.
  const double root = std::sqrt(1.0 + 4.0 * k * k);
  const double tau = 1.0 + root;
  const double rho = 2.0 * k * tau / ((1.0 + root) * (tau + std::sqrt(2.0 * tau)));
  const double r = (1.0 + rho * rho) / (2.0 * rho);
  for (int i = 0; i < n; ++i) {
    double f = 0.0;
    for (;;) {
      const double z = std::cos(kPi * stream.uniform());
      // 1 - f computed without subtractive cancellation near f = 1.
      const double one_minus_f = (r - 1.0) * (1.0 - z) / (r + z);
      f = 1.0 - one_minus_f;
      const double c = k * (r - f);
      const double u2 = stream.uniform();
      if (c * (2.0 - c) - u2 > 0.0) break;
      if (u2 > 0.0 && std::log(c / u2) + 1.0 - c >= 0.0) break;
    }
    const double mag = std::acos(std::clamp(f, -1.0, 1.0));
    const double theta = spread.mean_angle + (stream.uniform() < 0.5 ? -mag : mag);
    out[i] = std::remainder(theta, kTwoPi);
  }
  return out;
}

const HermitianEig& CorrelationMatrix::eig() const {
  if (!eig_) eig_ = hermitian_eig(matrix_);
  return *eig_;
}

const MatrixXcd& CorrelationMatrix::sqrt_factor() const {
  if (!sqrt_) sqrt_ = psd_sqrt_factor(eig());
  return *sqrt_;
}

namespace {

// Angular support carrying all but ~e^-40 of the Von Mises mass.
double effective_halfwidth(const AngularSpread& spread) {
  if (spread.concentration_inv >= 0.05) return kPi;
  return std::min(kPi, 9.0 * std::sqrt(spread.concentration_inv));
}

struct NodeGrid {
  VectorXd theta;
  VectorXd weight;  // quadrature weight times angular density
};

NodeGrid make_grid(const AngularSpread& spread, double lo, double hi,
                   const GaussLegendre& rule, int panels) {
  NodeGrid grid;
  const int q = rule.size() * panels;
  grid.theta.resize(q);
  grid.weight.resize(q);
  const double h = (hi - lo) / panels;
  int idx = 0;
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * h;
    for (int i = 0; i < rule.size(); ++i, ++idx) {
      const double theta = mid + 0.5 * h * rule.nodes()[i];
      grid.theta[idx] = theta;
      grid.weight[idx] = 0.5 * h * rule.weights()[i] * vmd_pdf(theta, spread);
    }
  }
  return grid;
}

// Correlation integrand sample s_n(theta) = exp(+j kappa D_n) / c_n.
Complex corr_sample(double kappa, double d, double theta, double eta, DistanceMode mode) {
  const double dist = point_distance(d, theta, eta, mode);
  return std::polar(d / dist, kappa * dist);
}

// Single-entry integral at a fixed panel count; used as convergence probe.
Complex probe_entry(const ArrayGeometry& geom, const ClusterCenter& center,
                    const AngularSpread& spread, DistanceMode mode, double eta1, double eta2,
                    double lo, double hi, const GaussLegendre& rule, int panels) {
  const double kappa = geom.wave_number();
  const NodeGrid grid = make_grid(spread, lo, hi, rule, panels);
  Complex acc(0.0, 0.0);
  const int nq = static_cast<int>(grid.theta.size());
  for (int q = 0; q < nq; ++q) {
    const Complex s2 = corr_sample(kappa, center.distance, grid.theta[q], eta2, mode);
    const Complex s1 = corr_sample(kappa, center.distance, grid.theta[q], eta1, mode);
    acc += grid.weight[q] * s2 * std::conj(s1);
  }
  return acc;
}

}  // namespace

CorrelationMatrix nearfield_corr(const ArrayGeometry& geom, const ClusterCenter& center,
                                 const AngularSpread& spread, const QuadratureSpec& quad,
                                 DistanceMode mode) {
  quad.validate();
  const int n = geom.n_elements;
  const VectorXd eta = element_offsets(geom);
  const double kappa = geom.wave_number();
  const double halfwidth = effective_halfwidth(spread);
  const double lo = spread.mean_angle - halfwidth;
  const double hi = spread.mean_angle + halfwidth;
  const GaussLegendre& rule = GaussLegendre::cached(quad.node_count);

  // Panel count is settled on the most oscillatory entry (largest element
  // separation) before the full matrix is assembled once.  The dominant
  // phase swing is kappa * span times the total variation of sin(theta).
  const double span = eta[n - 1] - eta[0];
  double sin_tv = 0.0;
  {
    double prev_sin = std::sin(lo);
    for (double c = kPi / 2 + kPi * std::ceil((lo - kPi / 2) / kPi); c < hi; c += kPi) {
      sin_tv += std::abs(std::sin(c) - prev_sin);
      prev_sin = std::sin(c);
    }
    sin_tv += std::abs(std::sin(hi) - prev_sin);
  }
  const double cycles = kappa * span * std::max(sin_tv, 0.05) / kTwoPi;
  int panels = 1;
  while (panels * rule.size() < 6.0 * cycles + 32.0 && panels < quad.panel_count) panels *= 2;

  // Once two refinements agree within tolerance the coarser grid already
  // meets it; the expensive full assembly runs at that count.
  bool converged = (n == 1);
  Complex prev = probe_entry(geom, center, spread, mode, eta[0], eta[n - 1], lo, hi, rule, panels);
  while (!converged && panels < quad.panel_count) {
    const Complex cur = probe_entry(geom, center, spread, mode, eta[0], eta[n - 1], lo, hi, rule,
                                    2 * panels);
    if (std::abs(cur - prev) <= std::max(quad.abs_tol, quad.rel_tol * std::abs(cur))) {
      converged = true;
    } else {
      panels *= 2;
      prev = cur;
    }
  }
  if (!converged && n > 1) {
    throw NonConvergenceError("nearfield_corr: quadrature did not converge within panel budget");
  }

  // Theta = conj(M) M^T with M(n, q) = s_n(theta_q) sqrt(w_q f_q); PSD by
  // construction.
  const NodeGrid grid = make_grid(spread, lo, hi, rule, panels);
  const int q_total = static_cast<int>(grid.theta.size());
  MatrixXcd m(n, q_total);
  for (int q = 0; q < q_total; ++q) {
    const double root_w = std::sqrt(std::max(grid.weight[q], 0.0));
    for (int i = 0; i < n; ++i) {
      m(i, q) = root_w * corr_sample(kappa, center.distance, grid.theta[q], eta[i], mode);
    }
  }
  MatrixXcd theta = MatrixXcd::Zero(n, n);
  theta.selfadjointView<Eigen::Lower>().rankUpdate(m.conjugate());
  MatrixXcd full = theta.selfadjointView<Eigen::Lower>();
  return CorrelationMatrix(std::move(full));
}

CorrelationMatrix farfield_corr(const ArrayGeometry& geom, const AngularSpread& spread) {
  const int n = geom.n_elements;
  const VectorXd eta = element_offsets(geom);
  const double kappa = geom.wave_number();
  const double k = 1.0 / spread.concentration_inv;
  const double s = std::sin(spread.mean_angle);

  // Toeplitz: one generator value per element-offset lag.
  VectorXcd gen(n);
  for (int m = 0; m < n; ++m) {
    const Complex b(0.0, kappa * m * geom.spacing);  // eta_{n1} - eta_{n2}, lag n1 - n2 = m
    const Complex z = k * k + b * b + 2.0 * b * k * s;
    gen[m] = bessel_i0_sqrt_ratio(z, k);
  }
  MatrixXcd theta(n, n);
  for (int i = 0; i < n; ++i) {
    theta(i, i) = 1.0;
    for (int j = 0; j < i; ++j) {
      theta(i, j) = gen[i - j];
      theta(j, i) = std::conj(gen[i - j]);
    }
  }
  return CorrelationMatrix(std::move(theta));
}

double corr_trace_delta(const ArrayGeometry& geom, const ClusterCenter& center) {
  const double nd = geom.n_elements * geom.spacing;
  const double cos_t = std::cos(center.angle);
  const double tan_t = std::tan(center.angle);
  const double base = nd / (2.0 * center.distance * cos_t);
  return center.distance / (geom.spacing * cos_t) *
         (std::atan(base - tan_t) + std::atan(base + tan_t));
}

double corr_trace_delta_alt(const ArrayGeometry& geom, const ClusterCenter& center) {
  const double nd = geom.n_elements * geom.spacing;
  const double cos_t = std::cos(center.angle);
  const double sin_t = std::sin(center.angle);
  const double denom_minus = 2.0 * center.distance - nd * sin_t;
  const double denom_plus = 2.0 * center.distance + nd * sin_t;
  if (denom_minus == 0.0 || denom_plus == 0.0) {
    throw std::domain_error("corr_trace_delta_alt: arctan argument pole");
  }
  return center.distance / (geom.spacing * cos_t) *
         (std::atan(nd * cos_t / denom_minus) + std::atan(nd * cos_t / denom_plus));
}

std::optional<std::pair<double, double>> delta_zero_crossings(const ArrayGeometry& geom,
                                                              double distance) {
  constexpr double kLimit = 1.45;
  constexpr int kScanPoints = 2000;
  const auto excess = [&](double theta) {
    return corr_trace_delta(geom, ClusterCenter(distance, theta)) - geom.n_elements;
  };

  const auto bisect = [&](double a, double b) {
    double fa = excess(a);
    for (int i = 0; i < 200 && (b - a) > 1e-7; ++i) {
      const double mid = 0.5 * (a + b);
      const double fm = excess(mid);
      if ((fa <= 0.0) == (fm <= 0.0)) {
        a = mid;
        fa = fm;
      } else {
        b = mid;
      }
    }
    return 0.5 * (a + b);
  };

  std::vector<double> roots;
  double prev_theta = -kLimit;
  double prev_val = excess(prev_theta);
  for (int i = 1; i < kScanPoints; ++i) {
    const double theta = -kLimit + 2.0 * kLimit * i / (kScanPoints - 1);
    const double val = excess(theta);
    if ((prev_val <= 0.0) != (val <= 0.0)) {
      roots.push_back(bisect(prev_theta, theta));
    }
    prev_theta = theta;
    prev_val = val;
  }
  if (roots.empty()) return std::nullopt;
  // Keep the pair bracketing broadside.
  double neg = -kLimit, pos = kLimit;
  bool has_neg = false, has_pos = false;
  for (double r : roots) {
    if (r < 0.0 && (!has_neg || r > neg)) neg = r, has_neg = true;
    if (r > 0.0 && (!has_pos || r < pos)) pos = r, has_pos = true;
  }
  if (!has_neg || !has_pos) return std::nullopt;
  return std::make_pair(neg, pos);
}

CorrelationMatrix mean_corr(const std::vector<CorrelationMatrix>& mats) {
  if (mats.empty()) throw std::invalid_argument("mean_corr: need at least one matrix");
  const Eigen::Index n = mats.front().dim();
  MatrixXcd acc = MatrixXcd::Zero(n, n);
  for (const CorrelationMatrix& m : mats) {
    if (m.dim() != n) throw std::invalid_argument("mean_corr: dimension mismatch");
    acc += m.matrix();
  }
  acc /= static_cast<double>(mats.size());
  return CorrelationMatrix(std::move(acc));
}

}  // namespace xlmimo
