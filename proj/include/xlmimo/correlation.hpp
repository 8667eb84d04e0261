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

#include <optional>
#include <utility>
#include <vector>

#include "xlmimo/geometry.hpp"
#include "xlmimo/linalg.hpp"
#include "xlmimo/quadrature.hpp"
#include "xlmimo/rng.hpp"
#include "xlmimo/types.hpp"

namespace xlmimo {

/// Von Mises angular spread: mean direction plus the width parameter rho.
/// rho -> 0 collapses to a single ray, rho -> infinity to uniform angles;
/// the density concentration is 1/rho.
struct AngularSpread {
  double mean_angle;
  double concentration_inv;  // rho > 0

  AngularSpread(double mu, double rho) : mean_angle(mu), concentration_inv(rho) {
    if (!(rho > 0.0) || !std::isfinite(rho)) {
      throw std::invalid_argument("AngularSpread: rho must be positive and finite");
    }
  }
};

/// Von Mises density exp(cos(theta-mu)/rho) / (2 pi I0(1/rho)), evaluated in
/// scaled form so arbitrarily small rho stays finite.
double vmd_pdf(double theta, const AngularSpread& spread);

/// Von Mises sampling (Best-Fisher rejection); angles in (-pi, pi].
VectorXd sample_vmd(RngStream& stream, const AngularSpread& spread, int n);

/// Hermitian PSD spatial correlation matrix with a lazily computed
/// eigen-system and synthesis factor.  The lazy caches are not synchronized:
/// warm them single-threaded (cache_eig) before sharing across threads.
class CorrelationMatrix {
 public:
  CorrelationMatrix() = default;
  explicit CorrelationMatrix(MatrixXcd m) : matrix_(std::move(m)) {}

  const MatrixXcd& matrix() const { return matrix_; }
  Eigen::Index dim() const { return matrix_.rows(); }
  double trace_real() const { return matrix_.trace().real(); }

  const HermitianEig& eig() const;
  /// B with B B^H = matrix (clamped PSD, null columns dropped).
  const MatrixXcd& sqrt_factor() const;
  void cache_eig() const { (void)eig(); (void)sqrt_factor(); }

 private:
  MatrixXcd matrix_;
  mutable std::optional<HermitianEig> eig_;
  mutable std::optional<MatrixXcd> sqrt_;
};

/// Spatial correlation of a cluster seen through a spherical wavefront:
/// entry (n1, n2) integrates exp(jk D_{n2}) exp(-jk D_{n1}) / (c_{n2} c_{n1})
/// against the angular density, with the scatterer range pinned at the
/// cluster center distance.
CorrelationMatrix nearfield_corr(const ArrayGeometry& geom, const ClusterCenter& center,
                                 const AngularSpread& spread, const QuadratureSpec& quad = {},
                                 DistanceMode mode = DistanceMode::fresnel);

/// Closed-form far-field correlation (Toeplitz, Hermitian, unit diagonal):
/// entry = I0(sqrt(rho^-2 + b^2 + 2 b rho^-1 sin(mu))) / I0(rho^-1) with
/// b = j k (eta_{n1} - eta_{n2}).
CorrelationMatrix farfield_corr(const ArrayGeometry& geom, const AngularSpread& spread);

/// Squared norm of the near-field steering vector in closed form,
/// (d / (d_A cos t)) [arctan(I1) + arctan(I2)].
double corr_trace_delta(const ArrayGeometry& geom, const ClusterCenter& center);

/// Algebraically equivalent (I3, I4) arctan form; has a pole at
/// 2d = N d_A sin(theta) and exists for cross-checking only.
double corr_trace_delta_alt(const ArrayGeometry& geom, const ClusterCenter& center);

/// Zeros theta_1 < 0 < theta_2 of Delta(d, theta) - N over (-1.45, 1.45),
/// located by a 2000-point sign scan plus bisection to 1e-6 rad.  Empty when
/// Delta - N keeps a constant sign.
std::optional<std::pair<double, double>> delta_zero_crossings(const ArrayGeometry& geom,
                                                              double distance);

/// Arithmetic mean of equally sized correlation matrices.
CorrelationMatrix mean_corr(const std::vector<CorrelationMatrix>& mats);

}  // namespace xlmimo
