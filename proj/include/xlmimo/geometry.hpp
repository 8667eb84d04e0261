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

#include <cmath>
#include <stdexcept>

#include "xlmimo/types.hpp"

namespace xlmimo {

/// Uniform linear array described by element count, inter-element spacing
/// and carrier wavelength (all lengths in meters).
struct ArrayGeometry {
  int n_elements;
  double spacing;
  double wavelength;

  ArrayGeometry(int n, double d, double lambda)
      : n_elements(n), spacing(d), wavelength(lambda) {
    if (n < 1) throw std::invalid_argument("ArrayGeometry: need at least one element");
    if (!(d > 0.0)) throw std::invalid_argument("ArrayGeometry: spacing must be positive");
    if (!(lambda > 0.0)) throw std::invalid_argument("ArrayGeometry: wavelength must be positive");
  }

  double wave_number() const { return kTwoPi / wavelength; }
  double aperture() const { return (n_elements - 1) * spacing; }
};

/// Polar position of a cluster center relative to an array: range and
/// azimuth, azimuth restricted to the front half-plane.
struct ClusterCenter {
  double distance;
  double angle;

  ClusterCenter(double d, double theta) : distance(d), angle(theta) {
    if (!(d > 0.0)) throw std::invalid_argument("ClusterCenter: distance must be positive");
    if (!(theta > -kPi / 2 && theta < kPi / 2)) {
      throw std::invalid_argument("ClusterCenter: angle must lie strictly inside (-pi/2, pi/2)");
    }
  }
};

/// Individual scatterer position; the azimuth is unconstrained because
/// angular sampling may spill past the broadside limits.
struct ScattererParam {
  double distance;
  double angle;

  ScattererParam(double d, double theta) : distance(d), angle(theta) {
    if (!(d > 0.0)) throw std::invalid_argument("ScattererParam: distance must be positive");
  }
};

enum class DistanceMode { exact, fresnel };

/// Signed element offsets from the array center: eta_n = (n - (N+1)/2) d.
inline VectorXd element_offsets(const ArrayGeometry& geom) {
  VectorXd eta(geom.n_elements);
  const double mid = 0.5 * (geom.n_elements + 1);
  for (int n = 1; n <= geom.n_elements; ++n) {
    eta[n - 1] = (n - mid) * geom.spacing;
  }
  return eta;
}

inline double exact_distance(double d, double theta, double eta) {
  return std::sqrt(d * d - 2.0 * eta * d * std::sin(theta) + eta * eta);
}

/// Second-order expansion of exact_distance in eta/d.
inline double fresnel_distance(double d, double theta, double eta) {
  const double s = std::sin(theta);
  return d - eta * s + eta * eta * (1.0 - s * s) / (2.0 * d);
}

inline double point_distance(double d, double theta, double eta, DistanceMode mode) {
  return mode == DistanceMode::exact ? exact_distance(d, theta, eta)
                                     : fresnel_distance(d, theta, eta);
}

/// Per-element amplitude coefficient c = D(eta)/d; equals 1 at the array
/// center and captures the power tilt across a large aperture.
inline double nonstationarity_coeff(double d, double theta, double eta,
                                    DistanceMode mode = DistanceMode::exact) {
  return point_distance(d, theta, eta, mode) / d;
}

/// Spherical-wavefront steering vector: entry n = exp(-j k D_n) / c_n.
VectorXcd steering_vector(const ArrayGeometry& geom, const ClusterCenter& center,
                          DistanceMode mode = DistanceMode::fresnel);

}  // namespace xlmimo
