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

#include "xlmimo/geometry.hpp"

namespace xlmimo {

VectorXcd steering_vector(const ArrayGeometry& geom, const ClusterCenter& center,
                          DistanceMode mode) {
  const VectorXd eta = element_offsets(geom);
  const double kappa = geom.wave_number();
  VectorXcd b(geom.n_elements);
  for (int n = 0; n < geom.n_elements; ++n) {
    const double dist = point_distance(center.distance, center.angle, eta[n], mode);
    const double c = dist / center.distance;
    b[n] = std::polar(1.0 / c, -kappa * dist);
  }
  return b;
}

}  // namespace xlmimo
