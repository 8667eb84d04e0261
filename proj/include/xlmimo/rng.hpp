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
#include <random>

#include "xlmimo/types.hpp"

namespace xlmimo {

/// Counter-derived random stream.  Identical (master_seed, stream_id) pairs
/// produce identical sample sequences; derive() splits off statistically
/// independent child streams without consuming state from the parent.
/// Value type, safe to move across threads.
class RngStream {
 public:
  explicit RngStream(std::uint64_t master_seed, std::uint64_t stream_id = 0);

  RngStream derive(std::uint64_t child_id) const;

  std::uint64_t master_seed() const { return master_; }
  std::uint64_t stream_id() const { return id_; }

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform();
  /// Uniform on [a, b).
  double uniform(double a, double b);

  /// Circularly-symmetric complex Gaussian, unit variance.
  Complex cgauss();
  VectorXcd cgauss_vector(int n);
  MatrixXcd cgauss_matrix(int rows, int cols);

 private:
  std::uint64_t master_;
  std::uint64_t id_;
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer used for seed/stream mixing.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace xlmimo
