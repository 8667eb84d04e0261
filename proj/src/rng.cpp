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

#include "xlmimo/rng.hpp"

#include <cmath>

namespace xlmimo {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
    : master_(master_seed),
      id_(stream_id),
      engine_(splitmix64(splitmix64(master_seed) ^ splitmix64(~stream_id))) {}

RngStream RngStream::derive(std::uint64_t child_id) const {
  return RngStream(master_, splitmix64(id_ ^ splitmix64(child_id + 0x1234567ull)));
}

double RngStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double a, double b) { return a + (b - a) * uniform(); }

Complex RngStream::cgauss() {
  // Amplitude^2 ~ Exp(1), phase uniform: exact CN(0,1) from two uniforms.
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-std::log1p(-u1));
  return std::polar(r, kTwoPi * u2);
}

VectorXcd RngStream::cgauss_vector(int n) {
  VectorXcd v(n);
  for (int i = 0; i < n; ++i) v[i] = cgauss();
  return v;
}

MatrixXcd RngStream::cgauss_matrix(int rows, int cols) {
  MatrixXcd m(rows, cols);
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) m(r, c) = cgauss();
  }
  return m;
}

}  // namespace xlmimo
