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

#include "xlmimo/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace xlmimo {

HermitianEig hermitian_eig(const MatrixXcd& m, double herm_tol) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("hermitian_eig: matrix must be square");
  }
  const double norm = m.norm();
  const double dev = (m - m.adjoint()).norm();
  if (norm > 0.0 && dev > herm_tol * norm * 2.0) {
    throw std::invalid_argument("hermitian_eig: matrix is not Hermitian within tolerance");
  }
  Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(m);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_eig: eigen-decomposition failed");
  }
  const Eigen::Index n = m.rows();
  HermitianEig out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  // Eigen returns ascending order; flip to descending.
  for (Eigen::Index i = 0; i < n; ++i) {
    out.eigenvalues[i] = solver.eigenvalues()[n - 1 - i];
    out.eigenvectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  return out;
}

MatrixXcd psd_sqrt_factor(const HermitianEig& eig, double clamp_rel, double drop_rel) {
  const Eigen::Index n = eig.eigenvalues.size();
  if (n == 0) return MatrixXcd(0, 0);
  const double lmax = std::max(eig.eigenvalues[0], 0.0);
  if (eig.eigenvalues[n - 1] < -clamp_rel * lmax) {
    throw std::invalid_argument("psd_sqrt_factor: matrix violates the PSD tolerance");
  }
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (eig.eigenvalues[i] > drop_rel * lmax) ++rank;
  }
  MatrixXcd factor(n, rank);
  for (Eigen::Index i = 0; i < rank; ++i) {
    factor.col(i) = eig.eigenvectors.col(i) * std::sqrt(eig.eigenvalues[i]);
  }
  return factor;
}

}  // namespace xlmimo
