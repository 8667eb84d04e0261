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

#include "xlmimo/types.hpp"

namespace xlmimo {

/// Eigen-system of a Hermitian matrix, eigenvalues sorted descending with
/// matching eigenvector columns.
struct HermitianEig {
  VectorXd eigenvalues;
  MatrixXcd eigenvectors;
};

/// Decomposes M = U diag(lambda) U^H.  Rejects matrices whose anti-Hermitian
/// part exceeds `herm_tol` relative to the Frobenius norm.
HermitianEig hermitian_eig(const MatrixXcd& m, double herm_tol = 1e-10);

/// Factor B with B B^H = M for PSD M, via U sqrt(Lambda) on the Hermitian
/// eigen-system.  Eigenvalues in [-clamp_rel * lambda_max, 0) are clamped to
/// zero and their columns dropped; anything more negative is rejected as a
/// PSD violation.  The omitted right-unitary factor U^H is irrelevant for
/// synthesizing B g with rotation-invariant g.
MatrixXcd psd_sqrt_factor(const HermitianEig& eig, double clamp_rel = 1e-8,
                          double drop_rel = 1e-12);

}  // namespace xlmimo
