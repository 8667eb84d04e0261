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
#include <string>
#include <utility>

#include "xlmimo/types.hpp"

namespace xlmimo {

/// Raised when panel doubling exhausts the panel budget without meeting the
/// requested tolerances.  CLI maps this to exit code 3.
class NonConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Composite Gauss-Legendre configuration.  panel_count is the doubling
/// limit; the estimate converges when two consecutive refinements agree
/// within max(abs_tol, rel_tol * |value|).
struct QuadratureSpec {
  int node_count = 64;
  int panel_count = 1024;
  double abs_tol = 1e-10;
  double rel_tol = 0.0;

  void validate() const {
    if (node_count < 2) throw std::invalid_argument("QuadratureSpec: node_count must be >= 2");
    if (panel_count < 1) throw std::invalid_argument("QuadratureSpec: panel_count must be >= 1");
    if (abs_tol < 0.0 || rel_tol < 0.0) {
      throw std::invalid_argument("QuadratureSpec: tolerances must be non-negative");
    }
    if (abs_tol == 0.0 && rel_tol == 0.0) {
      throw std::invalid_argument("QuadratureSpec: tolerances must not both be zero");
    }
  }
};

/// Gauss-Legendre nodes and weights on [-1, 1], cached per node count.
class GaussLegendre {
 public:
  explicit GaussLegendre(int n);

  const VectorXd& nodes() const { return nodes_; }
  const VectorXd& weights() const { return weights_; }
  int size() const { return static_cast<int>(nodes_.size()); }

  /// Shared, lazily built rule for a given node count (thread-safe).
  static const GaussLegendre& cached(int n);

 private:
  VectorXd nodes_;
  VectorXd weights_;
};

/// One composite pass: `panels` equal sub-intervals of [a, b].
template <typename F>
double integrate_panels(F&& f, double a, double b, const GaussLegendre& rule, int panels) {
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h;
    double acc = 0.0;
    for (int i = 0; i < rule.size(); ++i) {
      acc += rule.weights()[i] * f(mid + 0.5 * h * rule.nodes()[i]);
    }
    total += 0.5 * h * acc;
  }
  return total;
}

/// Panel-doubling composite Gauss-Legendre on [a, b].
template <typename F>
double integrate_1d(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
  spec.validate();
  if (!(a < b)) throw std::invalid_argument("integrate_1d: interval must satisfy a < b");
  const GaussLegendre& rule = GaussLegendre::cached(spec.node_count);
  double prev = integrate_panels(f, a, b, rule, 1);
  for (int panels = 2; panels <= spec.panel_count; panels *= 2) {
    const double cur = integrate_panels(f, a, b, rule, panels);
    if (std::abs(cur - prev) <= std::max(spec.abs_tol, spec.rel_tol * std::abs(cur))) {
      return cur;
    }
    prev = cur;
  }
  throw NonConvergenceError("integrate_1d: panel doubling reached " +
                            std::to_string(spec.panel_count) +
                            " panels without meeting tolerance");
}

}  // namespace xlmimo
