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

/// Modified Bessel function of the first kind, order zero.
/// Relative error below 1e-12 on [0, 700]; throws std::overflow_error once
/// I0(x) leaves the double range and std::domain_error for negative or
/// non-finite arguments.
double bessel_i0(double x);

/// exp(-x) * I0(x); stable for arbitrarily large x >= 0.
double bessel_i0_scaled(double x);

/// Modified Bessel functions of the second kind, orders zero and one.
/// x must be strictly positive.
struct BesselK01 {
  double k0;
  double k1;
};
BesselK01 bessel_k01(double x);

/// K_order(x) for order in {0, 1}.
double bessel_k(int order, double x);

/// I0(sqrt(z)) / I0(a) for complex z and real a >= 0, evaluated without
/// intermediate overflow.  I0 is even, so the square-root branch does not
/// affect the value.
Complex bessel_i0_sqrt_ratio(Complex z, double a);

/// I0(w) for complex w together with a power-of-e scale:
/// I0(w) = mantissa * exp(exponent).  The exponent is real.
struct ScaledComplex {
  Complex mantissa;
  double exponent;
};
ScaledComplex bessel_i0_complex_scaled(Complex w);

}  // namespace xlmimo
