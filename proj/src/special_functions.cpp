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

#include "xlmimo/special_functions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace xlmimo {

namespace {

constexpr double kSeriesLimit = 20.0;  // series below, asymptotic above
constexpr double kLogDblMax = 709.782712893384;

// Sum_k (z/4)^k / (k!)^2 with z = w^2.  All-positive terms for real
// arguments; for complex z the partial sums stay O(|result|) while
// |w| <= kSeriesLimit, keeping cancellation harmless.
Complex i0_series_sq(Complex z) {
  Complex term(1.0, 0.0);
  Complex sum(1.0, 0.0);
  for (int k = 1; k < 400; ++k) {
    term *= z / (4.0 * k * k);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

double i0_series(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 400; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

// Large-|w| expansion with the recessive exponential kept so the formula
// stays uniformly valid up to the imaginary axis (where I0(jt) = J0(t)):
//   I0(w) ~ [e^w S-(w) + j*sgn(Im w) e^{-w} S+(w)] / sqrt(2*pi*w),
// coefficients A_k = prod_j (2j-1)^2 / (8j).  Requires Re(w) >= 0.
ScaledComplex i0_asymptotic_scaled(Complex w) {
  Complex s_dom(1.0, 0.0);  // all-positive coefficients, goes with e^{+w}
  Complex s_rec(1.0, 0.0);  // alternating (K-type) series, goes with e^{-w}
  Complex term(1.0, 0.0);
  double prev = std::numeric_limits<double>::max();
  for (int k = 1; k < 64; ++k) {
    const double num = (2.0 * k - 1.0) * (2.0 * k - 1.0);
    term *= num / (8.0 * k) / w;
    const double mag = std::abs(term);
    if (mag > prev) break;  // divergent tail reached
    s_dom += term;
    s_rec += (k % 2 == 0) ? term : -term;
    if (mag < 1e-18) break;
    prev = mag;
  }
  const double x = w.real();
  const double y = w.imag();
  const double sgn = (y < 0.0) ? -1.0 : 1.0;
  const Complex osc = std::polar(1.0, y);
  const Complex recessive =
      Complex(0.0, sgn) * std::exp(-2.0 * x) * std::conj(osc) * s_rec;
  const Complex mantissa = (osc * s_dom + recessive) / std::sqrt(kTwoPi * w);
  return {mantissa, x};
}

// K0/K1 power series for 0 < x <= 2 (no cancellation in this range).
BesselK01 k01_series(double x) {
  const double q = 0.25 * x * x;
  const double lg = std::log(0.5 * x);

  // I0 and the companion sum with harmonic weights.
  double term = 1.0;
  double i0 = 1.0;
  double k0_sum = 0.0;
  double harmonic = 0.0;
  for (int k = 1; k < 60; ++k) {
    term *= q / (static_cast<double>(k) * k);
    harmonic += 1.0 / k;
    i0 += term;
    k0_sum += term * harmonic;
    if (term < 1e-19 * i0) break;
  }
  const double k0 = -(lg + kEulerGamma) * i0 + k0_sum;

  // I1 and the digamma-weighted sum for K1.
  double t1 = 0.5 * x;  // k = 0 term of I1
  double i1 = t1;
  double psi_sum = 1.0 - 2.0 * kEulerGamma;  // psi(1) + psi(2)
  double s1 = psi_sum;                       // Sum_k [psi(k+1)+psi(k+2)] q^k/(k!(k+1)!)
  double tk = 1.0;                           // q^k / (k!(k+1)!)
  for (int k = 1; k < 60; ++k) {
    tk *= q / (static_cast<double>(k) * (k + 1.0));
    psi_sum += 1.0 / k + 1.0 / (k + 1.0);
    s1 += tk * psi_sum;
    t1 *= q / (static_cast<double>(k) * (k + 1.0));
    i1 += t1;
    if (tk < 1e-19) break;
  }
  const double k1 = 1.0 / x + lg * i1 - 0.25 * x * s1;
  return {k0, k1};
}

// Steed/Temme continued fraction for K0, K1 at x >= 2; near machine
// precision throughout that range.
BesselK01 k01_continued_fraction(double x) {
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  const double a1 = 0.25;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 2; i <= 20000; ++i) {
    a -= 2.0 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::fabs(dels / s) <= kEps) break;
  }
  h = a1 * h;
  const double k0 = std::sqrt(kPi / (2.0 * x)) * std::exp(-x) / s;
  const double k1 = k0 * (x + 0.5 - h) / x;
  return {k0, k1};
}

}  // namespace

double bessel_i0(double x) {
  if (!std::isfinite(x) || x < 0.0) {
    throw std::domain_error("bessel_i0: argument must be finite and non-negative");
  }
  if (x < kSeriesLimit) return i0_series(x);
  const ScaledComplex v = i0_asymptotic_scaled(Complex(x, 0.0));
  const double mant = v.mantissa.real();
  const double lg = v.exponent + std::log(mant);
  if (lg >= kLogDblMax) {
    throw std::overflow_error("bessel_i0: result exceeds double range");
  }
  return std::exp(lg);
}

double bessel_i0_scaled(double x) {
  if (!std::isfinite(x) || x < 0.0) {
    throw std::domain_error("bessel_i0_scaled: argument must be finite and non-negative");
  }
  if (x < kSeriesLimit) return std::exp(-x) * i0_series(x);
  return i0_asymptotic_scaled(Complex(x, 0.0)).mantissa.real();
}

BesselK01 bessel_k01(double x) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw std::domain_error("bessel_k01: argument must be finite and positive");
  }
  return (x <= 2.0) ? k01_series(x) : k01_continued_fraction(x);
}

double bessel_k(int order, double x) {
  if (order != 0 && order != 1) {
    throw std::domain_error("bessel_k: order must be 0 or 1");
  }
  const BesselK01 k = bessel_k01(x);
  return order == 0 ? k.k0 : k.k1;
}

ScaledComplex bessel_i0_complex_scaled(Complex w) {
  if (w.real() < 0.0) w = -w;  // I0 is even
  if (std::abs(w) < kSeriesLimit) {
    return {i0_series_sq(w * w), 0.0};
  }
  return i0_asymptotic_scaled(w);
}

Complex bessel_i0_sqrt_ratio(Complex z, double a) {
  if (!std::isfinite(a) || a < 0.0) {
    throw std::domain_error("bessel_i0_sqrt_ratio: denominator argument must be >= 0");
  }
  const Complex w = std::sqrt(z);
  const ScaledComplex num = bessel_i0_complex_scaled(w);
  const double den_scaled = bessel_i0_scaled(a);  // e^{-a} I0(a)
  // ratio = num.mantissa e^{num.exponent} / (den_scaled e^{a})
  const double shift = num.exponent - a;
  return num.mantissa / den_scaled * std::exp(shift);
}

}  // namespace xlmimo
