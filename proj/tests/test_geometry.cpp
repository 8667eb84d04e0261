#include <doctest.h>

#include <cmath>

#include "xlmimo/geometry.hpp"
#include "xlmimo/rng.hpp"

using namespace xlmimo;

TEST_CASE("element_offsets: symmetry and spacing") {
  const VectorXd two = element_offsets(ArrayGeometry(2, 0.5, 1.0));
  CHECK(two[0] == doctest::Approx(-0.25));
  CHECK(two[1] == doctest::Approx(0.25));

  const VectorXd three = element_offsets(ArrayGeometry(3, 1.0, 1.0));
  CHECK(three[0] == doctest::Approx(-1.0));
  CHECK(three[1] == doctest::Approx(0.0));
  CHECK(three[2] == doctest::Approx(1.0));

  const VectorXd four = element_offsets(ArrayGeometry(4, 0.5, 1.0));
  CHECK(four[0] == doctest::Approx(-0.75));
  CHECK(four[3] == doctest::Approx(0.75));

  for (int n : {2, 5, 16, 33}) {
    const VectorXd eta = element_offsets(ArrayGeometry(n, 0.37, 1.0));
    CHECK(std::abs(eta.sum()) < 1e-12 * n);
    for (int i = 0; i + 1 < n; ++i) {
      CHECK(eta[i + 1] - eta[i] == doctest::Approx(0.37).epsilon(1e-12));
      CHECK(eta[i] == doctest::Approx(-eta[n - 1 - i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("exact_distance basics and triangle inequality") {
  CHECK(exact_distance(10.0, 0.0, 1.0) == doctest::Approx(std::sqrt(101.0)).epsilon(1e-14));
  CHECK(exact_distance(3.7, 0.4, 0.0) == doctest::Approx(3.7).epsilon(1e-14));

  // Collapses toward |d - eta| as theta -> pi/2 with eta = d.
  CHECK(exact_distance(5.0, kPi / 2 - 1e-7, 5.0) < 1e-5);

  RngStream stream(77, 0);
  for (int i = 0; i < 2000; ++i) {
    const double d = stream.uniform(0.1, 50.0);
    const double theta = stream.uniform(-kPi / 2 + 0.01, kPi / 2 - 0.01);
    const double eta = stream.uniform(-30.0, 30.0);
    const double dist = exact_distance(d, theta, eta);
    CHECK(dist >= std::abs(d - std::abs(eta)) - 1e-12);
    CHECK(dist <= d + std::abs(eta) + 1e-12);
  }
}

TEST_CASE("fresnel_distance values and accuracy") {
  CHECK(fresnel_distance(42.0, 0.7, 0.0) == doctest::Approx(42.0).epsilon(1e-14));
  CHECK(fresnel_distance(100.0, 0.0, 1.0) == doctest::Approx(100.005).epsilon(1e-14));

  // Error is third order in eta/d: here (eta/d)^3 ~ 4e-3 and the actual
  // next Taylor term ~ 8.3e-4; check both the bound and the tighter value.
  const double lambda = 0.0428;
  const double d = 200 * lambda;
  const double eta = 32 * lambda;
  const double exact = exact_distance(d, kPi / 6, eta);
  const double rel_err = std::abs(fresnel_distance(d, kPi / 6, eta) - exact) / exact;
  CHECK(rel_err <= std::pow(eta / d, 3));
  CHECK(rel_err <= 1e-3);
}

TEST_CASE("fresnel error shrinks monotonically with distance") {
  const int n = 64;
  const double d_a = 0.5;
  const double eta = 0.5 * n * d_a;
  const double theta = 0.35;
  double prev_err = 1e300;
  for (double d = 10.0 * n * d_a; d <= 1.000001e6 * n * d_a; d *= 10.0) {
    const double err = std::abs(fresnel_distance(d, theta, eta) - exact_distance(d, theta, eta));
    CHECK(err <= prev_err);
    prev_err = err;
  }
}

TEST_CASE("nonstationarity_coeff definition") {
  CHECK(nonstationarity_coeff(12.0, 0.3, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(nonstationarity_coeff(10.0, 0.0, 10.0) ==
        doctest::Approx(std::sqrt(200.0) / 10.0).epsilon(1e-14));
  RngStream stream(78, 0);
  for (int i = 0; i < 500; ++i) {
    const double d = stream.uniform(0.5, 40.0);
    const double theta = stream.uniform(-1.2, 1.2);
    const double eta = stream.uniform(-20.0, 20.0);
    const double c = nonstationarity_coeff(d, theta, eta);
    CHECK(c > 0.0);
    CHECK(c * d == doctest::Approx(exact_distance(d, theta, eta)).epsilon(1e-13));
  }
}

TEST_CASE("steering_vector: far-field phase limit and norms") {
  const double lambda = 0.05;
  const ArrayGeometry geom(64, lambda / 2, lambda);
  const double theta = 0.4;
  const ClusterCenter far(1e6 * lambda, theta);
  const VectorXcd b = steering_vector(geom, far, DistanceMode::exact);
  const VectorXd eta = element_offsets(geom);
  const double kappa = geom.wave_number();

  // Phases must match exp(j kappa eta sin theta) up to one common rotation.
  const Complex ref = b[0] * std::polar(1.0, -kappa * eta[0] * std::sin(theta));
  for (int n = 0; n < 64; ++n) {
    const Complex rot = b[n] * std::polar(1.0, -kappa * eta[n] * std::sin(theta));
    CHECK(std::abs(std::arg(rot / ref)) < 1e-3);
  }

  const VectorXcd single = steering_vector(ArrayGeometry(1, lambda / 2, lambda),
                                           ClusterCenter(3.0, 0.0));
  CHECK(std::abs(single[0]) == doctest::Approx(1.0).epsilon(1e-14));

  const ClusterCenter moderate(100.0 * 64 * lambda / 2, 0.25);
  const VectorXcd bm = steering_vector(geom, moderate);
  CHECK(bm.squaredNorm() == doctest::Approx(64.0).epsilon(0.01));
}

TEST_CASE("steering vectors decorrelate as the array grows") {
  const double lambda = 0.05;
  const ClusterCenter c1(200 * lambda, 0.3);
  const ClusterCenter c2(250 * lambda, -0.15);
  double prev = 2.0;
  for (int n : {64, 256, 1024}) {
    const ArrayGeometry geom(n, lambda / 2, lambda);
    const VectorXcd b1 = steering_vector(geom, c1);
    const VectorXcd b2 = steering_vector(geom, c2);
    const double overlap = std::abs(b1.dot(b2)) / std::sqrt(b1.squaredNorm() * b2.squaredNorm());
    CHECK(overlap < prev);
    prev = overlap;
  }
}

TEST_CASE("geometry validation") {
  CHECK_THROWS_AS(ArrayGeometry(0, 0.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ArrayGeometry(4, -0.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ClusterCenter(-1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ClusterCenter(1.0, kPi / 2), std::invalid_argument);
  CHECK_THROWS_AS(ScattererParam(0.0, 0.1), std::invalid_argument);
}
