#include <doctest.h>

#include <cmath>

#include "flatres/semigroup.hpp"

using namespace flatres;
using cplx = std::complex<double>;

namespace {

Eigen::MatrixXcd nilpotent() {
  Eigen::MatrixXcd n = Eigen::MatrixXcd::Zero(2, 2);
  n(0, 1) = 1.0;
  return n;
}

// Non-normal, stable, not a contraction.
Eigen::MatrixXcd transient() {
  Eigen::MatrixXcd b(2, 2);
  b << -0.1, 3.0, 0.0, -0.2;
  return b;
}

}  // namespace

TEST_CASE("semigroup bounds") {
  CHECK(semigroup_bound(-Eigen::MatrixXcd::Identity(2, 2)) == 1.0);

  Eigen::MatrixXcd skew(2, 2);
  skew << cplx(0, 1), 2.0, -2.0, cplx(0, -0.5);
  CHECK(std::abs(semigroup_bound(skew) - 1.0) <= 1e-12);

  // exp(tN) = I + tN, whose norm (t + sqrt(t^2 + 4)) / 2 peaks at t_max.
  const double k = semigroup_bound(nilpotent(), 2.0, 200);
  CHECK(k == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-12));

  CHECK_THROWS_AS(semigroup_bound(1000.0 * Eigen::MatrixXcd::Identity(2, 2), 10.0, 200), unbounded_semigroup);
  CHECK_THROWS_AS(semigroup_bound(nilpotent(), 0.0, 200), std::invalid_argument);
  CHECK_THROWS_AS(semigroup_bound(nilpotent(), 1.0, 9), std::invalid_argument);
}

TEST_CASE("contraction flag and numerical abscissa") {
  CHECK(numerical_abscissa(-Eigen::MatrixXcd::Identity(3, 3)) == doctest::Approx(-1.0));
  const auto c = make_generator_case(-Eigen::MatrixXcd::Identity(2, 2));
  CHECK(c.contraction);
  CHECK(c.bound == 1.0);
  const auto t = make_generator_case(transient());
  CHECK_FALSE(t.contraction);
  CHECK(t.bound > 1.0);
  for (int s = 0; s < 5; ++s) CHECK(numerical_abscissa(random_contraction_generator(6, s)) <= 0.0);
}

TEST_CASE("Kallman-Rota for -I is exactly 1") {
  const auto c = make_generator_case(-Eigen::MatrixXcd::Identity(3, 3));
  const auto r = check_kallman_rota(c, 100, 1);
  CHECK(r.max_ratio == 1.0);
  CHECK(r.samples_used == 100);
}

TEST_CASE("Kallman-Rota on contraction generators and their adjoints") {
  for (int s = 0; s < 5; ++s) {
    const auto c = make_generator_case(random_contraction_generator(2 + s, 40 + s));
    CHECK(check_kallman_rota(c, 1000, 50 + s).max_ratio <= 4.0);
    CHECK(check_kallman_rota(c, 1000, 50 + s, true).max_ratio <= 4.0);
  }
  const auto t = make_generator_case(transient());
  CHECK(check_kallman_rota(t, 1000, 3).max_ratio <= 4.0);
  CHECK(check_kallman_rota(t, 1000, 3, true).max_ratio <= 4.0);
}

TEST_CASE("Rota ratios") {
  const auto minus_i = make_generator_case(-Eigen::MatrixXcd::Identity(2, 2));
  CHECK(check_rota_ratio(minus_i, 3, 2, 50, 1).max_ratio == doctest::Approx(0.25).epsilon(1e-14));

  for (int s = 0; s < 5; ++s) {
    const auto c = make_generator_case(random_contraction_generator(4, 60 + s));
    CHECK(check_rota_ratio(c, 2, 1, 1000, 70 + s).max_ratio <= 4.0);
    const double once = check_rota_ratio(c, 3, 1, 1000, 80 + s).max_ratio;
    const double twice = check_rota_ratio(c, 3, 1, 2000, 80 + s).max_ratio;
    CHECK(std::isfinite(twice));
    CHECK(twice >= once);
    CHECK(twice <= 1.1 * once);
  }
  CHECK_THROWS_AS(check_rota_ratio(minus_i, 6, 1, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(check_rota_ratio(minus_i, 3, 3, 10, 1), std::invalid_argument);
}

TEST_CASE("shifting the generator left does not raise the bound") {
  const Eigen::MatrixXcd b = transient();
  const double k = semigroup_bound(b);
  for (double mu : {0.0, 0.1, 1.0, 5.0}) {
    const Eigen::MatrixXcd shifted = b - mu * Eigen::MatrixXcd::Identity(2, 2);
    const auto c = make_generator_case(shifted);
    CHECK(c.bound <= k + 1e-12);
    CHECK(check_kallman_rota(c, 1000, 90).max_ratio <= 4.0);
  }
}

TEST_CASE("interpolation bound with C(eps) = 1/eps + eps") {
  for (int s = 0; s < 5; ++s) {
    const auto c = make_generator_case(random_contraction_generator(5, 100 + s));
    for (double eps : {0.1, 1.0, 10.0}) CHECK(check_interpolation_bound(c, eps, 1000, 110 + s) <= 1e-12);
  }
}
