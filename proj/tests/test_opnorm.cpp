#include <doctest.h>

#include <cmath>
#include <random>

#include "flatres/opnorm.hpp"
#include "flatres/shift_operators.hpp"

using namespace flatres;

namespace {

Eigen::MatrixXcd random_matrix(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXcd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = cplx(normal(rng), normal(rng));
  return m;
}

double witness_value(const Eigen::MatrixXcd& m, const NormSpec& in, const NormSpec& out,
                     const Eigen::VectorXcd& w) {
  return eval_norm(out, Eigen::VectorXcd(m * w)) / eval_norm(in, w);
}

}  // namespace

TEST_CASE("power iteration") {
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 2.0;
  const auto e = opnorm_l2(d);
  CHECK(e.value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(e.method == OpnormMethod::PowerIteration);
  CHECK(e.converged);

  const auto z = opnorm_l2(Eigen::MatrixXcd::Zero(3, 3));
  CHECK(z.value == 0.0);
  CHECK(z.witness.norm() == doctest::Approx(1.0));

  for (int s = 0; s < 10; ++s) {
    const Eigen::MatrixXcd m = random_matrix(6, 5, 100 + s);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    CHECK(opnorm_l2(m).value == doctest::Approx(svd.singularValues()(0)).epsilon(1e-10));
  }
}

TEST_CASE("resolvents at the origin in l2") {
  const auto ra = resolvent_matrix(ShiftSpec::kind_a(0.25), 0.0, 40);
  CHECK(std::abs(opnorm_l2(ra.entries).value - 1.0) <= 1e-9);
  const auto rb = resolvent_matrix(ShiftSpec::kind_b(4.0), 0.0, 10);
  CHECK(std::abs(opnorm_l2(rb.entries).value - 4.0) <= 1e-9);
}

TEST_CASE("induced l1 and l-infinity norms have closed forms") {
  for (int s = 0; s < 10; ++s) {
    const Eigen::MatrixXcd m = random_matrix(5, 5, 200 + s);
    const double col = m.cwiseAbs().colwise().sum().maxCoeff();
    const double row = m.cwiseAbs().rowwise().sum().maxCoeff();
    CHECK(opnorm_general(m, NormSpec::l1(), NormSpec::l1()).value == doctest::Approx(col).epsilon(1e-12));
    CHECK(opnorm_general(m, NormSpec::linf(), NormSpec::linf()).value == doctest::Approx(row).epsilon(1e-9));
  }
  CHECK(opnorm_general(Eigen::MatrixXcd::Identity(2, 2), NormSpec::linf(), NormSpec::linf()).value == 1.0);
}

TEST_CASE("kind A resolvent is 1 in the star norm") {
  const auto s = ShiftSpec::kind_a(0.25);
  const auto r = resolvent_matrix(s, 0.2, 40);
  const auto e = opnorm_general(r.entries, NormSpec::star(), NormSpec::star());
  CHECK(e.method == OpnormMethod::ExtremePoint);
  CHECK(e.value >= 1.0 - 1e-6);
  CHECK(e.value <= 1.0 + r.truncation_tail + 1e-6);
}

TEST_CASE("estimates are realized by their witnesses") {
  const std::vector<NormSpec> norms{NormSpec::l1(), NormSpec::l2(), NormSpec::linf(), NormSpec::star()};
  for (int s = 0; s < 5; ++s) {
    const Eigen::MatrixXcd m = random_matrix(5, 5, 300 + s);
    for (const auto& in : norms)
      for (const auto& out : norms) {
        const auto e = opnorm_general(m, in, out);
        CHECK(e.is_certified_lower_bound);
        CHECK(eval_norm(in, e.witness) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(witness_value(m, in, out, e.witness) - e.value) <= 1e-12 * e.value);
      }
  }
}

TEST_CASE("more restarts never lower the estimate") {
  for (int s = 0; s < 5; ++s) {
    const Eigen::MatrixXcd m = random_matrix(7, 7, 400 + s);
    double prev = 0.0;
    for (int restarts : {0, 4, 16, 64}) {
      OpnormConfig c;
      c.restarts = restarts;
      const double v = opnorm_general(m, NormSpec::star(), NormSpec::l1(), c).value;
      CHECK(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("scale equivariance") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  for (int s = 0; s < 5; ++s) {
    const Eigen::MatrixXcd m = random_matrix(5, 5, 500 + s);
    const cplx c(unif(rng), unif(rng));
    for (const auto& in : {NormSpec::star(), NormSpec::l1()}) {
      const double base = opnorm_general(m, in, NormSpec::linf()).value;
      const double scaled = opnorm_general(Eigen::MatrixXcd(c * m), in, NormSpec::linf()).value;
      CHECK(std::abs(scaled - std::abs(c) * base) <= 1e-10 * std::abs(c) * base);
    }
  }
}

TEST_CASE("l2 ascent agrees with power iteration") {
  for (int s = 0; s < 10; ++s) {
    const Eigen::MatrixXcd m = random_matrix(6, 6, 600 + s);
    const double a = opnorm_general(m, NormSpec::l2(), NormSpec::l2()).value;
    CHECK(std::abs(a - opnorm_l2(m).value) <= 1e-8 * a);
  }
}

TEST_CASE("star and l2 operator norms are within a factor 2") {
  for (int s = 0; s < 10; ++s) {
    const Eigen::MatrixXcd m = random_matrix(7, 7, 700 + s);
    const double star = opnorm_general(m, NormSpec::star(), NormSpec::star()).value;
    const double l2 = opnorm_l2(m).value;
    CHECK(star >= 0.5 * l2);
    CHECK(star <= 2.0 * l2);
  }
}

TEST_CASE("brute-force oracle") {
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 2.0;
  const auto o = oracle_opnorm(d, NormSpec::l2(), NormSpec::l2());
  CHECK(o.method == OpnormMethod::Oracle);
  CHECK(std::abs(o.value - 2.0) <= 1e-3);

  Eigen::MatrixXcd anti = Eigen::MatrixXcd::Zero(2, 2);
  anti(0, 1) = 1.0;
  anti(1, 0) = 1.0;
  CHECK(oracle_opnorm(anti, NormSpec::l1(), NormSpec::linf()).value == doctest::Approx(1.0).epsilon(1e-3));

  CHECK_THROWS_AS(oracle_opnorm(Eigen::MatrixXcd::Identity(5, 5), NormSpec::l2(), NormSpec::l2()),
                  std::invalid_argument);

  for (int s = 0; s < 3; ++s) {
    const Eigen::MatrixXcd m = random_matrix(3, 3, 800 + s);
    const double g = opnorm_general(m, NormSpec::star(), NormSpec::l1()).value;
    const double b = oracle_opnorm(m, NormSpec::star(), NormSpec::l1(), 100000, 900 + s).value;
    CHECK(std::abs(g - b) <= 1e-2 * g);
    CHECK(b <= g * (1 + 1e-9));
  }
}

TEST_CASE("deterministic and validated") {
  const Eigen::MatrixXcd m = random_matrix(5, 5, 1000);
  const auto a = opnorm_general(m, NormSpec::star(), NormSpec::l2());
  const auto b = opnorm_general(m, NormSpec::star(), NormSpec::l2());
  CHECK(a.value == b.value);
  CHECK(a.witness == b.witness);
  CHECK_THROWS_AS(opnorm_general(Eigen::MatrixXcd::Identity(1, 1), NormSpec::star(), NormSpec::l2()),
                  std::invalid_argument);
  CHECK(mix_seed(1, 2) != mix_seed(1, 3));
  CHECK(to_string(OpnormMethod::ExtremePoint) == "extreme-point");
}
