#include "flatres/semigroup.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "flatres/opnorm.hpp"

namespace flatres {

namespace {

double spectral_norm(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

Eigen::VectorXcd gaussian(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = std::complex<double>(normal(rng), normal(rng));
  return v;
}

constexpr double kDegenerate = 1e-12;

}  // namespace

double numerical_abscissa(const Eigen::MatrixXcd& b) {
  const Eigen::MatrixXcd h = 0.5 * (b + b.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

double semigroup_bound(const Eigen::MatrixXcd& b, double t_max, int steps) {
  if (!(t_max > 0.0) || steps < 10)
    throw std::invalid_argument("semigroup_bound requires t_max > 0 and steps >= 10");
  const Eigen::MatrixXcd step = (b * (t_max / steps)).exp();
  Eigen::MatrixXcd power = Eigen::MatrixXcd::Identity(b.rows(), b.cols());
  double k = 1.0;
  for (int j = 1; j <= steps; ++j) {
    power = power * step;
    const double norm = spectral_norm(power);
    if (!std::isfinite(norm) || norm > 1e150)
      throw unbounded_semigroup("semigroup grows without bound over the time window");
    k = std::max(k, norm);
  }
  return k;
}

GeneratorCase make_generator_case(Eigen::MatrixXcd b, double t_max, int steps) {
  GeneratorCase c;
  c.contraction = numerical_abscissa(b) <= 0.0;
  c.bound = c.contraction ? 1.0 : semigroup_bound(b, t_max, steps);
  c.generator = std::move(b);
  return c;
}

Eigen::MatrixXcd random_contraction_generator(int n, std::uint64_t seed) {
  std::mt19937_64 rng(mix_seed(seed, 0xB0));
  std::normal_distribution<double> normal;
  Eigen::MatrixXcd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = std::complex<double>(normal(rng), normal(rng));
  const double mu = numerical_abscissa(g);
  g -= (mu + 1e-12) * Eigen::MatrixXcd::Identity(n, n);
  return g;
}

RatioSummary check_kallman_rota(const GeneratorCase& c, int trials, std::uint64_t seed,
                                bool adjoint) {
  const Eigen::MatrixXcd b = adjoint ? Eigen::MatrixXcd(c.generator.adjoint()) : c.generator;
  RatioSummary out;
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(t)));
    const Eigen::VectorXcd w = gaussian(b.cols(), rng);
    const Eigen::VectorXcd bw = b * w;
    const double b2w = (b * bw).norm();
    if (b2w < kDegenerate) continue;
    const double bwn = bw.norm();
    const double ratio = (bwn / w.norm()) * (bwn / b2w) / (c.bound * c.bound);
    out.max_ratio = std::max(out.max_ratio, ratio);
    ++out.samples_used;
  }
  return out;
}

RatioSummary check_rota_ratio(const GeneratorCase& c, int n, int k, int trials,
                              std::uint64_t seed, bool adjoint) {
  if (n < 2 || n > 5 || k < 1 || k > n - 1)
    throw std::invalid_argument("check_rota_ratio requires 2 <= n <= 5 and 1 <= k < n");
  const Eigen::MatrixXcd b = adjoint ? Eigen::MatrixXcd(c.generator.adjoint()) : c.generator;
  RatioSummary out;
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(t)));
    const Eigen::VectorXcd w = gaussian(b.cols(), rng);
    Eigen::VectorXcd p = w;
    double bkw = 0.0;
    for (int j = 1; j <= n; ++j) {
      p = b * p;
      if (j == k) bkw = p.norm();
    }
    const double bnw = p.norm();
    if (bnw < kDegenerate) continue;
    const double wn = w.norm();
    const double ratio = std::pow(bkw, n) / (std::pow(bnw + wn, k) * std::pow(wn, n - k));
    out.max_ratio = std::max(out.max_ratio, ratio);
    ++out.samples_used;
  }
  return out;
}

double check_interpolation_bound(const GeneratorCase& c, double eps, int trials,
                                 std::uint64_t seed) {
  const Eigen::MatrixXcd& b = c.generator;
  double worst = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(t)));
    const Eigen::VectorXcd w = gaussian(b.cols(), rng);
    const Eigen::VectorXcd bw = b * w;
    const double lhs = bw.norm();
    const double rhs = eps * (b * bw).norm() + (1.0 / eps + eps) * w.norm();
    worst = std::max(worst, (lhs - rhs) / w.norm());
  }
  return worst;
}

}  // namespace flatres
