#include "flatres/convexity_probe.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "flatres/opnorm.hpp"

namespace flatres {

double sup_violation(const NormSpec& norm, int first_index, const Eigen::VectorXcd& x,
                     const Eigen::VectorXcd& y, int zeta_samples) {
  double worst = eval_norm(norm, x, first_index);
  for (int i = 0; i < zeta_samples; ++i) {
    const cplx zeta = std::polar(1.0, 2.0 * std::numbers::pi * i / zeta_samples);
    worst = std::max(worst, eval_norm(norm, Eigen::VectorXcd(x + zeta * y), first_index));
  }
  return worst - 1.0;
}

namespace {

// Largest s in [0, s_max] with violation(s) <= tol; violation is convex and
// non-decreasing in s when it starts at or below tol.
template <typename F>
double largest_feasible(F&& violation, double s_max, double tol) {
  if (violation(0.0) > tol) return -1.0;
  if (violation(s_max) <= tol) return s_max;
  double lo = 0.0, hi = s_max;
  for (int it = 0; it < 100 && hi - lo > 1e-13 * s_max; ++it) {
    const double mid = 0.5 * (lo + hi);
    (violation(mid) <= tol ? lo : hi) = mid;
  }
  return lo;
}

Eigen::VectorXcd random_direction(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = cplx(normal(rng), normal(rng));
  return v;
}

// Candidate (x, y-direction) pairs: unit vectors first, then random ones.
template <typename Visit>
void for_each_pair(Eigen::Index dim, int trials, std::uint64_t seed, Visit&& visit) {
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j)
      if (i != j && visit(Eigen::VectorXcd::Unit(dim, i), Eigen::VectorXcd::Unit(dim, j))) return;
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(t)));
    Eigen::VectorXcd x = random_direction(dim, rng);
    Eigen::VectorXcd y = random_direction(dim, rng);
    if (visit(std::move(x), std::move(y))) return;
  }
}

}  // namespace

std::optional<ConvexityWitness> csc_witness_search(const NormSpec& norm, int first_index,
                                                   Eigen::Index dim, int trials,
                                                   std::uint64_t seed,
                                                   const ConvexityProbeConfig& cfg) {
  if (trials < 1) throw std::invalid_argument("csc_witness_search requires trials >= 1");
  validate_norm(norm, make_view(Eigen::VectorXcd::Zero(dim), first_index).indices);
  std::optional<ConvexityWitness> found;
  for_each_pair(dim, trials, seed, [&](Eigen::VectorXcd x, Eigen::VectorXcd y) {
    x /= eval_norm(norm, x, first_index);
    y /= eval_norm(norm, y, first_index);
    auto violation = [&](double s) {
      return sup_violation(norm, first_index, x, Eigen::VectorXcd(s * y), cfg.zeta_samples);
    };
    if (violation(cfg.witness_floor) > cfg.tol) return false;
    const double s = largest_feasible(violation, 2.0, cfg.tol);
    if (s < cfg.witness_floor) return false;
    ConvexityWitness w;
    w.x = x;
    w.y = s * y;
    w.sup_violation = violation(s);
    found = std::move(w);
    return true;
  });
  return found;
}

double cuc_modulus_estimate(const NormSpec& norm, int first_index, Eigen::Index dim,
                            double epsilon, int trials, std::uint64_t seed,
                            const ConvexityProbeConfig& cfg) {
  if (!(epsilon > 0.0 && epsilon <= 1.0))
    throw std::invalid_argument("cuc_modulus_estimate requires epsilon in (0, 1]");
  validate_norm(norm, make_view(Eigen::VectorXcd::Zero(dim), first_index).indices);
  double best = 0.0;
  for_each_pair(dim, trials, seed, [&](Eigen::VectorXcd u, Eigen::VectorXcd v) {
    u /= eval_norm(norm, u, first_index);
    v *= epsilon / eval_norm(norm, v, first_index);
    auto violation = [&](double a) {
      return sup_violation(norm, first_index, Eigen::VectorXcd(a * u), v, cfg.zeta_samples);
    };
    best = std::max(best, largest_feasible(violation, 1.0 + cfg.tol, cfg.tol));
    return false;
  });
  return std::max(0.0, 1.0 - best);
}

}  // namespace flatres
