#include "flatres/opnorm.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace flatres {

std::string to_string(OpnormMethod m) {
  switch (m) {
    case OpnormMethod::PowerIteration: return "power-iteration";
    case OpnormMethod::MultiStartAscent: return "multi-start-ascent";
    case OpnormMethod::ExtremePoint: return "extreme-point";
    case OpnormMethod::Oracle: return "oracle";
  }
  return "?";
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

Eigen::VectorXcd gaussian_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = cplx(normal(rng), normal(rng));
  return v;
}

Eigen::Index largest_modulus_index(const Eigen::VectorXcd& v) {
  Eigen::Index i = 0;
  v.cwiseAbs().maxCoeff(&i);  // first maximal entry
  return i;
}

// Deterministic reduction: larger value wins; exact ties go to the witness
// whose largest-modulus coordinate has the smaller index.
bool better(double value, const Eigen::VectorXcd& x, double best_value,
            const Eigen::VectorXcd& best_x) {
  if (value != best_value) return value > best_value;
  return largest_modulus_index(x) < largest_modulus_index(best_x);
}

struct AscentResult {
  double value = 0.0;
  Eigen::VectorXcd x;
  bool converged = false;
};

AscentResult ascend(const Eigen::MatrixXcd& m, const NormSpec& in_norm, const NormSpec& out_norm,
                    int in_first, int out_first, Eigen::VectorXcd x, const OpnormConfig& cfg) {
  AscentResult r;
  r.x = std::move(x);
  Eigen::VectorXcd y = m * r.x;
  IndexedView yv = make_view(y, out_first);
  r.value = eval_norm(out_norm, yv);
  for (int it = 0; it < cfg.max_iterations; ++it) {
    const Eigen::VectorXcd s = norm_subgradient(out_norm, yv);
    const Eigen::VectorXcd g = m.adjoint() * s;
    BallMaximizer step = ball_maximizer(in_norm, make_view(g, in_first));
    const Eigen::VectorXcd y_next = m * step.x;
    IndexedView yv_next = make_view(y_next, out_first);
    const double v_next = eval_norm(out_norm, yv_next);
    if (!(v_next > r.value * (1.0 + cfg.rel_tol))) {
      if (v_next > r.value) {
        r.value = v_next;
        r.x = std::move(step.x);
      }
      r.converged = true;
      break;
    }
    r.value = v_next;
    r.x = std::move(step.x);
    yv = std::move(yv_next);
  }
  return r;
}

void check_dimensions(const Eigen::MatrixXcd& m, const NormSpec& in_norm,
                      const NormSpec& out_norm) {
  if (m.rows() == 0 || m.cols() == 0) throw std::invalid_argument("opnorm: empty matrix");
  validate_norm(in_norm, make_view(Eigen::VectorXcd::Zero(m.cols()),
                                   window_first_index(m.cols())).indices);
  validate_norm(out_norm, make_view(Eigen::VectorXcd::Zero(m.rows()),
                                    window_first_index(m.rows())).indices);
}

}  // namespace

NormEstimate opnorm_l2(const Eigen::MatrixXcd& m, std::uint64_t seed, double tol,
                       int max_iterations) {
  NormEstimate est;
  est.method = OpnormMethod::PowerIteration;
  const Eigen::Index n = m.cols();
  if (n == 0) throw std::invalid_argument("opnorm_l2: empty matrix");
  if (m.cwiseAbs().maxCoeff() == 0.0) {
    est.witness = Eigen::VectorXcd::Unit(n, 0);
    est.converged = true;
    return est;
  }
  std::mt19937_64 rng(mix_seed(seed, 0));
  Eigen::VectorXcd v = gaussian_vector(n, rng);
  v.normalize();
  double sigma = (m * v).norm();
  for (int it = 0; it < max_iterations; ++it) {
    Eigen::VectorXcd w = m.adjoint() * (m * v);
    const double wn = w.norm();
    if (wn == 0.0) break;
    w /= wn;
    const double next = (m * w).norm();
    v = std::move(w);
    const bool done = std::abs(next - sigma) <= tol * next;
    sigma = std::max(sigma, next);
    if (done) {
      est.converged = true;
      break;
    }
  }
  est.witness = v;
  est.value = (m * v).norm();
  return est;
}

NormEstimate opnorm_general(const Eigen::MatrixXcd& m, const NormSpec& in_norm,
                            const NormSpec& out_norm, const OpnormConfig& cfg) {
  check_dimensions(m, in_norm, out_norm);
  const Eigen::Index n = m.cols();
  const int in_first = window_first_index(n);
  const int out_first = window_first_index(m.rows());

  NormEstimate best;
  best.method = in_norm.is_star() ? OpnormMethod::ExtremePoint : OpnormMethod::MultiStartAscent;
  best.value = -1.0;
  best.restarts_used = std::max(cfg.restarts, 0);

  auto consider = [&](Eigen::VectorXcd start) {
    const double scale = eval_norm(in_norm, start, in_first);
    if (!(scale > 0.0)) return;
    start /= scale;
    AscentResult r = ascend(m, in_norm, out_norm, in_first, out_first, std::move(start), cfg);
    if (best.value < 0.0 || better(r.value, r.x, best.value, best.witness)) {
      best.value = r.value;
      best.witness = std::move(r.x);
      best.converged = r.converged;
    }
  };

  for (Eigen::Index k = 0; k < n; ++k) consider(Eigen::VectorXcd::Unit(n, k));
  consider(opnorm_l2(m, cfg.seed).witness);
  for (int r = 0; r < cfg.restarts; ++r) {
    std::mt19937_64 rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(r) + 1));
    consider(gaussian_vector(n, rng));
  }

  // Report the value exactly as the witness realizes it.
  const double wn = eval_norm(in_norm, best.witness, in_first);
  best.witness /= wn;
  best.value = eval_norm(out_norm, Eigen::VectorXcd(m * best.witness), out_first);
  return best;
}

NormEstimate oracle_opnorm(const Eigen::MatrixXcd& m, const NormSpec& in_norm,
                           const NormSpec& out_norm, int samples, std::uint64_t seed) {
  if (m.rows() > 4 || m.cols() > 4)
    throw std::invalid_argument("oracle_opnorm refuses dimensions above 4");
  check_dimensions(m, in_norm, out_norm);
  const Eigen::Index n = m.cols();
  const int in_first = window_first_index(n);
  const int out_first = window_first_index(m.rows());

  std::mt19937_64 rng(mix_seed(seed, 0xACE));
  std::uniform_real_distribution<double> box(-1.0, 1.0);
  auto objective = [&](const Eigen::VectorXcd& x) {
    return eval_norm(out_norm, Eigen::VectorXcd(m * x), out_first);
  };

  constexpr std::size_t kKeep = 10;
  std::vector<std::pair<double, Eigen::VectorXcd>> top;
  Eigen::VectorXcd x(n);
  for (int sample = 0; sample < samples; ++sample) {
    double r = 0.0;
    for (int attempt = 0; attempt < 64; ++attempt) {
      for (Eigen::Index i = 0; i < n; ++i) x(i) = cplx(box(rng), box(rng));
      r = eval_norm(in_norm, x, in_first);
      if (r <= 1.0) break;
    }
    if (!(r > 0.0)) continue;
    x /= r;
    const double v = objective(x);
    if (top.size() < kKeep || v > top.back().first) {
      if (top.size() == kKeep) top.pop_back();
      auto pos = std::find_if(top.begin(), top.end(), [&](const auto& e) { return e.first < v; });
      top.emplace(pos, v, x);
    }
  }

  std::normal_distribution<double> normal;
  std::uniform_int_distribution<long> pick(0, static_cast<long>(n) - 1);
  unsigned move = 0;
  NormEstimate best;
  best.method = OpnormMethod::Oracle;
  best.value = -1.0;
  for (auto& [value, point] : top) {
    double step = 0.2;
    int failures = 0;
    while (step > 1e-9) {
      // Cycle through a full Gaussian move, a single-coordinate move and a
      // single-coordinate shrink; the sparse moves reach corners of
      // polyhedral balls that isotropic steps approach only slowly.
      Eigen::VectorXcd trial = point;
      const auto k = static_cast<Eigen::Index>(pick(rng));
      switch (move++ % 3) {
        case 0:
          for (Eigen::Index i = 0; i < n; ++i) trial(i) += step * cplx(normal(rng), normal(rng));
          break;
        case 1:
          trial(k) += step * cplx(normal(rng), normal(rng));
          break;
        default:
          trial(k) *= std::max(0.0, 1.0 - 5.0 * step * std::abs(normal(rng)));
      }
      const double r = eval_norm(in_norm, trial, in_first);
      if (r > 0.0) {
        trial /= r;
        const double v = objective(trial);
        if (v > value) {
          value = v;
          point = std::move(trial);
          failures = 0;
          continue;
        }
      }
      if (++failures >= 60) {
        step *= 0.5;
        failures = 0;
      }
    }
    if (value > best.value) {
      best.value = value;
      best.witness = point;
    }
  }
  best.converged = true;
  return best;
}

}  // namespace flatres
