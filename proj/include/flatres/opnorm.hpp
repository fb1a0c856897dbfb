#pragma once

// Operator norms of finite complex matrices between normed windows.
//
// Every estimate is a certified lower bound: value = ||M w||_out for a
// witness w with ||w||_in = 1. The input window of an m x n matrix is
// [window_first_index(n), ...) and likewise for the output.

#include <Eigen/Dense>

#include <cstdint>
#include <string>

#include "flatres/vector_norms.hpp"

namespace flatres {

enum class OpnormMethod { PowerIteration, MultiStartAscent, ExtremePoint, Oracle };

std::string to_string(OpnormMethod m);

struct NormEstimate {
  double value = 0.0;
  Eigen::VectorXcd witness;
  OpnormMethod method = OpnormMethod::MultiStartAscent;
  bool is_certified_lower_bound = true;
  int restarts_used = 0;
  bool converged = false;
};

inline constexpr std::uint64_t kDefaultOpnormSeed = 0x5eed;

struct OpnormConfig {
  int restarts = 64;
  std::uint64_t seed = kDefaultOpnormSeed;
  int max_iterations = 1000;
  /// Stop an ascent once an iteration improves the value by less than this
  /// relative amount.
  double rel_tol = 1e-11;
};

/// splitmix64 step, used to derive independent deterministic seeds.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index);

/// Largest singular value by power iteration on M^H M from a seeded start.
NormEstimate opnorm_l2(const Eigen::MatrixXcd& m, std::uint64_t seed = kDefaultOpnormSeed,
                       double tol = 1e-12, int max_iterations = 20000);

/// Multi-start ascent of ||M x||_out over the unit sphere of in_norm.
///
/// Each step linearizes the (convex) objective at the current point with a
/// subgradient s of the output norm and moves to the maximizer of
/// Re<M^H s, x> over the input unit ball, which is an extreme point of the
/// ball. The value never decreases along a run. Starts: the scaled unit
/// vectors e_k, the l2 witness, and `restarts` seeded random points.
/// Throws std::invalid_argument on a dimension / norm mismatch.
NormEstimate opnorm_general(const Eigen::MatrixXcd& m, const NormSpec& in_norm,
                            const NormSpec& out_norm, const OpnormConfig& config = {});

/// Independent brute-force estimate: `samples` uniform points of the input
/// unit sphere (box rejection, then radial normalization), the best 10
/// polished by a random local search. Dimensions above 4 are refused with
/// std::invalid_argument.
NormEstimate oracle_opnorm(const Eigen::MatrixXcd& m, const NormSpec& in_norm,
                           const NormSpec& out_norm, int samples = 100000,
                           std::uint64_t seed = kDefaultOpnormSeed);

}  // namespace flatres
