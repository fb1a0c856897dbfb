#pragma once

// Falsification probes for complex strict convexity and estimates of the
// complex uniform convexity modulus of a norm on a finite window.
//
// A witness against complex strict convexity is a pair (x, y), ||x|| = 1,
// y != 0, with ||x + zeta y|| <= 1 for every |zeta| <= 1. Only the boundary
// circle |zeta| = 1 (plus the center) is sampled: zeta -> ||x + zeta y|| is
// subharmonic, so its maximum over the disc sits on the circle.

#include <Eigen/Dense>

#include <cstdint>
#include <optional>

#include "flatres/vector_norms.hpp"

namespace flatres {

struct ConvexityWitness {
  Eigen::VectorXcd x;
  Eigen::VectorXcd y;
  double sup_violation = 0.0;  ///< max over sampled zeta of ||x + zeta y|| - 1
};

struct ConvexityProbeConfig {
  int zeta_samples = 64;
  double tol = 1e-9;
  double witness_floor = 0.1;
};

/// max over zeta in {0} and `zeta_samples` points of the unit circle of
/// ||x + zeta y|| - 1.
double sup_violation(const NormSpec& norm, int first_index, const Eigen::VectorXcd& x,
                     const Eigen::VectorXcd& y, int zeta_samples = 64);

/// Structured pairs (e_i, e_j) first, then `trials` seeded random pairs; for
/// each direction y the largest feasible scale is found by bisection. Returns
/// the first witness in that order, or nothing.
std::optional<ConvexityWitness> csc_witness_search(const NormSpec& norm, int first_index,
                                                   Eigen::Index dim, int trials,
                                                   std::uint64_t seed,
                                                   const ConvexityProbeConfig& config = {});

/// delta_hat = 1 - (largest ||x|| found with ||y|| = epsilon and
/// sup_zeta ||x + zeta y|| <= 1), clamped to >= 0. Sampling only finds
/// feasible pairs, so delta_hat over-estimates the true modulus.
double cuc_modulus_estimate(const NormSpec& norm, int first_index, Eigen::Index dim,
                            double epsilon, int trials, std::uint64_t seed,
                            const ConvexityProbeConfig& config = {});

}  // namespace flatres
