#pragma once

// Resolvent-norm landscapes over lambda grids, level-set flatness, and
// classification of grid points against the pseudospectrum thresholds
//
//   sigma_eps = { ||R(lambda)|| > 1/eps },   Sigma_eps = { ||R(lambda)|| >= 1/eps }.

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "flatres/opnorm.hpp"
#include "flatres/shift_operators.hpp"
#include "flatres/vector_norms.hpp"

namespace flatres {

enum class RegionShape { Disc, Rectangle };

struct Region {
  RegionShape shape = RegionShape::Disc;
  cplx center = 0.0;
  double radius = 0.0;
  cplx lower_left = 0.0;
  cplx upper_right = 0.0;

  static Region disc(cplx center, double radius);
  static Region rectangle(cplx lower_left, cplx upper_right);
  bool contains(cplx lambda, double slack = 1e-12) const;
};

/// Disc grids are concentric rings: the center plus rings j = 1..R,
/// R = (resolution - 1) / 2, ring j carrying 8j equally spaced points at
/// radius j r / R. resolution = 11 gives 121 points with the boundary circle
/// included. Rectangles use resolution x resolution points including corners.
std::vector<cplx> grid_points(const Region& region, int resolution);

using OperatorSource = std::variant<ShiftSpec, Eigen::MatrixXcd>;

struct ScanConfig {
  OpnormConfig opnorm;
  /// Window for shift operators; default_window() when unset.
  std::optional<int> half_width;
  /// Worker threads; 0 picks the hardware concurrency.
  unsigned threads = 0;
};

struct GridPoint {
  cplx lambda;
  double norm = 0.0;
  double trunc_bound = 0.0;
  bool converged = false;
};

struct PseudoGrid {
  Region region;
  int resolution = 0;
  std::vector<GridPoint> points;
  std::string norm_name;
  std::string operator_label;
};

/// Resolvent norms on the grid, in grid order. Shift operators use the
/// closed-form resolvent; dense matrices are inverted directly (truncation
/// bound 0). The l2 -> l2 case uses power iteration, every other pair the
/// multi-start ascent, seeded per point by mix_seed(seed, index).
/// Throws precondition_error listing offending lambdas when the region leaves
/// an operator's validated disc, or when a dense T - lambda I is singular.
PseudoGrid scan_grid(const OperatorSource& op, const NormSpec& norm, const Region& region,
                     int resolution, const ScanConfig& config = {});

struct FlatnessReport {
  double max_value = 0.0;
  double min_value = 0.0;
  double relative_variation = 0.0;
  bool is_flat = false;
  double tolerance = 0.0;
  cplx argmax = 0.0;
  cplx argmin = 0.0;
};

/// Throws std::invalid_argument for an empty grid.
FlatnessReport flatness_report(const PseudoGrid& grid, double tolerance);

enum class LevelTag { StrictPseudospectrum, BoundaryLevelSet, Exterior };

std::string to_string(LevelTag t);

/// Compares each estimate with 1/eps inside a band of half-width
/// estimate_tolerance + truncation bound.
std::vector<LevelTag> classify_levelset(const PseudoGrid& grid, double epsilon,
                                        double estimate_tolerance = 1e-9);

/// CSV with header `re,im,norm,trunc_bound`, one row per grid point.
void write_grid_csv(std::ostream& os, const PseudoGrid& grid);

}  // namespace flatres
