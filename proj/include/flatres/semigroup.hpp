#pragma once

// Matrix-scale checks of Landau-Kolmogorov type inequalities for semigroup
// generators B, with ||.|| the Euclidean norm:
//
//   Kallman-Rota:  ||B w||^2 <= 4 K^2 ||w|| ||B^2 w||,   K = sup_t ||exp(tB)||,
//   (n, k) ratio:  ||B^k w||^n / ((||B^n w|| + ||w||)^k ||w||^{n-k}).

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>

namespace flatres {

/// Thrown when exp(tB) overflows on the requested time window.
class unbounded_semigroup : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

struct GeneratorCase {
  Eigen::MatrixXcd generator;
  double bound = 1.0;  ///< K >= 1
  bool contraction = false;
};

/// Largest eigenvalue of (B + B^H) / 2; <= 0 means exp(tB) is a contraction.
double numerical_abscissa(const Eigen::MatrixXcd& b);

/// K = max(1, max_j ||exp(t_j B)||_2) over t_j = j t_max / steps, the
/// exponentials built as successive powers of exp((t_max / steps) B).
double semigroup_bound(const Eigen::MatrixXcd& b, double t_max = 10.0, int steps = 200);

/// K = 1 for contractions, otherwise semigroup_bound(b, t_max, steps).
GeneratorCase make_generator_case(Eigen::MatrixXcd b, double t_max = 10.0, int steps = 200);

/// Gaussian n x n matrix shifted by its numerical abscissa.
Eigen::MatrixXcd random_contraction_generator(int n, std::uint64_t seed);

struct RatioSummary {
  double max_ratio = 0.0;
  int samples_used = 0;
};

/// max over seeded complex-Gaussian w of ||Bw||^2 / (K^2 ||w|| ||B^2 w||);
/// with `adjoint`, B is replaced by B^H. Samples with ||B^2 w|| < 1e-12 are
/// skipped.
RatioSummary check_kallman_rota(const GeneratorCase& c, int trials, std::uint64_t seed,
                                bool adjoint = false);

/// max over seeded w of ||B^k w||^n / ((||B^n w|| + ||w||)^k ||w||^{n-k}),
/// 2 <= n <= 5, 1 <= k <= n - 1.
RatioSummary check_rota_ratio(const GeneratorCase& c, int n, int k, int trials,
                              std::uint64_t seed, bool adjoint = false);

/// max over seeded w of ||Bw|| - (eps ||B^2 w|| + (1/eps + eps) ||w||),
/// normalized by ||w||. Non-positive when the bound holds.
double check_interpolation_bound(const GeneratorCase& c, double eps, int trials,
                                 std::uint64_t seed);

}  // namespace flatres
