#pragma once

// Convex generators psi of absolute normalized norms on C^2 and the
// two-component norms they induce,
//
//   ||(z, v)||_psi = (|z| + |v|) psi(|v| / (|z| + |v|)).
//
// A member psi is convex on [0, 1] with psi(0) = psi(1) = 1 and
// max{1 - t, t} <= psi(t) <= 1.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace flatres {

enum class PsiFamily { Max, One, PPower, PiecewiseLinear };

class PsiFunction {
 public:
  /// psi(t) = max{1 - t, t}, the l-infinity pairing.
  static PsiFunction max_family();
  /// psi(t) = 1, the l-1 pairing.
  static PsiFunction one_family();
  /// psi(t) = ((1 - t)^p + t^p)^(1/p). Requires p >= 1.
  static PsiFunction p_power(double p);
  /// Linear interpolation through (knots[i], values[i]). Knots must be
  /// strictly increasing from 0 to 1. Membership in the convex class is
  /// not checked here; use psi_analyze.
  static PsiFunction piecewise_linear(std::vector<double> knots,
                                      std::vector<double> values);

  /// Throws std::domain_error for t outside [0, 1].
  double operator()(double t) const;

  /// An element of the subdifferential at t (right derivative, left
  /// derivative at t = 1).
  double derivative(double t) const;

  PsiFamily family() const { return family_; }
  double p() const { return p_; }
  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& values() const { return values_; }
  std::string name() const;

 private:
  PsiFunction() = default;
  double eval_unchecked(double t) const;

  PsiFamily family_ = PsiFamily::One;
  double p_ = 1.0;
  std::vector<double> knots_;
  std::vector<double> values_;
};

struct PsiAnalysis {
  bool is_member = false;
  bool satisfies_cc = false;
  /// Largest grid t in (0, 1/2] with psi(t) = 1 - t.
  std::optional<double> lower_contact;
  /// Smallest grid t in [1/2, 1) with psi(t) = t.
  std::optional<double> upper_contact;
  int grid_n = 0;
};

inline constexpr double kPsiCheckTol = 1e-12;
inline constexpr double kContactTol = 1e-10;

double psi_eval(const PsiFunction& psi, double t);

/// Grid nodes t_i = i / grid_n for i = 0..grid_n.
PsiAnalysis psi_analyze(const PsiFunction& psi, int grid_n = 4096);

/// Maximizer of (w0 (1 - s) + w1 s) / psi(s) over s in [0, 1].
struct DualArgmax {
  double value = 0.0;
  double s = 0.0;
};

/// Coarse scan on 512 points followed by golden-section refinement to
/// tol. Knots of a piecewise-linear psi are scanned exactly, since the
/// ratio is monotone between knots.
DualArgmax psi_dual_argmax(const PsiFunction& psi, double w0, double w1,
                           double tol = 1e-10);

/// psi*(t) = max_s ((1 - t)(1 - s) + t s) / psi(s), tabulated on a uniform
/// grid of grid_n intervals. Throws std::invalid_argument if psi is not a
/// member of the class or grid_n < 100.
PsiFunction psi_dual(const PsiFunction& psi, int grid_n = 4096,
                     double tol = 1e-10);

/// (z + v) psi(v / (z + v)), and 0 at the origin.
double norm_psi_pair(double z_abs, double v_abs, const PsiFunction& psi);

/// Two-column CSV (t, psi) with header `t,psi`.
void write_psi_csv(std::ostream& os, const PsiFunction& psi);
PsiFunction read_psi_csv(std::istream& is);

}  // namespace flatres
