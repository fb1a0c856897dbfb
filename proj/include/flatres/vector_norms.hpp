#pragma once

// Norms on finite windows of complex sequences indexed by Z.
//
// A window [first, first + n) of integer indices carries an Eigen vector of
// n coefficients; index k sits at position k - first. Symmetric windows
// [-N, N] are the common case. Supported norms are l_p (p = inf allowed),
// the star norm
//
//   ||x||_* = max{ ||x'||_2, |x_1| } + |x_0|,   x' = x restricted to k != 0, 1,
//
// and psi-direct sums of two norms over a partition of the window.

#include <Eigen/Dense>

#include <complex>
#include <iosfwd>
#include <memory>
#include <variant>
#include <vector>

#include "flatres/absolute_norms.hpp"

namespace flatres {

using cplx = std::complex<double>;

/// Coefficients x_k for k in [-N, N], zero outside.
class IndexedVector {
 public:
  IndexedVector() = default;
  explicit IndexedVector(int half_width);
  IndexedVector(int half_width, Eigen::VectorXcd coeffs);

  int half_width() const { return half_width_; }
  int first_index() const { return -half_width_; }
  int last_index() const { return half_width_; }
  Eigen::Index size() const { return coeffs_.size(); }
  bool contains(int k) const { return k >= -half_width_ && k <= half_width_; }

  cplx& operator[](int k) { return coeffs_(k + half_width_); }
  cplx operator[](int k) const { return coeffs_(k + half_width_); }

  const Eigen::VectorXcd& coeffs() const { return coeffs_; }
  Eigen::VectorXcd& coeffs() { return coeffs_; }

  static IndexedVector unit(int half_width, int k);

 private:
  int half_width_ = 0;
  Eigen::VectorXcd coeffs_;
};

/// First index of the window attached to a plain vector of length n:
/// -(n - 1) / 2, so odd n gives [-N, N] and n = 2 gives {0, 1}.
inline int window_first_index(Eigen::Index n) { return -static_cast<int>((n - 1) / 2); }

class NormSpec;

struct LpNorm {
  double p = 2.0;
};

struct StarNorm {};

struct PsiSumNorm {
  std::vector<int> part0;
  std::vector<int> part1;
  std::shared_ptr<const NormSpec> inner0;
  std::shared_ptr<const NormSpec> inner1;
  PsiFunction psi = PsiFunction::one_family();
};

class NormSpec {
 public:
  using Variant = std::variant<LpNorm, StarNorm, PsiSumNorm>;

  static NormSpec lp(double p);
  static NormSpec l1() { return lp(1.0); }
  static NormSpec l2() { return lp(2.0); }
  static NormSpec linf();
  static NormSpec star();
  static NormSpec psi_sum(std::vector<int> part0, NormSpec inner0, std::vector<int> part1,
                          NormSpec inner1, PsiFunction psi);

  /// (l2 on indices != 0, 1  (+)_inf  C at index 1)  (+)_1  C at index 0,
  /// expressed as nested psi-sums over the window [first, first + n).
  static NormSpec star_as_composite(int first, Eigen::Index n);

  const Variant& variant() const { return v_; }
  bool is_l2() const;
  bool is_star() const { return std::holds_alternative<StarNorm>(v_); }
  std::string name() const;

 private:
  explicit NormSpec(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

/// Coefficients together with the integer index of each entry.
struct IndexedView {
  std::vector<int> indices;
  Eigen::VectorXcd values;
};

IndexedView make_view(const Eigen::VectorXcd& x, int first_index);

/// Throws std::invalid_argument when the norm does not fit the window.
void validate_norm(const NormSpec& spec, const std::vector<int>& indices);

double eval_norm(const NormSpec& spec, const IndexedView& x);
double eval_norm(const NormSpec& spec, const IndexedVector& x);
double eval_norm(const NormSpec& spec, const Eigen::VectorXcd& x, int first_index);

template <typename Derived>
double eval_norm(const NormSpec& spec, const Eigen::MatrixBase<Derived>& x) {
  const Eigen::VectorXcd v = x.template cast<cplx>();
  return eval_norm(spec, v, window_first_index(v.size()));
}

/// A unit-dual-norm functional s with Re<s, x> = ||x||. Zero for x = 0.
Eigen::VectorXcd norm_subgradient(const NormSpec& spec, const IndexedView& x);

/// Result of maximizing Re<g, x> over the unit ball of a norm.
struct BallMaximizer {
  Eigen::VectorXcd x;   ///< maximizer with ||x|| = 1 (or any unit vector if g = 0)
  double dual_value = 0.0;  ///< the dual norm of g
};

BallMaximizer ball_maximizer(const NormSpec& spec, const IndexedView& g);

inline double dual_norm(const NormSpec& spec, const IndexedView& g) {
  return ball_maximizer(spec, g).dual_value;
}

/// theta(u) = ||P0 u|| / (||P0 u|| + ||P1 u||) for a psi-direct sum, with the
/// two bounds ||u|| <= ||P0 u|| / theta and ||P0 u|| <= 2 theta ||u||.
struct ThetaSplit {
  double theta = 0.0;
  double part0_norm = 0.0;
  double part1_norm = 0.0;
  double total_norm = 0.0;
  bool th1_holds = true;  ///< vacuous when theta = 0
  bool th2_holds = true;
};

/// Throws std::domain_error for x = 0 and std::invalid_argument when spec
/// is not a psi-sum.
ThetaSplit theta_split(const NormSpec& psi_sum, const IndexedVector& x, double tol = 1e-12);

/// CSV rows `index,re,im` with header.
void write_vector_csv(std::ostream& os, const IndexedVector& x);
IndexedVector read_vector_csv(std::istream& is);

}  // namespace flatres
