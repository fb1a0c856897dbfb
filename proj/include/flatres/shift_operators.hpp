#pragma once

// Two bilateral weighted shifts and their resolvents in closed form.
//
// Kind A:  (T y)_k = delta^{-|k|} y_{k+1},  0 < delta <= 1/4, unbounded.
// Kind B:  (T y)_k = alpha_k y_{k+1},  alpha_0 = 1/M, alpha_k = 1 otherwise, M > 3.
//
// Both have inverses (T^{-1} x)_k = beta_k x_{k-1} and, inside the disc where
// the Neumann series converges,
//
//   R(lambda)_{k,m} = lambda^{k-1-m} prod_{i=m+1}^{k} beta_i   for m < k,
//
// and 0 for m >= k.

#include <Eigen/Dense>

#include <complex>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "flatres/vector_norms.hpp"

namespace flatres {

enum class ShiftKind { A, B };

class ShiftSpec {
 public:
  /// Throws std::invalid_argument unless 0 < delta <= 1/4.
  static ShiftSpec kind_a(double delta = 0.25);
  /// Throws std::invalid_argument unless emm > 3.
  static ShiftSpec kind_b(double emm = 4.0);

  ShiftKind kind() const { return kind_; }
  double delta() const { return param_; }
  double emm() const { return param_; }

  /// beta_k: delta^{|k-1|} for kind A; M at k = 1 and 1 elsewhere for kind B.
  double beta(int k) const;
  /// alpha_k, the weight of the forward shift.
  double alpha(int k) const;

  /// Radius of the closed disc on which resolvents are certified:
  /// delta for kind A, 1/M - 1e-9 for kind B.
  double validated_radius() const;
  bool in_validated_disc(cplx lambda) const;

  std::string label() const;

 private:
  ShiftSpec(ShiftKind kind, double param) : kind_(kind), param_(param) {}
  ShiftKind kind_;
  double param_;
};

inline double beta_weights(const ShiftSpec& spec, int k) { return spec.beta(k); }

struct ResolventMatrix {
  cplx lambda;
  int half_width = 0;
  /// Entry (k + N, m + N) holds R_{k,m}.
  Eigen::MatrixXcd entries;
  /// Upper bound on the star-norm of the part of R(lambda) outside the window.
  double truncation_tail = 0.0;

  cplx at(int k, int m) const { return entries(k + half_width, m + half_width); }
};

/// Thrown when lambda lies outside the validated disc of an operator.
class precondition_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Window size used when the caller does not fix one: 40 for kind A;
/// ceil(log(1e-12) / log|lambda|) clamped to [4, 200] for kind B.
int default_window(const ShiftSpec& spec, double max_abs_lambda);

ResolventMatrix resolvent_matrix(const ShiftSpec& spec, cplx lambda, int half_width);

/// y = R(lambda) x on the window of x, from the Neumann-series index formula.
IndexedVector apply_resolvent(const ShiftSpec& spec, cplx lambda, const IndexedVector& x);

/// Upper bound on ||R(lambda) - P R(lambda) P||_{*->*} with P the window
/// projection. Non-increasing in N.
double truncation_bound(const ShiftSpec& spec, cplx lambda, int half_width);

/// The forward shift compressed to [-N, N].
Eigen::MatrixXcd shift_matrix(const ShiftSpec& spec, int half_width);

/// CSV rows `row,col,re,im` over the full window, row/col as sequence indices.
void write_matrix_csv(std::ostream& os, const ResolventMatrix& r);

}  // namespace flatres
