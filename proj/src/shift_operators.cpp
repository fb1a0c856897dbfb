#include "flatres/shift_operators.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace flatres {

ShiftSpec ShiftSpec::kind_a(double delta) {
  if (!(delta > 0.0 && delta <= 0.25))
    throw std::invalid_argument("kind A requires 0 < delta <= 1/4");
  return ShiftSpec(ShiftKind::A, delta);
}

ShiftSpec ShiftSpec::kind_b(double emm) {
  if (!(emm > 3.0)) throw std::invalid_argument("kind B requires M > 3");
  return ShiftSpec(ShiftKind::B, emm);
}

double ShiftSpec::beta(int k) const {
  if (kind_ == ShiftKind::A) return std::pow(param_, std::abs(k - 1));
  return k == 1 ? param_ : 1.0;
}

double ShiftSpec::alpha(int k) const {
  if (kind_ == ShiftKind::A) return std::pow(param_, -std::abs(k));
  return k == 0 ? 1.0 / param_ : 1.0;
}

double ShiftSpec::validated_radius() const {
  return kind_ == ShiftKind::A ? param_ : 1.0 / param_ - 1e-9;
}

bool ShiftSpec::in_validated_disc(cplx lambda) const {
  // Rounding slack so that grid points generated on the boundary circle pass.
  return std::abs(lambda) <= validated_radius() * (1.0 + 1e-12);
}

std::string ShiftSpec::label() const {
  std::ostringstream os;
  if (kind_ == ShiftKind::A)
    os << "A(delta=" << param_ << ")";
  else
    os << "B(M=" << param_ << ")";
  return os.str();
}

int default_window(const ShiftSpec& spec, double max_abs_lambda) {
  if (spec.kind() == ShiftKind::A) return 40;
  if (max_abs_lambda <= 0.0) return 4;
  const double n = std::ceil(std::log(1e-12) / std::log(max_abs_lambda));
  return static_cast<int>(std::clamp(n, 4.0, 200.0));
}

namespace {

void check_request(const ShiftSpec& spec, cplx lambda, int half_width) {
  if (half_width < 4) throw std::invalid_argument("resolvent window requires N >= 4");
  if (!spec.in_validated_disc(lambda)) {
    std::ostringstream os;
    os << "lambda = " << lambda << " lies outside the validated disc |lambda| <= "
       << spec.validated_radius() << " of " << spec.label();
    throw precondition_error(os.str());
  }
}

}  // namespace

ResolventMatrix resolvent_matrix(const ShiftSpec& spec, cplx lambda, int half_width) {
  check_request(spec, lambda, half_width);
  const int n = 2 * half_width + 1;
  ResolventMatrix r;
  r.lambda = lambda;
  r.half_width = half_width;
  r.entries = Eigen::MatrixXcd::Zero(n, n);
  for (int m = -half_width; m < half_width; ++m) {
    // R_{m+1,m} = beta_{m+1};  R_{k+1,m} = lambda beta_{k+1} R_{k,m}.
    cplx v = spec.beta(m + 1);
    r.entries(m + 1 + half_width, m + half_width) = v;
    for (int k = m + 1; k < half_width; ++k) {
      v *= lambda * spec.beta(k + 1);
      if (v == cplx(0.0)) break;
      r.entries(k + 1 + half_width, m + half_width) = v;
    }
  }
  r.truncation_tail = truncation_bound(spec, lambda, half_width);
  return r;
}

IndexedVector apply_resolvent(const ShiftSpec& spec, cplx lambda, const IndexedVector& x) {
  const int N = x.half_width();
  check_request(spec, lambda, N);
  IndexedVector y(N);
  if (spec.kind() == ShiftKind::B) {
    const double M = spec.emm();
    // Three branches: k <= 0, k = 1, k >= 2; terms with x outside the window vanish.
    for (int k = -N; k <= N; ++k) {
      cplx acc = 0.0;
      cplx lj = 1.0;
      if (k <= 0) {
        for (int j = 0; k - 1 - j >= -N; ++j, lj *= lambda) acc += lj * x[k - 1 - j];
      } else if (k == 1) {
        acc = M * x[0];
        lj = lambda;
        for (int j = 1; -j >= -N; ++j, lj *= lambda) acc += M * lj * x[-j];
      } else {
        for (int j = 0; j <= k - 2; ++j, lj *= lambda) acc += lj * x[k - 1 - j];
        acc += M * lj * x[0];  // lj = lambda^{k-1}
        lj *= lambda;
        for (int j = k; k - 1 - j >= -N; ++j, lj *= lambda) acc += M * lj * x[k - 1 - j];
      }
      y[k] = acc;
    }
    return y;
  }
  for (int k = -N; k <= N; ++k) {
    // sum_j lambda^j beta_k beta_{k-1} ... beta_{k-j} x_{k-1-j}
    cplx acc = 0.0;
    cplx coeff = spec.beta(k);
    for (int j = 0; k - 1 - j >= -N; ++j) {
      acc += coeff * x[k - 1 - j];
      coeff *= lambda * spec.beta(k - j - 1);
      if (coeff == cplx(0.0)) break;
    }
    y[k] = acc;
  }
  return y;
}

double truncation_bound(const ShiftSpec& spec, cplx lambda, int half_width) {
  // Split the discarded operator D into blocks by whether the row / column is
  // index 0. With x~ the entries off index 0,
  //   ||y||_* <= ||y~||_2 + |y_0|,   ||x~||_2 / sqrt2 + |x_0| <= ||x||_*,
  // so ||D||_{*->*} <= max{ sqrt2 (||D~~|| + ||D0~||), ||D~0|| + |D00| }, with
  // D00 = 0. Each block is bounded by a Schur test on geometric tails.
  const double q = std::abs(lambda);
  const double N = half_width;
  const double inv = 1.0 / (1.0 - q);
  double a = 0.0, b = 0.0, c = 0.0;
  if (spec.kind() == ShiftKind::A) {
    const double d = spec.delta();
    const double qN = std::pow(q, N);
    a = std::pow(d, N) * inv;
    b = std::pow(d, N + 1) * qN * inv;
    c = std::pow(d, N) * qN * inv;
  } else {
    const double M = spec.emm();
    const double qN = std::pow(q, N);
    a = (1.0 + (M - 1.0) * qN) * inv;
    b = qN * inv;
    c = M * qN * inv;
  }
  return std::max(std::sqrt(2.0) * (a + b), c);
}

Eigen::MatrixXcd shift_matrix(const ShiftSpec& spec, int half_width) {
  const int n = 2 * half_width + 1;
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(n, n);
  for (int k = -half_width; k < half_width; ++k)
    t(k + half_width, k + 1 + half_width) = spec.alpha(k);
  return t;
}

void write_matrix_csv(std::ostream& os, const ResolventMatrix& r) {
  os << "row,col,re,im\n" << std::setprecision(17);
  const int N = r.half_width;
  for (int k = -N; k <= N; ++k)
    for (int m = -N; m <= N; ++m) {
      const cplx v = r.at(k, m);
      os << k << ',' << m << ',' << v.real() << ',' << v.imag() << '\n';
    }
}

}  // namespace flatres
