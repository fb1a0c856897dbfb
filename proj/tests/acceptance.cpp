// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Tolerances are fixed here and not tuned per run.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "flatres/absolute_norms.hpp"
#include "flatres/convexity_probe.hpp"
#include "flatres/opnorm.hpp"
#include "flatres/pseudospectra.hpp"
#include "flatres/semigroup.hpp"
#include "flatres/shift_operators.hpp"
#include "flatres/vector_norms.hpp"

using namespace flatres;

namespace {

constexpr double kFlatTol = 1e-3;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v, int digits = 6) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

Eigen::VectorXcd gaussian(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = cplx(normal(rng), normal(rng));
  return v;
}

double star_direct(const IndexedVector& x) {
  double rest = 0.0;
  for (int k = x.first_index(); k <= x.last_index(); ++k)
    if (k != 0 && k != 1) rest += std::norm(x[k]);
  return std::max(std::sqrt(rest), std::abs(x[1])) + std::abs(x[0]);
}

// Points of the closed star unit ball: a third on the sphere with random
// x_0 share, a third at the extreme configurations |x_1| = ||x'||_2 = 1 - |x_0|,
// the rest scaled into the interior.
IndexedVector star_ball_sample(int n_half, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  IndexedVector x(n_half, gaussian(2 * n_half + 1, rng));
  const double t = unif(rng);
  const int mode = static_cast<int>(3.0 * unif(rng));
  x[0] = 0.0;
  if (mode == 1) {
    const cplx x1 = x[1];
    x[1] = 0.0;
    x.coeffs() *= (1.0 - t) / x.coeffs().norm();
    x[1] = std::polar(1.0 - t, std::arg(x1));
  } else {
    x.coeffs() *= (1.0 - t) / star_direct(x);
  }
  x[0] = std::polar(t, 2.0 * std::numbers::pi * unif(rng));
  if (mode == 2) x.coeffs() *= unif(rng);
  return x;
}

OpnormConfig default_opnorm() { return OpnormConfig{}; }

Outcome criterion1() {
  ScanConfig cfg;
  cfg.opnorm = default_opnorm();
  cfg.half_width = 40;
  const auto grid = scan_grid(ShiftSpec::kind_a(0.25), NormSpec::star(), Region::disc(0.0, 0.25), 11, cfg);
  bool in_band = grid.points.size() == 121;
  for (const auto& p : grid.points)
    in_band = in_band && p.norm >= 0.999 && p.norm <= 1.0 + p.trunc_bound + 1e-3;
  const auto r = flatness_report(grid, kFlatTol);
  return {in_band && r.relative_variation <= kFlatTol,
          "121 points, norms in [" + num(r.min_value, 12) + ", " + num(r.max_value, 12) +
              "], relative variation " + num(r.relative_variation)};
}

Outcome criterion2() {
  const auto spec = ShiftSpec::kind_b(4.0);
  const double m = 4.0;
  ScanConfig cfg;
  cfg.opnorm = default_opnorm();
  const auto grid = scan_grid(spec, NormSpec::star(), Region::disc(0.0, 1.0 / 13.0), 11, cfg);
  const int n = default_window(spec, 1.0 / 13.0);
  bool ok = true;
  double worst_rel = 0.0, min_cert = 1e300;
  for (const auto& p : grid.points) {
    worst_rel = std::max(worst_rel, std::abs(p.norm - m) / m);
    const auto r = resolvent_matrix(spec, p.lambda, n);
    const double cert = eval_norm(NormSpec::star(), Eigen::VectorXcd(r.entries.col(n)), -n);
    min_cert = std::min(min_cert, cert);
    ok = ok && p.norm >= cert;
  }
  ok = ok && worst_rel <= 1e-3 && min_cert >= m - 1e-9;
  return {ok, "max |norm - 4| / 4 = " + num(worst_rel) + ", min e_0 certificate " + num(min_cert, 15) +
                  " (N = " + std::to_string(n) + ")"};
}

Outcome criterion3() {
  ScanConfig cfg;
  cfg.opnorm = default_opnorm();
  std::vector<double> variation;
  for (int n : {40, 80}) {
    cfg.half_width = n;
    const auto grid = scan_grid(ShiftSpec::kind_a(0.25), NormSpec::l2(), Region::disc(0.0, 0.25), 11, cfg);
    variation.push_back(flatness_report(grid, kFlatTol).relative_variation);
  }
  const bool stable = std::abs(variation[0] - variation[1]) <= 1e-9;
  return {stable && variation[0] > 10.0 * kFlatTol,
          "relative variation " + num(variation[0]) + " at N = 40, " + num(variation[1]) +
              " at N = 80, threshold " + num(10.0 * kFlatTol)};
}

Outcome criterion4() {
  const auto spec = ShiftSpec::kind_a(0.25);
  std::mt19937_64 rng(0xC4);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double worst = 0.0;
  for (int l = 0; l < 20; ++l) {
    const double rad = l == 0 ? 0.25 : 0.25 * std::sqrt(unif(rng));
    const cplx lambda = std::polar(rad, 2.0 * std::numbers::pi * unif(rng));
    for (int i = 0; i < 1000; ++i) {
      const IndexedVector y = apply_resolvent(spec, lambda, star_ball_sample(40, rng));
      worst = std::max(worst, std::abs(y[1]) + std::abs(y[0]));
    }
  }
  const double d = 0.25;
  const double scalar = (4.0 * d / 3.0) * std::sqrt((1.0 + d * d) / (1.0 - d * d)) + 1.0 / 3.0;
  return {worst <= 1.0 && scalar < 1.0 && std::abs(scalar - 0.688) < 5e-4,
          "max |y_1| + |y_0| = " + num(worst, 15) + " over 20 x 1000 samples, scalar " + num(scalar)};
}

Outcome criterion5() {
  std::mt19937_64 rng(0xC5);
  bool equiv = true;
  const auto star = NormSpec::star();
  for (int t = 0; t < 1000; ++t) {
    IndexedVector x(6, gaussian(13, rng));
    if (t % 4 == 0) x[0] = x[1] = 0.0;
    const double s = eval_norm(star, x), l2 = x.coeffs().norm();
    equiv = equiv && l2 / std::sqrt(2.0) <= s && s <= std::sqrt(2.0) * l2;
  }

  const std::vector<PsiFunction> fams{PsiFunction::max_family(), PsiFunction::one_family(),
                                      PsiFunction::p_power(1.5), PsiFunction::p_power(2.0),
                                      PsiFunction::p_power(4.0)};
  bool sandwich = true;
  std::exponential_distribution<double> ex(1.0);
  for (const auto& psi : fams)
    for (int t = 0; t < 1000; ++t) {
      const double z = ex(rng), v = ex(rng);
      const double l1 = z + v, linf = std::max(z, v), n = norm_psi_pair(z, v, psi);
      sandwich = sandwich && 0.5 * l1 <= linf && linf <= n && n <= l1 && l1 <= 2.0 * linf;
    }

  double round_trip = 0.0;
  for (const auto& psi : fams) {
    const auto dd = psi_dual(psi_dual(psi));
    for (int i = 0; i <= 4096; ++i) round_trip = std::max(round_trip, std::abs(dd(i / 4096.0) - psi(i / 4096.0)));
  }

  const auto d_one = psi_dual(PsiFunction::one_family());
  const auto d_max = psi_dual(PsiFunction::max_family());
  double pairing = 0.0;
  for (int i = 0; i <= 4096; ++i) {
    const double t = i / 4096.0;
    pairing = std::max({pairing, std::abs(d_one(t) - std::max(1.0 - t, t)), std::abs(d_max(t) - 1.0)});
  }
  return {equiv && sandwich && round_trip <= 1e-6 && pairing <= 1e-8,
          std::string("equivalence ") + (equiv ? "ok" : "broken") + ", sandwich " + (sandwich ? "ok" : "broken") +
              ", double-dual error " + num(round_trip) + ", l1/linf pairing error " + num(pairing)};
}

Outcome criterion6() {
  const std::vector<NormSpec> norms{NormSpec::l1(), NormSpec::l2(), NormSpec::linf(), NormSpec::star()};
  double worst = 0.0;
  int runs = 0;
  for (int s = 0; s < 20; ++s) {
    const int dim = 2 + s % 2;
    std::mt19937_64 rng(mix_seed(0xC6, s));
    Eigen::MatrixXcd m(dim, dim);
    for (int j = 0; j < dim; ++j) m.col(j) = gaussian(dim, rng);
    for (const auto& in : norms)
      for (const auto& out : norms) {
        const double g = opnorm_general(m, in, out).value;
        const double o = oracle_opnorm(m, in, out, 100000, mix_seed(0xC60, s)).value;
        worst = std::max(worst, std::abs(g - o) / g);
        ++runs;
      }
  }
  return {worst <= 1e-2, std::to_string(runs) + " comparisons, max relative gap " + num(worst)};
}

double dense_sup(const NormSpec& norm, int first, const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) {
  double worst = eval_norm(norm, x, first);
  for (int i = 0; i < 512; ++i) {
    const cplx zeta = std::polar(1.0, 2.0 * std::numbers::pi * i / 512);
    worst = std::max(worst, eval_norm(norm, Eigen::VectorXcd(x + zeta * y), first));
  }
  return worst;
}

Outcome criterion7() {
  const bool linf = csc_witness_search(NormSpec::linf(), 0, 2, 10000, 0xC7).has_value();
  const bool star = csc_witness_search(NormSpec::star(), -1, 3, 10000, 0xC7).has_value();
  const double pair = dense_sup(NormSpec::star(), -1, Eigen::Vector3cd(1, 0, 0), Eigen::Vector3cd(0, 0, 1));
  const bool l2 = csc_witness_search(NormSpec::l2(), -1, 3, 10000, 0xC7).has_value();
  bool psi = false;
  for (const auto& f : {PsiFunction::p_power(2.0), PsiFunction::p_power(3.0), PsiFunction::one_family()}) {
    const auto a = psi_analyze(f);
    const auto sum = NormSpec::psi_sum({-1}, NormSpec::l2(), {0, 1}, NormSpec::l2(), f);
    psi = psi || !a.satisfies_cc || csc_witness_search(sum, -1, 3, 10000, 0xC7).has_value();
  }
  const bool ok = linf && star && std::abs(pair - 1.0) <= 2e-9 && !l2 && !psi;
  return {ok, std::string("linf ") + (linf ? "witness" : "none") + ", star " + (star ? "witness" : "none") +
                  " (e_-1/e_1 sup " + num(pair, 15) + "), l2 " + (l2 ? "witness" : "none") +
                  ", (cc) psi-sums " + (psi ? "witness" : "none")};
}

Outcome criterion8() {
  double worst = 0.0, worst_adj = 0.0;
  for (int i = 0; i < 20; ++i) {
    const int n = 2 + i % 7;
    const auto c = make_generator_case(random_contraction_generator(n, mix_seed(0xC8, i)));
    worst = std::max(worst, check_kallman_rota(c, 1000, mix_seed(0xC80, i)).max_ratio);
    worst_adj = std::max(worst_adj, check_kallman_rota(c, 1000, mix_seed(0xC80, i), true).max_ratio);
  }
  const auto minus_i = make_generator_case(-Eigen::MatrixXcd::Identity(4, 4));
  const double unit = check_kallman_rota(minus_i, 1000, 0xC8).max_ratio;
  return {worst <= 4.0 && worst_adj <= 4.0 && unit == 1.0,
          "max ratio " + num(worst) + ", adjoint " + num(worst_adj) + ", -I ratio " + num(unit, 17)};
}

Outcome criterion9() {
  const std::vector<PsiFunction> fams{PsiFunction::max_family(), PsiFunction::one_family(),
                                      PsiFunction::p_power(1.5), PsiFunction::p_power(2.0),
                                      PsiFunction::p_power(4.0)};
  std::vector<int> p0, p1;
  for (int k = -5; k <= 5; ++k) (k % 3 == 0 ? p0 : p1).push_back(k);
  std::mt19937_64 rng(0xC9);
  int failures = 0, checked = 0;
  for (const auto& psi : fams) {
    const auto spec = NormSpec::psi_sum(p0, NormSpec::l2(), p1, NormSpec::l1(), psi);
    for (int t = 0; t < 1000; ++t) {
      IndexedVector x(5, gaussian(11, rng));
      if (t % 10 == 1) for (int k : p1) x[k] = 0.0;
      if (t % 10 == 2) for (int k : p0) x[k] = 0.0;
      const auto s = theta_split(spec, x, 1e-12);
      failures += !(s.th1_holds && s.th2_holds);
      ++checked;
    }
  }
  return {failures == 0, std::to_string(checked) + " vectors, " + std::to_string(failures) + " violations"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 kind A star-norm resolvent flat at 1", criterion1},
      {"2 kind B star-norm resolvent flat at M", criterion2},
      {"3 kind A l2 resolvent not flat", criterion3},
      {"4 kind A coefficient bounds", criterion4},
      {"5 absolute norms and duality", criterion5},
      {"6 ascent agrees with brute-force oracle", criterion6},
      {"7 complex strict convexity probes", criterion7},
      {"8 Kallman-Rota ratio", criterion8},
      {"9 theta-split inequalities", criterion9},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << "criterion " << name << ": " << o.detail << " ("
              << num(secs, 3) << " s)" << std::endl;
    failed += !o.pass;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
