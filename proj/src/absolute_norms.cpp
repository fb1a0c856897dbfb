#include "flatres/absolute_norms.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace flatres {

PsiFunction PsiFunction::max_family() {
  PsiFunction psi;
  psi.family_ = PsiFamily::Max;
  psi.p_ = std::numeric_limits<double>::infinity();
  return psi;
}

PsiFunction PsiFunction::one_family() {
  PsiFunction psi;
  psi.family_ = PsiFamily::One;
  psi.p_ = 1.0;
  return psi;
}

PsiFunction PsiFunction::p_power(double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("p-power psi requires p >= 1");
  if (std::isinf(p)) return max_family();
  PsiFunction psi;
  psi.family_ = PsiFamily::PPower;
  psi.p_ = p;
  return psi;
}

PsiFunction PsiFunction::piecewise_linear(std::vector<double> knots,
                                          std::vector<double> values) {
  if (knots.size() != values.size() || knots.size() < 2)
    throw std::invalid_argument("piecewise-linear psi needs >= 2 matching knots and values");
  if (knots.front() != 0.0 || knots.back() != 1.0)
    throw std::invalid_argument("piecewise-linear psi knots must span [0, 1]");
  for (std::size_t i = 1; i < knots.size(); ++i)
    if (!(knots[i] > knots[i - 1]))
      throw std::invalid_argument("piecewise-linear psi knots must be strictly increasing");
  PsiFunction psi;
  psi.family_ = PsiFamily::PiecewiseLinear;
  psi.knots_ = std::move(knots);
  psi.values_ = std::move(values);
  return psi;
}

double PsiFunction::operator()(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("psi evaluated outside [0, 1]");
  return eval_unchecked(t);
}

double PsiFunction::eval_unchecked(double t) const {
  switch (family_) {
    case PsiFamily::Max:
      return std::max(1.0 - t, t);
    case PsiFamily::One:
      return 1.0;
    case PsiFamily::PPower: {
      if (p_ == 1.0) return 1.0;
      if (p_ == 2.0) return std::hypot(1.0 - t, t);
      // Factor out the larger term to avoid underflow for large p.
      const double a = std::max(1.0 - t, t);
      const double b = std::min(1.0 - t, t);
      return a * std::pow(1.0 + std::pow(b / a, p_), 1.0 / p_);
    }
    case PsiFamily::PiecewiseLinear: {
      auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
      if (it == knots_.end()) return values_.back();
      const auto hi = static_cast<std::size_t>(it - knots_.begin());
      const std::size_t lo = hi - 1;
      const double w = (t - knots_[lo]) / (knots_[hi] - knots_[lo]);
      return (1.0 - w) * values_[lo] + w * values_[hi];
    }
  }
  return 1.0;
}

double PsiFunction::derivative(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("psi derivative outside [0, 1]");
  switch (family_) {
    case PsiFamily::Max:
      return t < 0.5 ? -1.0 : 1.0;
    case PsiFamily::One:
      return 0.0;
    case PsiFamily::PPower: {
      if (p_ == 1.0) return 0.0;
      const double psi = eval_unchecked(t);
      return std::pow(psi, 1.0 - p_) *
             (std::pow(t, p_ - 1.0) - std::pow(1.0 - t, p_ - 1.0));
    }
    case PsiFamily::PiecewiseLinear: {
      auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
      std::size_t hi = it == knots_.end() ? knots_.size() - 1
                                          : static_cast<std::size_t>(it - knots_.begin());
      const std::size_t lo = hi - 1;
      return (values_[hi] - values_[lo]) / (knots_[hi] - knots_[lo]);
    }
  }
  return 0.0;
}

std::string PsiFunction::name() const {
  switch (family_) {
    case PsiFamily::Max: return "max";
    case PsiFamily::One: return "one";
    case PsiFamily::PPower: {
      std::ostringstream os;
      os << "p-power(" << p_ << ")";
      return os.str();
    }
    case PsiFamily::PiecewiseLinear: return "piecewise-linear";
  }
  return "?";
}

double psi_eval(const PsiFunction& psi, double t) { return psi(t); }

PsiAnalysis psi_analyze(const PsiFunction& psi, int grid_n) {
  if (grid_n < 100) throw std::invalid_argument("psi_analyze requires grid_n >= 100");
  PsiAnalysis out;
  out.grid_n = grid_n;

  std::vector<double> ts(grid_n + 1), vs(grid_n + 1);
  for (int i = 0; i <= grid_n; ++i) {
    ts[i] = static_cast<double>(i) / grid_n;
    vs[i] = psi(ts[i]);
  }

  bool member = std::abs(vs.front() - 1.0) <= kPsiCheckTol &&
                std::abs(vs.back() - 1.0) <= kPsiCheckTol;
  for (int i = 0; i <= grid_n && member; ++i) {
    const double lower = std::max(1.0 - ts[i], ts[i]);
    if (!std::isfinite(vs[i]) || vs[i] < lower - kPsiCheckTol || vs[i] > 1.0 + kPsiCheckTol)
      member = false;
  }
  // Discrete convexity on a uniform grid.
  for (int i = 1; i < grid_n && member; ++i)
    if (vs[i - 1] - 2.0 * vs[i] + vs[i + 1] < -kPsiCheckTol) member = false;
  out.is_member = member;

  bool cc = true;
  for (int i = 1; i < grid_n; ++i) {
    const double t = ts[i];
    if (vs[i] - std::max(1.0 - t, t) <= kContactTol) cc = false;
    if (t <= 0.5 && std::abs(vs[i] - (1.0 - t)) <= kContactTol) out.lower_contact = t;
    if (t >= 0.5 && !out.upper_contact && std::abs(vs[i] - t) <= kContactTol)
      out.upper_contact = t;
  }
  // Finite p-powers sit strictly above max{1 - t, t} on (0, 1), but for
  // large p the gap near the ends drops below any grid tolerance.
  if (psi.family() == PsiFamily::PPower) {
    cc = true;
    out.lower_contact.reset();
    out.upper_contact.reset();
  }
  out.satisfies_cc = cc;
  return out;
}

namespace {

constexpr int kCoarseScan = 512;
constexpr double kInvPhi = 0.6180339887498949;

template <typename F>
void golden_refine(F&& f, double lo, double hi, double tol, DualArgmax& best) {
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d; d = c; fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  for (double s : {a, b, c, d}) {
    const double v = f(s);
    if (v > best.value) best = {v, s};
  }
}

}  // namespace

DualArgmax psi_dual_argmax(const PsiFunction& psi, double w0, double w1, double tol) {
  auto f = [&](double s) { return (w0 * (1.0 - s) + w1 * s) / psi(s); };

  DualArgmax best{f(0.0), 0.0};
  if (psi.family() == PsiFamily::PiecewiseLinear) {
    for (double s : psi.knots()) {
      const double v = f(s);
      if (v > best.value) best = {v, s};
    }
    return best;
  }
  if (psi.family() == PsiFamily::Max || psi.family() == PsiFamily::One) {
    // Piecewise affine with a kink at 1/2 at most.
    for (double s : {0.5, 1.0}) {
      const double v = f(s);
      if (v > best.value) best = {v, s};
    }
    return best;
  }

  int best_j = 0;
  for (int j = 1; j < kCoarseScan; ++j) {
    const double s = static_cast<double>(j) / (kCoarseScan - 1);
    const double v = f(s);
    if (v > best.value) {
      best = {v, s};
      best_j = j;
    }
  }
  const double h = 1.0 / (kCoarseScan - 1);
  const double lo = std::max(0.0, (best_j - 1) * h);
  const double hi = std::min(1.0, (best_j + 1) * h);
  golden_refine(f, lo, hi, tol, best);
  return best;
}

namespace {

struct Line {
  double a, b;  // a + b t
};

// Upper envelope of the lines t -> ((1 - t)(1 - s_j) + t s_j) / psi(s_j)
// over the knots s_j of a polyhedral psi, ordered by slope. Its maximum is
// the dual generator exactly.
std::vector<Line> dual_envelope(const PsiFunction& psi) {
  std::vector<Line> lines;
  for (std::size_t j = 0; j < psi.knots().size(); ++j) {
    const double s = psi.knots()[j], v = psi.values()[j];
    lines.push_back({(1.0 - s) / v, (2.0 * s - 1.0) / v});
  }
  std::sort(lines.begin(), lines.end(), [](const Line& l, const Line& r) {
    return l.b != r.b ? l.b < r.b : l.a < r.a;
  });
  auto cross = [](const Line& l, const Line& r) { return (l.a - r.a) / (r.b - l.b); };
  std::vector<Line> hull;
  for (const Line& l : lines) {
    if (!hull.empty() && hull.back().b == l.b) hull.pop_back();
    while (hull.size() >= 2 &&
           cross(hull[hull.size() - 2], l) <= cross(hull[hull.size() - 2], hull.back()))
      hull.pop_back();
    hull.push_back(l);
  }
  return hull;
}

}  // namespace

PsiFunction psi_dual(const PsiFunction& psi, int grid_n, double tol) {
  if (grid_n < 100) throw std::invalid_argument("psi_dual requires grid_n >= 100");
  if (!psi_analyze(psi, std::max(grid_n, 1000)).is_member)
    throw std::invalid_argument("psi_dual: input is not a member of the convex class");

  // Uniform nodes plus a cubically graded cluster at each end, where the
  // dual of a smooth generator can bend sharply (p-powers with p near 1 or
  // large p).
  std::vector<double> knots;
  knots.reserve(3 * static_cast<std::size_t>(grid_n) + 3);
  for (int i = 0; i <= grid_n; ++i) {
    const double u = static_cast<double>(i) / grid_n;
    knots.push_back(u);
    knots.push_back(0.5 * u * u * u);
    knots.push_back(1.0 - 0.5 * u * u * u);
  }
  std::vector<Line> hull;
  if (psi.family() == PsiFamily::PiecewiseLinear) {
    hull = dual_envelope(psi);
    for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
      const double t = (hull[i].a - hull[i + 1].a) / (hull[i + 1].b - hull[i].b);
      if (t > 0.0 && t < 1.0) knots.push_back(t);
    }
  }
  std::sort(knots.begin(), knots.end());
  std::vector<double> kept;
  kept.reserve(knots.size());
  for (double t : knots)
    if (kept.empty() || t - kept.back() > 1e-15) kept.push_back(t);
  kept.front() = 0.0;
  kept.back() = 1.0;
  std::vector<double> values(kept.size());
  if (!hull.empty()) {
    std::size_t j = 0;
    for (std::size_t i = 0; i < kept.size(); ++i) {
      const double t = kept[i];
      while (j + 1 < hull.size() && hull[j + 1].a + hull[j + 1].b * t >= hull[j].a + hull[j].b * t) ++j;
      values[i] = hull[j].a + hull[j].b * t;
    }
  } else {
    for (std::size_t i = 0; i < kept.size(); ++i)
      values[i] = psi_dual_argmax(psi, 1.0 - kept[i], kept[i], tol).value;
  }
  values.front() = std::max(values.front(), 1.0);
  values.back() = std::max(values.back(), 1.0);
  return PsiFunction::piecewise_linear(std::move(kept), std::move(values));
}

double norm_psi_pair(double z_abs, double v_abs, const PsiFunction& psi) {
  if (z_abs < 0.0 || v_abs < 0.0) throw std::domain_error("norm_psi_pair: negative modulus");
  const double s = z_abs + v_abs;
  if (s == 0.0) return 0.0;
  switch (psi.family()) {
    case PsiFamily::Max:
      return std::max(z_abs, v_abs);
    case PsiFamily::One:
      return s;
    case PsiFamily::PPower: {
      const double m = std::max(z_abs, v_abs);
      return m * std::pow(std::pow(z_abs / m, psi.p()) + std::pow(v_abs / m, psi.p()), 1.0 / psi.p());
    }
    default:
      return s * psi(std::clamp(v_abs / s, 0.0, 1.0));
  }
}

void write_psi_csv(std::ostream& os, const PsiFunction& psi) {
  os << "t,psi\n";
  os << std::setprecision(17);
  if (psi.family() == PsiFamily::PiecewiseLinear) {
    for (std::size_t i = 0; i < psi.knots().size(); ++i)
      os << psi.knots()[i] << ',' << psi.values()[i] << '\n';
    return;
  }
  constexpr int n = 1024;
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    os << t << ',' << psi(t) << '\n';
  }
}

PsiFunction read_psi_csv(std::istream& is) {
  std::vector<double> knots, values;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("psi csv: missing comma");
    try {
      std::size_t used = 0;
      const double t = std::stod(line.substr(0, comma), &used);
      const double v = std::stod(line.substr(comma + 1));
      knots.push_back(t);
      values.push_back(v);
    } catch (const std::invalid_argument&) {
      if (knots.empty()) continue;  // header
      throw std::invalid_argument("psi csv: malformed row: " + line);
    }
  }
  return PsiFunction::piecewise_linear(std::move(knots), std::move(values));
}

}  // namespace flatres
