#include "flatres/vector_norms.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace flatres {

IndexedVector::IndexedVector(int half_width)
    : half_width_(half_width), coeffs_(Eigen::VectorXcd::Zero(2 * half_width + 1)) {
  if (half_width < 1) throw std::invalid_argument("IndexedVector requires N >= 1");
}

IndexedVector::IndexedVector(int half_width, Eigen::VectorXcd coeffs)
    : half_width_(half_width), coeffs_(std::move(coeffs)) {
  if (half_width < 1) throw std::invalid_argument("IndexedVector requires N >= 1");
  if (coeffs_.size() != 2 * half_width + 1)
    throw std::invalid_argument("IndexedVector: coefficient length must be 2N + 1");
}

IndexedVector IndexedVector::unit(int half_width, int k) {
  IndexedVector e(half_width);
  e[k] = 1.0;
  return e;
}

NormSpec NormSpec::lp(double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("l_p norm requires p >= 1");
  return NormSpec(LpNorm{p});
}

NormSpec NormSpec::linf() { return NormSpec(LpNorm{std::numeric_limits<double>::infinity()}); }

NormSpec NormSpec::star() { return NormSpec(StarNorm{}); }

NormSpec NormSpec::psi_sum(std::vector<int> part0, NormSpec inner0, std::vector<int> part1,
                           NormSpec inner1, PsiFunction psi) {
  PsiSumNorm s;
  s.part0 = std::move(part0);
  s.part1 = std::move(part1);
  s.inner0 = std::make_shared<const NormSpec>(std::move(inner0));
  s.inner1 = std::make_shared<const NormSpec>(std::move(inner1));
  s.psi = std::move(psi);
  return NormSpec(std::move(s));
}

NormSpec NormSpec::star_as_composite(int first, Eigen::Index n) {
  std::vector<int> rest, tail;
  for (int k = first; k < first + static_cast<int>(n); ++k) {
    if (k != 0) rest.push_back(k);
    if (k != 0 && k != 1) tail.push_back(k);
  }
  NormSpec hilbert_and_one =
      psi_sum(tail, l2(), {1}, l2(), PsiFunction::max_family());
  return psi_sum(rest, std::move(hilbert_and_one), {0}, l2(), PsiFunction::one_family());
}

bool NormSpec::is_l2() const {
  const auto* lp = std::get_if<LpNorm>(&v_);
  return lp != nullptr && lp->p == 2.0;
}

std::string NormSpec::name() const {
  return std::visit(
      [](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LpNorm>) {
          if (std::isinf(n.p)) return "linf";
          std::ostringstream os;
          os << 'l' << n.p;
          return os.str();
        } else if constexpr (std::is_same_v<T, StarNorm>) {
          return "star";
        } else {
          return "psi-sum[" + n.inner0->name() + "," + n.inner1->name() + ";" + n.psi.name() + "]";
        }
      },
      v_);
}

IndexedView make_view(const Eigen::VectorXcd& x, int first_index) {
  IndexedView v;
  v.indices.resize(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) v.indices[i] = first_index + static_cast<int>(i);
  v.values = x;
  return v;
}

namespace {

cplx phase(cplx z) {
  const double a = std::abs(z);
  return a > 0.0 ? z / a : cplx(1.0, 0.0);
}

Eigen::Index position_of(const std::vector<int>& indices, int k) {
  auto it = std::find(indices.begin(), indices.end(), k);
  return it == indices.end() ? -1 : static_cast<Eigen::Index>(it - indices.begin());
}

double lp_value(double p, const Eigen::VectorXcd& x) {
  if (x.size() == 0) return 0.0;
  if (std::isinf(p)) return x.cwiseAbs().maxCoeff();
  if (p == 1.0) return x.cwiseAbs().sum();
  if (p == 2.0) return x.norm();
  const double scale = x.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return scale * std::pow((x.cwiseAbs() / scale).array().pow(p).sum(), 1.0 / p);
}

// Entries of `x` whose index lies in `part`, in window order.
IndexedView restrict_view(const IndexedView& x, const std::vector<int>& part,
                          std::vector<Eigen::Index>& positions) {
  const std::set<int> wanted(part.begin(), part.end());
  positions.clear();
  IndexedView sub;
  for (std::size_t i = 0; i < x.indices.size(); ++i)
    if (wanted.count(x.indices[i])) {
      positions.push_back(static_cast<Eigen::Index>(i));
      sub.indices.push_back(x.indices[i]);
    }
  sub.values.resize(static_cast<Eigen::Index>(positions.size()));
  for (std::size_t j = 0; j < positions.size(); ++j) sub.values(j) = x.values(positions[j]);
  return sub;
}

struct StarParts {
  Eigen::Index pos0 = -1;
  Eigen::Index pos1 = -1;
};

StarParts star_parts(const IndexedView& x) {
  StarParts s{position_of(x.indices, 0), position_of(x.indices, 1)};
  if (s.pos0 < 0 || s.pos1 < 0)
    throw std::invalid_argument("star norm requires indices 0 and 1 inside the window");
  return s;
}

// l2 norm of the entries other than positions pos0 and pos1.
double tail_norm(const IndexedView& x, const StarParts& s) {
  double sq = 0.0;
  for (Eigen::Index i = 0; i < x.values.size(); ++i)
    if (i != s.pos0 && i != s.pos1) sq += std::norm(x.values(i));
  return std::sqrt(sq);
}

}  // namespace

void validate_norm(const NormSpec& spec, const std::vector<int>& indices) {
  if (indices.empty()) throw std::invalid_argument("norm evaluated on an empty window");
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, StarNorm>) {
          if (position_of(indices, 0) < 0 || position_of(indices, 1) < 0)
            throw std::invalid_argument("star norm requires indices 0 and 1 inside the window");
        } else if constexpr (std::is_same_v<T, PsiSumNorm>) {
          std::set<int> p0(n.part0.begin(), n.part0.end());
          std::set<int> p1(n.part1.begin(), n.part1.end());
          if (p0.empty() || p1.empty())
            throw std::invalid_argument("psi-sum parts must be non-empty");
          for (int k : p0)
            if (p1.count(k)) throw std::invalid_argument("psi-sum parts overlap");
          std::set<int> all(indices.begin(), indices.end());
          if (p0.size() + p1.size() != all.size())
            throw std::invalid_argument("psi-sum partition does not cover the window");
          for (int k : all)
            if (!p0.count(k) && !p1.count(k))
              throw std::invalid_argument("psi-sum partition does not cover the window");
          validate_norm(*n.inner0, std::vector<int>(p0.begin(), p0.end()));
          validate_norm(*n.inner1, std::vector<int>(p1.begin(), p1.end()));
        }
      },
      spec.variant());
}

double eval_norm(const NormSpec& spec, const IndexedView& x) {
  return std::visit(
      [&](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LpNorm>) {
          return lp_value(n.p, x.values);
        } else if constexpr (std::is_same_v<T, StarNorm>) {
          const StarParts s = star_parts(x);
          return std::max(tail_norm(x, s), std::abs(x.values(s.pos1))) + std::abs(x.values(s.pos0));
        } else {
          std::vector<Eigen::Index> pos;
          const double a = eval_norm(*n.inner0, restrict_view(x, n.part0, pos));
          const double b = eval_norm(*n.inner1, restrict_view(x, n.part1, pos));
          return norm_psi_pair(a, b, n.psi);
        }
      },
      spec.variant());
}

double eval_norm(const NormSpec& spec, const IndexedVector& x) {
  return eval_norm(spec, make_view(x.coeffs(), x.first_index()));
}

double eval_norm(const NormSpec& spec, const Eigen::VectorXcd& x, int first_index) {
  return eval_norm(spec, make_view(x, first_index));
}

Eigen::VectorXcd norm_subgradient(const NormSpec& spec, const IndexedView& x) {
  const Eigen::Index n = x.values.size();
  Eigen::VectorXcd s = Eigen::VectorXcd::Zero(n);
  std::visit(
      [&](const auto& nrm) {
        using T = std::decay_t<decltype(nrm)>;
        if constexpr (std::is_same_v<T, LpNorm>) {
          if (n == 0) return;
          const double value = lp_value(nrm.p, x.values);
          if (value == 0.0) return;
          if (std::isinf(nrm.p)) {
            Eigen::Index imax = 0;
            x.values.cwiseAbs().maxCoeff(&imax);
            s(imax) = phase(x.values(imax));
          } else if (nrm.p == 1.0) {
            for (Eigen::Index i = 0; i < n; ++i)
              if (x.values(i) != cplx(0.0)) s(i) = phase(x.values(i));
          } else {
            for (Eigen::Index i = 0; i < n; ++i) {
              const double a = std::abs(x.values(i));
              if (a > 0.0) s(i) = phase(x.values(i)) * std::pow(a / value, nrm.p - 1.0);
            }
          }
        } else if constexpr (std::is_same_v<T, StarNorm>) {
          const StarParts sp = star_parts(x);
          const cplx x0 = x.values(sp.pos0), x1 = x.values(sp.pos1);
          if (x0 != cplx(0.0)) s(sp.pos0) = phase(x0);
          const double tail = tail_norm(x, sp);
          if (tail >= std::abs(x1) && tail > 0.0) {
            for (Eigen::Index i = 0; i < n; ++i)
              if (i != sp.pos0 && i != sp.pos1) s(i) = x.values(i) / tail;
          } else if (x1 != cplx(0.0)) {
            s(sp.pos1) = phase(x1);
          }
        } else {
          std::vector<Eigen::Index> pos0, pos1;
          const IndexedView x0 = restrict_view(x, nrm.part0, pos0);
          const IndexedView x1 = restrict_view(x, nrm.part1, pos1);
          const double a = eval_norm(*nrm.inner0, x0);
          const double b = eval_norm(*nrm.inner1, x1);
          if (a + b == 0.0) return;
          const double t = b / (a + b);
          const double psi_t = nrm.psi(t);
          const double d = nrm.psi.derivative(t);
          const double c0 = psi_t - t * d;
          const double c1 = psi_t + (1.0 - t) * d;
          const Eigen::VectorXcd s0 = norm_subgradient(*nrm.inner0, x0);
          const Eigen::VectorXcd s1 = norm_subgradient(*nrm.inner1, x1);
          for (std::size_t j = 0; j < pos0.size(); ++j) s(pos0[j]) = c0 * s0(j);
          for (std::size_t j = 0; j < pos1.size(); ++j) s(pos1[j]) = c1 * s1(j);
        }
      },
      spec.variant());
  return s;
}

BallMaximizer ball_maximizer(const NormSpec& spec, const IndexedView& g) {
  const Eigen::Index n = g.values.size();
  BallMaximizer out;
  out.x = Eigen::VectorXcd::Zero(n);
  std::visit(
      [&](const auto& nrm) {
        using T = std::decay_t<decltype(nrm)>;
        if constexpr (std::is_same_v<T, LpNorm>) {
          if (n == 0) return;
          if (nrm.p == 1.0) {
            Eigen::Index imax = 0;
            out.dual_value = g.values.cwiseAbs().maxCoeff(&imax);
            out.x(imax) = phase(g.values(imax));
          } else if (std::isinf(nrm.p)) {
            out.dual_value = g.values.cwiseAbs().sum();
            for (Eigen::Index i = 0; i < n; ++i) out.x(i) = phase(g.values(i));
          } else {
            const double q = nrm.p / (nrm.p - 1.0);
            const double gq = lp_value(q, g.values);
            out.dual_value = gq;
            if (gq == 0.0) {
              out.x(0) = 1.0;
              return;
            }
            for (Eigen::Index i = 0; i < n; ++i) {
              const double a = std::abs(g.values(i));
              if (a > 0.0) out.x(i) = phase(g.values(i)) * std::pow(a / gq, q - 1.0);
            }
          }
        } else if constexpr (std::is_same_v<T, StarNorm>) {
          // Extreme points: unimodular multiples of e_0, or (h, x_1, 0) with
          // ||h||_2 = 1 and |x_1| = 1.
          const StarParts sp = star_parts(g);
          const double g0 = std::abs(g.values(sp.pos0));
          const double tail = tail_norm(g, sp);
          const double g1 = std::abs(g.values(sp.pos1));
          if (g0 > tail + g1) {
            out.dual_value = g0;
            out.x(sp.pos0) = phase(g.values(sp.pos0));
          } else {
            out.dual_value = tail + g1;
            out.x(sp.pos1) = phase(g.values(sp.pos1));
            if (tail > 0.0)
              for (Eigen::Index i = 0; i < n; ++i)
                if (i != sp.pos0 && i != sp.pos1) out.x(i) = g.values(i) / tail;
          }
        } else {
          std::vector<Eigen::Index> pos0, pos1;
          const BallMaximizer m0 = ball_maximizer(*nrm.inner0, restrict_view(g, nrm.part0, pos0));
          const BallMaximizer m1 = ball_maximizer(*nrm.inner1, restrict_view(g, nrm.part1, pos1));
          const DualArgmax best = psi_dual_argmax(nrm.psi, m0.dual_value, m1.dual_value);
          const double psi_s = nrm.psi(best.s);
          const double a = (1.0 - best.s) / psi_s;
          const double b = best.s / psi_s;
          out.dual_value = a * m0.dual_value + b * m1.dual_value;
          for (std::size_t j = 0; j < pos0.size(); ++j) out.x(pos0[j]) = a * m0.x(j);
          for (std::size_t j = 0; j < pos1.size(); ++j) out.x(pos1[j]) = b * m1.x(j);
        }
      },
      spec.variant());
  return out;
}

ThetaSplit theta_split(const NormSpec& spec, const IndexedVector& x, double tol) {
  const auto* sum = std::get_if<PsiSumNorm>(&spec.variant());
  if (sum == nullptr) throw std::invalid_argument("theta_split requires a psi-sum norm");
  if (x.coeffs().cwiseAbs().maxCoeff() == 0.0)
    throw std::domain_error("theta_split: theta is undefined for x = 0");
  const IndexedView view = make_view(x.coeffs(), x.first_index());
  validate_norm(spec, view.indices);

  std::vector<Eigen::Index> pos;
  ThetaSplit out;
  out.part0_norm = eval_norm(*sum->inner0, restrict_view(view, sum->part0, pos));
  out.part1_norm = eval_norm(*sum->inner1, restrict_view(view, sum->part1, pos));
  out.total_norm = norm_psi_pair(out.part0_norm, out.part1_norm, sum->psi);
  out.theta = out.part0_norm / (out.part0_norm + out.part1_norm);
  const double slack = tol * std::max(1.0, out.total_norm);
  if (out.theta > 0.0) out.th1_holds = out.total_norm <= out.part0_norm / out.theta + slack;
  out.th2_holds = out.part0_norm <= 2.0 * out.theta * out.total_norm + slack;
  return out;
}

void write_vector_csv(std::ostream& os, const IndexedVector& x) {
  os << "index,re,im\n" << std::setprecision(17);
  for (int k = x.first_index(); k <= x.last_index(); ++k)
    os << k << ',' << x[k].real() << ',' << x[k].imag() << '\n';
}

IndexedVector read_vector_csv(std::istream& is) {
  std::vector<std::pair<int, cplx>> rows;
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (first && line.rfind("index", 0) == 0) {
      first = false;
      continue;
    }
    first = false;
    std::istringstream row(line);
    std::string a, b, c;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, c))
      throw std::invalid_argument("vector csv: expected index,re,im");
    rows.emplace_back(std::stoi(a), cplx(std::stod(b), std::stod(c)));
  }
  int half = 1;
  for (const auto& [k, v] : rows) half = std::max(half, std::abs(k));
  IndexedVector x(half);
  for (const auto& [k, v] : rows) x[k] = v;
  return x;
}

}  // namespace flatres
