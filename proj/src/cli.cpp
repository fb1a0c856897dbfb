#include "flatres/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

#include "flatres/absolute_norms.hpp"
#include "flatres/convexity_probe.hpp"
#include "flatres/opnorm.hpp"
#include "flatres/pseudospectra.hpp"
#include "flatres/semigroup.hpp"
#include "flatres/shift_operators.hpp"
#include "flatres/vector_norms.hpp"

namespace flatres::cli {

namespace {

class usage_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string kind = "A";
  double delta = 0.25;
  double emm = 4.0;
  std::string norm = "star";
  std::string out_norm;
  int half_width = 40;
  double center_re = 0.0;
  double center_im = 0.0;
  std::optional<double> radius;
  int resolution = 11;
  double tolerance = 1e-3;
  int restarts = 64;
  std::uint64_t seed = 24317;
  std::string output;
  unsigned threads = 0;
  // opnorm
  double lambda_re = 0.0;
  double lambda_im = 0.0;
  std::string matrix_path;
  // dual-psi
  std::string psi = "p:2";
  int psi_grid = 4096;
  // convexity
  int dim = 3;
  int trials = 10000;
  std::optional<double> epsilon;
  // kallman-rota
  int size = 4;
  int cases = 20;
  int samples = 1000;
};

ShiftSpec make_shift(const RunConfig& c) {
  if (c.kind == "A" || c.kind == "a") return ShiftSpec::kind_a(c.delta);
  if (c.kind == "B" || c.kind == "b") return ShiftSpec::kind_b(c.emm);
  throw usage_error("--kind: unknown operator kind '" + c.kind + "' (expected A or B)");
}

double default_radius(const ShiftSpec& s) {
  if (s.kind() == ShiftKind::A) return s.delta();
  const double m = s.emm();
  return std::min(1.0 / m, 1.0 / 3.0 - 1.0 / m) - 1e-3;
}

std::vector<int> window_indices(int first, int n) {
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), first);
  return idx;
}

NormSpec parse_norm(const std::string& text, const std::vector<int>& indices,
                    const std::string& flag) {
  NormSpec spec = [&] {
    if (text == "star") return NormSpec::star();
    if (text == "l2") return NormSpec::l2();
    if (text == "l1") return NormSpec::l1();
    if (text == "linf") return NormSpec::linf();
    if (text.rfind("psi-p:", 0) == 0) {
      double p = 0.0;
      try {
        std::size_t used = 0;
        p = std::stod(text.substr(6), &used);
        if (used != text.size() - 6) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw usage_error(flag + ": cannot parse exponent in '" + text + "'");
      }
      if (!(p >= 1.0)) throw usage_error(flag + ": psi-p exponent must be >= 1");
      std::vector<int> rest;
      for (int k : indices)
        if (k != 0) rest.push_back(k);
      return NormSpec::psi_sum(std::move(rest), NormSpec::l2(), {0}, NormSpec::l2(),
                               PsiFunction::p_power(p));
    }
    throw usage_error(flag + ": unknown norm '" + text +
                      "' (expected star, l2, l1, linf or psi-p:<p>)");
  }();
  try {
    validate_norm(spec, indices);
  } catch (const std::invalid_argument& e) {
    throw usage_error(flag + ": " + e.what());
  }
  return spec;
}

PsiFunction parse_psi(const std::string& text) {
  if (text == "max") return PsiFunction::max_family();
  if (text == "one") return PsiFunction::one_family();
  if (text.rfind("p:", 0) == 0) {
    try {
      return PsiFunction::p_power(std::stod(text.substr(2)));
    } catch (const std::invalid_argument&) {
      throw usage_error("--psi: cannot parse '" + text + "'");
    }
  }
  if (text.rfind("file:", 0) == 0) {
    std::ifstream in(text.substr(5));
    if (!in) throw usage_error("--psi: cannot open '" + text.substr(5) + "'");
    return read_psi_csv(in);
  }
  throw usage_error("--psi: unknown generator '" + text + "' (expected max, one, p:<p> or file:<csv>)");
}

std::string fmt(double v, int digits = 6) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

std::string fmt(cplx z) { return "(" + fmt(z.real()) + ", " + fmt(z.imag()) + ")"; }

// Output sink: the named file when given, the report stream otherwise.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw usage_error("--output: cannot open '" + path + "'");
      os_ = &file_;
    }
  }
  std::ostream& stream() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

ScanConfig scan_config(const RunConfig& c) {
  ScanConfig sc;
  sc.opnorm.restarts = c.restarts;
  sc.opnorm.seed = c.seed;
  sc.half_width = c.half_width;
  sc.threads = c.threads;
  return sc;
}

PseudoGrid run_scan(const RunConfig& c) {
  const ShiftSpec s = make_shift(c);
  const NormSpec norm = parse_norm(c.norm, window_indices(-c.half_width, 2 * c.half_width + 1), "--norm");
  const Region region = Region::disc({c.center_re, c.center_im}, c.radius.value_or(default_radius(s)));
  return scan_grid(s, norm, region, c.resolution, scan_config(c));
}

int cmd_scan(const RunConfig& c, std::ostream& out) {
  const PseudoGrid grid = run_scan(c);
  Sink sink(c.output, out);
  write_grid_csv(sink.stream(), grid);
  return kExitOk;
}

int cmd_flatness(const RunConfig& c, std::ostream& out) {
  const PseudoGrid grid = run_scan(c);
  const FlatnessReport r = flatness_report(grid, c.tolerance);
  out << "operator: " << grid.operator_label << "\n"
      << "norm: " << grid.norm_name << "\n"
      << "points: " << grid.points.size() << "\n"
      << "max: " << fmt(r.max_value, 12) << " at " << fmt(r.argmax) << "\n"
      << "min: " << fmt(r.min_value, 12) << " at " << fmt(r.argmin) << "\n"
      << "relative_variation: " << fmt(r.relative_variation, 6) << "\n"
      << "tolerance: " << fmt(r.tolerance) << "\n"
      << "is_flat = " << (r.is_flat ? "true" : "false") << "\n";
  if (!c.output.empty()) {
    Sink sink(c.output, out);
    write_grid_csv(sink.stream(), grid);
  }
  return kExitOk;
}

Eigen::MatrixXcd read_dense_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw usage_error("--matrix: cannot open '" + path + "'");
  std::string line;
  std::getline(in, line);
  struct Entry {
    int r, c;
    cplx v;
  };
  std::vector<Entry> entries;
  int rows = 0, cols = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    Entry e{};
    double re = 0.0, im = 0.0;
    if (!(ls >> e.r >> e.c >> re >> im) || e.r < 0 || e.c < 0)
      throw usage_error("--matrix: malformed row '" + line + "'");
    e.v = {re, im};
    rows = std::max(rows, e.r + 1);
    cols = std::max(cols, e.c + 1);
    entries.push_back(e);
  }
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(rows, cols);
  for (const Entry& e : entries) m(e.r, e.c) = e.v;
  return m;
}

int cmd_opnorm(const RunConfig& c, std::ostream& out) {
  OpnormConfig oc;
  oc.restarts = c.restarts;
  oc.seed = c.seed;
  Eigen::MatrixXcd m;
  double tail = 0.0;
  if (!c.matrix_path.empty()) {
    m = read_dense_csv(c.matrix_path);
  } else {
    const ShiftSpec s = make_shift(c);
    const cplx lambda(c.lambda_re, c.lambda_im);
    if (!s.in_validated_disc(lambda))
      throw precondition_error("lambda " + fmt(lambda) + " lies outside the validated disc of " +
                               s.label());
    const ResolventMatrix r = resolvent_matrix(s, lambda, c.half_width);
    m = r.entries;
    tail = r.truncation_tail;
  }
  const NormSpec in = parse_norm(c.norm, window_indices(window_first_index(m.cols()), m.cols()), "--norm");
  const NormSpec outn = parse_norm(c.out_norm.empty() ? c.norm : c.out_norm,
                                   window_indices(window_first_index(m.rows()), m.rows()),
                                   c.out_norm.empty() ? "--norm" : "--out-norm");
  const NormEstimate e = (in.is_l2() && outn.is_l2()) ? opnorm_l2(m, c.seed)
                                                      : opnorm_general(m, in, outn, oc);
  out << "value: " << fmt(e.value, 15) << "\n"
      << "method: " << to_string(e.method) << "\n"
      << "converged: " << (e.converged ? "true" : "false") << "\n"
      << "restarts_used: " << e.restarts_used << "\n"
      << "truncation_bound: " << fmt(tail, 6) << "\n";
  if (!c.output.empty()) {
    Sink sink(c.output, out);
    IndexedVector w;
    if (m.cols() % 2 == 1) {
      w = IndexedVector(static_cast<int>(m.cols() / 2), e.witness);
      write_vector_csv(sink.stream(), w);
    } else {
      sink.stream() << "index,re,im\n" << std::setprecision(17);
      const int first = window_first_index(m.cols());
      for (Eigen::Index i = 0; i < e.witness.size(); ++i)
        sink.stream() << first + i << "," << e.witness(i).real() << "," << e.witness(i).imag()
                      << "\n";
    }
  }
  return kExitOk;
}

int cmd_dual_psi(const RunConfig& c, std::ostream& out) {
  const PsiFunction psi = parse_psi(c.psi);
  const PsiFunction dual = psi_dual(psi, c.psi_grid);
  Sink sink(c.output, out);
  write_psi_csv(sink.stream(), dual);
  return kExitOk;
}

int cmd_convexity(const RunConfig& c, std::ostream& out) {
  if (c.dim < 2) throw usage_error("--dim: must be at least 2");
  const int first = window_first_index(c.dim);
  const NormSpec norm = parse_norm(c.norm, window_indices(first, c.dim), "--norm");
  const auto w = csc_witness_search(norm, first, c.dim, c.trials, c.seed);
  out << "norm: " << norm.name() << "\n"
      << "window: [" << first << ", " << first + c.dim - 1 << "]\n";
  if (w) {
    out << "witness: found\n"
        << "sup_violation: " << fmt(w->sup_violation, 6) << "\n"
        << "|y|: " << fmt(eval_norm(norm, w->y, first), 6) << "\n";
    for (int i = 0; i < c.dim; ++i)
      out << "  k=" << first + i << "  x=" << fmt(cplx(w->x(i))) << "  y=" << fmt(cplx(w->y(i)))
          << "\n";
  } else {
    out << "witness: none found in " << c.trials << " trials\n";
  }
  if (c.epsilon) {
    const double d = cuc_modulus_estimate(norm, first, c.dim, *c.epsilon, c.trials, c.seed);
    out << "modulus_estimate(eps=" << fmt(*c.epsilon) << "): " << fmt(d, 6) << "\n";
  }
  return kExitOk;
}

int cmd_kallman_rota(const RunConfig& c, std::ostream& out) {
  if (c.size < 1 || c.size > 8) throw usage_error("--size: must lie in [1, 8]");
  double worst = 0.0, worst_adj = 0.0;
  for (int i = 0; i < c.cases; ++i) {
    const GeneratorCase g =
        make_generator_case(random_contraction_generator(c.size, mix_seed(c.seed, i)));
    const RatioSummary r = check_kallman_rota(g, c.samples, mix_seed(c.seed, 1000 + i));
    const RatioSummary ra = check_kallman_rota(g, c.samples, mix_seed(c.seed, 1000 + i), true);
    worst = std::max(worst, r.max_ratio);
    worst_adj = std::max(worst_adj, ra.max_ratio);
    out << "case " << i << ": K=" << fmt(g.bound) << " ratio=" << fmt(r.max_ratio, 9)
        << " adjoint_ratio=" << fmt(ra.max_ratio, 9) << "\n";
  }
  const bool ok = worst <= 4.0 && worst_adj <= 4.0;
  out << "max ratio: " << fmt(worst, 9) << "\n"
      << "max adjoint ratio: " << fmt(worst_adj, 9) << "\n"
      << (ok ? "PASS" : "FAIL") << " ratio <= 4\n";
  return ok ? kExitOk : kExitClaimFailed;
}

// ---- verify bundles ----

class Checklist {
 public:
  explicit Checklist(std::ostream& out) : out_(out) {}
  void check(bool ok, const std::string& anchor, const std::string& text) {
    out_ << (ok ? "[PASS] " : "[FAIL] ") << anchor << "  " << text << "\n";
    all_ = all_ && ok;
  }
  bool all() const { return all_; }

 private:
  std::ostream& out_;
  bool all_ = true;
};

// Uniform |x_0| = t, the rest a Gaussian direction scaled so that
// max{||x'||_2, |x_1|} = 1 - t. Every sample has star norm exactly 1.
IndexedVector sample_star_sphere(int half_width, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  IndexedVector x(half_width);
  for (int k = -half_width; k <= half_width; ++k) x[k] = cplx(normal(rng), normal(rng));
  // Sparse or concentrated inputs sit near extreme points of the ball.
  const int shape = static_cast<int>(unif(rng) * 3.0);
  if (shape == 1) {
    for (int k = -half_width; k <= half_width; ++k)
      if (k != 1 && std::abs(k) > 2) x[k] = 0.0;
  } else if (shape == 2) {
    for (int k = -half_width; k <= half_width; ++k) x[k] *= std::pow(0.25, std::abs(k - 1));
  }
  const double t = unif(rng);
  const cplx x0 = std::polar(t, 2.0 * std::numbers::pi * unif(rng));
  x[0] = 0.0;
  const double rest = eval_norm(NormSpec::star(), x);
  x.coeffs() *= (1.0 - t) / rest;
  x[0] = x0;
  return x;
}

std::vector<cplx> sample_disc(double radius, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<cplx> out;
  out.push_back(0.0);
  out.push_back(radius);
  while (static_cast<int>(out.size()) < count)
    out.push_back(std::polar(radius * std::sqrt(unif(rng)), 2.0 * std::numbers::pi * unif(rng)));
  return out;
}

struct GridCheck {
  FlatnessReport report;
  double lo = 0.0;
  double hi = 0.0;
  double max_trunc = 0.0;
  double min_e0 = 0.0;
};

GridCheck grid_check(const ShiftSpec& s, double radius, const RunConfig& c) {
  const NormSpec star = NormSpec::star();
  const PseudoGrid grid = scan_grid(s, star, Region::disc(0.0, radius), c.resolution, scan_config(c));
  GridCheck g;
  g.report = flatness_report(grid, c.tolerance);
  g.lo = g.report.min_value;
  g.hi = g.report.max_value;
  g.min_e0 = std::numeric_limits<double>::infinity();
  for (const GridPoint& p : grid.points) {
    g.max_trunc = std::max(g.max_trunc, p.trunc_bound);
    const ResolventMatrix r = resolvent_matrix(s, p.lambda, c.half_width);
    const Eigen::VectorXcd col = r.entries.col(c.half_width);
    g.min_e0 = std::min(g.min_e0, eval_norm(star, col, -c.half_width));
  }
  return g;
}

int cmd_verify_a(RunConfig c, std::ostream& out) {
  c.kind = "A";
  const ShiftSpec s = make_shift(c);
  const double delta = s.delta();
  const double radius = c.radius.value_or(delta);
  if (radius > delta * (1.0 + 1e-12))
    throw precondition_error("--radius: " + fmt(radius) + " exceeds the validated radius " + fmt(delta));
  Checklist list(out);

  const GridCheck g = grid_check(s, radius, c);
  const bool band = g.lo >= 1.0 - c.tolerance && g.hi <= 1.0 + g.max_trunc + c.tolerance;
  list.check(band && g.report.is_flat, "[A:level]",
             "grid norms in [" + fmt(g.lo, 12) + ", " + fmt(g.hi, 12) + "], relative variation " +
                 fmt(g.report.relative_variation, 3) + ", truncation bound " + fmt(g.max_trunc, 3));
  list.check(g.min_e0 >= 1.0 - 1e-12, "[A:e0]", "min over grid of ||R e_0||_* = " + fmt(g.min_e0, 15));

  std::mt19937_64 rng(mix_seed(c.seed, 0xA3));
  double worst_pair = 0.0, worst_decay = 0.0, worst_norm = 0.0;
  for (cplx lambda : sample_disc(radius, 20, mix_seed(c.seed, 0xA4))) {
    for (int i = 0; i < 1000; ++i) {
      const IndexedVector x = sample_star_sphere(c.half_width, rng);
      const IndexedVector y = apply_resolvent(s, lambda, x);
      worst_pair = std::max(worst_pair, std::abs(y[1]) + std::abs(y[0]));
      for (int k = -c.half_width; k <= c.half_width; ++k)
        worst_decay = std::max(worst_decay, std::abs(y[k]) / ((4.0 / 3.0) * std::pow(delta, std::abs(k - 1))));
      worst_norm = std::max(worst_norm, eval_norm(NormSpec::star(), y));
    }
  }
  list.check(worst_pair <= 1.0 + 1e-12, "[A:part3]",
             "max |y_1| + |y_0| over 20 x 1000 samples = " + fmt(worst_pair, 12));
  list.check(worst_decay <= 1.0 + 1e-12, "[A:part4]",
             "max |y_k| / ((4/3) delta^|k-1|) = " + fmt(worst_decay, 12));
  const double scalar = (4.0 * delta / 3.0) * std::sqrt((1 + delta * delta) / (1 - delta * delta)) + 1.0 / 3.0;
  list.check(scalar < 1.0, "[A:part4-scalar]", "(4d/3) sqrt((1+d^2)/(1-d^2)) + 1/3 = " + fmt(scalar, 6));
  list.check(worst_norm <= 1.0 + 1e-12, "[A:part5]", "max sampled ||R x||_* = " + fmt(worst_norm, 12));

  if (list.all())
    out << "flat at " << fixed(0.5 * (g.lo + g.hi), 3) << " over |λ| ≤ " << fmt(radius) << "\n";
  return list.all() ? kExitOk : kExitClaimFailed;
}

int cmd_verify_b(RunConfig c, std::ostream& out) {
  c.kind = "B";
  const ShiftSpec s = make_shift(c);
  const double m = s.emm();
  const double limit = std::min(1.0 / m, 1.0 / 3.0 - 1.0 / m);
  const double radius = c.radius.value_or(default_radius(s));
  if (!(radius < limit))
    throw precondition_error("--radius: " + fmt(radius) + " must be below min{1/M, 1/3 - 1/M} = " +
                             fmt(limit));
  Checklist list(out);

  const GridCheck g = grid_check(s, radius, c);
  const bool band = std::abs(g.lo - m) <= 1e-3 * m && std::abs(g.hi - m) <= 1e-3 * m;
  list.check(band && g.report.is_flat, "[B:level]",
             "grid norms in [" + fmt(g.lo, 12) + ", " + fmt(g.hi, 12) + "], relative variation " +
                 fmt(g.report.relative_variation, 3));
  list.check(g.min_e0 >= m - 1e-9, "[B:part4]", "min over grid of ||R e_0||_* = " + fmt(g.min_e0, 15));

  const double q = radius;
  const double chain = (2.0 * (m * q + 1.0) + 1.0) / (1.0 - q);
  list.check(chain < m, "[B:part3-tail]", "(2(Mq+1)+1)/(1-q) = " + fmt(chain, 9) + " < M");
  const double pair = (1.0 + m * q) / (1.0 - q);
  list.check(pair <= m, "[B:part3-pair]", "(1+Mq)/(1-q) = " + fmt(pair, 9) + " <= M");

  std::mt19937_64 rng(mix_seed(c.seed, 0xB3));
  double worst = 0.0;
  for (cplx lambda : sample_disc(radius, 20, mix_seed(c.seed, 0xB4)))
    for (int i = 0; i < 1000; ++i) {
      const IndexedVector y = apply_resolvent(s, lambda, sample_star_sphere(c.half_width, rng));
      worst = std::max(worst, eval_norm(NormSpec::star(), y));
    }
  list.check(worst <= m * (1.0 + 1e-12), "[B:part3]", "max sampled ||R x||_* = " + fmt(worst, 12));

  if (list.all())
    out << "flat at " << fixed(0.5 * (g.lo + g.hi), 3) << " over |λ| ≤ " << fmt(radius) << "\n";
  return list.all() ? kExitOk : kExitClaimFailed;
}

void add_operator_options(CLI::App* app, RunConfig& c) {
  app->add_option("--kind", c.kind, "Operator kind: A or B");
  app->add_option("--delta", c.delta, "Weight parameter of kind A");
  app->add_option("--emm", c.emm, "Weight parameter M of kind B");
  app->add_option("-N,--window", c.half_width, "Half width of the index window")->check(CLI::PositiveNumber);
}

void add_scan_options(CLI::App* app, RunConfig& c) {
  add_operator_options(app, c);
  app->add_option("--norm", c.norm, "star | l2 | l1 | linf | psi-p:<p>");
  app->add_option("--center-re", c.center_re);
  app->add_option("--center-im", c.center_im);
  app->add_option("--radius", c.radius, "Disc radius");
  app->add_option("--resolution", c.resolution)->check(CLI::Range(3, 1001));
  app->add_option("--tolerance", c.tolerance)->check(CLI::PositiveNumber);
  app->add_option("--restarts", c.restarts)->check(CLI::NonNegativeNumber);
  app->add_option("--seed", c.seed);
  app->add_option("--threads", c.threads);
  app->add_option("-o,--output", c.output, "Output path (standard output when omitted)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Resolvent norms and level-set flatness on sequence windows", "flatres"};
  app.require_subcommand(1);

  auto* scan = app.add_subcommand("scan", "Resolvent-norm grid as CSV");
  add_scan_options(scan, c);
  auto* flat = app.add_subcommand("flatness", "Grid scan plus flatness report");
  add_scan_options(flat, c);

  auto* op = app.add_subcommand("opnorm", "Operator norm of one resolvent or a dense matrix");
  add_operator_options(op, c);
  op->add_option("--norm", c.norm);
  op->add_option("--out-norm", c.out_norm, "Output norm (defaults to --norm)");
  op->add_option("--lambda-re", c.lambda_re);
  op->add_option("--lambda-im", c.lambda_im);
  op->add_option("--matrix", c.matrix_path, "CSV `row,col,re,im` with 0-based positions");
  op->add_option("--restarts", c.restarts)->check(CLI::NonNegativeNumber);
  op->add_option("--seed", c.seed);
  op->add_option("-o,--output", c.output, "Witness CSV path");

  auto* dual = app.add_subcommand("dual-psi", "Tabulated dual generator as CSV");
  dual->add_option("--psi", c.psi, "max | one | p:<p> | file:<csv>");
  dual->add_option("--grid", c.psi_grid)->check(CLI::Range(100, 1 << 22));
  dual->add_option("-o,--output", c.output);

  auto* conv = app.add_subcommand("convexity", "Complex strict convexity witness search");
  conv->add_option("--norm", c.norm);
  conv->add_option("--dim", c.dim);
  conv->add_option("--trials", c.trials)->check(CLI::PositiveNumber);
  conv->add_option("--epsilon", c.epsilon, "Also estimate the uniform convexity modulus");
  conv->add_option("--seed", c.seed);

  auto* kr = app.add_subcommand("kallman-rota", "Ratio check on random contraction generators");
  kr->add_option("--size", c.size);
  kr->add_option("--cases", c.cases)->check(CLI::PositiveNumber);
  kr->add_option("--trials", c.samples)->check(CLI::PositiveNumber);
  kr->add_option("--seed", c.seed);

  auto* verify = app.add_subcommand("verify", "Acceptance bundles for the two shift operators");
  verify->require_subcommand(1);
  auto* va = verify->add_subcommand("paperA", "Kind A flatness bundle");
  auto* vb = verify->add_subcommand("paperB", "Kind B flatness bundle");
  for (auto* v : {va, vb}) {
    add_operator_options(v, c);
    v->add_option("--radius", c.radius);
    v->add_option("--resolution", c.resolution)->check(CLI::Range(3, 1001));
    v->add_option("--tolerance", c.tolerance)->check(CLI::PositiveNumber);
    v->add_option("--restarts", c.restarts)->check(CLI::NonNegativeNumber);
    v->add_option("--seed", c.seed);
    v->add_option("--threads", c.threads);
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (scan->parsed()) return cmd_scan(c, out);
    if (flat->parsed()) return cmd_flatness(c, out);
    if (op->parsed()) return cmd_opnorm(c, out);
    if (dual->parsed()) return cmd_dual_psi(c, out);
    if (conv->parsed()) return cmd_convexity(c, out);
    if (kr->parsed()) return cmd_kallman_rota(c, out);
    if (va->parsed()) return cmd_verify_a(c, out);
    if (vb->parsed()) return cmd_verify_b(c, out);
  } catch (const usage_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const precondition_error& e) {
    err << "precondition: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace flatres::cli
