#include "flatres/pseudospectra.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace flatres {

Region Region::disc(cplx center, double radius) {
  if (!(radius >= 0.0)) throw std::invalid_argument("disc radius must be non-negative");
  Region r;
  r.shape = RegionShape::Disc;
  r.center = center;
  r.radius = radius;
  return r;
}

Region Region::rectangle(cplx lower_left, cplx upper_right) {
  if (upper_right.real() < lower_left.real() || upper_right.imag() < lower_left.imag())
    throw std::invalid_argument("rectangle corners out of order");
  Region r;
  r.shape = RegionShape::Rectangle;
  r.lower_left = lower_left;
  r.upper_right = upper_right;
  return r;
}

bool Region::contains(cplx lambda, double slack) const {
  if (shape == RegionShape::Disc) return std::abs(lambda - center) <= radius + slack;
  return lambda.real() >= lower_left.real() - slack && lambda.real() <= upper_right.real() + slack &&
         lambda.imag() >= lower_left.imag() - slack && lambda.imag() <= upper_right.imag() + slack;
}

std::vector<cplx> grid_points(const Region& region, int resolution) {
  if (resolution < 1) throw std::invalid_argument("grid resolution must be >= 1");
  std::vector<cplx> pts;
  if (region.shape == RegionShape::Disc) {
    const int rings = (resolution - 1) / 2;
    pts.push_back(region.center);
    for (int j = 1; j <= rings; ++j) {
      const double rho = region.radius * j / rings;
      const int count = 8 * j;
      for (int i = 0; i < count; ++i) {
        const double angle = 2.0 * std::numbers::pi * i / count;
        pts.push_back(region.center + std::polar(rho, angle));
      }
    }
    return pts;
  }
  const double w = region.upper_right.real() - region.lower_left.real();
  const double h = region.upper_right.imag() - region.lower_left.imag();
  for (int iy = 0; iy < resolution; ++iy)
    for (int ix = 0; ix < resolution; ++ix) {
      const double fx = resolution == 1 ? 0.0 : static_cast<double>(ix) / (resolution - 1);
      const double fy = resolution == 1 ? 0.0 : static_cast<double>(iy) / (resolution - 1);
      pts.push_back(region.lower_left + cplx(fx * w, fy * h));
    }
  return pts;
}

namespace {

NormEstimate estimate(const Eigen::MatrixXcd& r, const NormSpec& norm, const OpnormConfig& cfg) {
  if (norm.is_l2()) return opnorm_l2(r, cfg.seed);
  return opnorm_general(r, norm, norm, cfg);
}

}  // namespace

PseudoGrid scan_grid(const OperatorSource& op, const NormSpec& norm, const Region& region,
                     int resolution, const ScanConfig& config) {
  PseudoGrid grid;
  grid.region = region;
  grid.resolution = resolution;
  grid.norm_name = norm.name();
  const std::vector<cplx> lambdas = grid_points(region, resolution);

  int half_width = 0;
  if (const auto* spec = std::get_if<ShiftSpec>(&op)) {
    grid.operator_label = spec->label();
    std::ostringstream bad;
    double max_abs = 0.0;
    for (cplx l : lambdas) {
      max_abs = std::max(max_abs, std::abs(l));
      if (!spec->in_validated_disc(l)) bad << ' ' << l;
    }
    if (!bad.str().empty())
      throw precondition_error("grid leaves the validated disc of " + spec->label() + ":" +
                               bad.str());
    half_width = config.half_width.value_or(default_window(*spec, max_abs));
  } else {
    const auto& m = std::get<Eigen::MatrixXcd>(op);
    if (m.rows() != m.cols()) throw std::invalid_argument("scan_grid: matrix must be square");
    grid.operator_label = "dense " + std::to_string(m.rows()) + "x" + std::to_string(m.cols());
  }

  grid.points.resize(lambdas.size());
  std::vector<std::exception_ptr> errors(lambdas.size());

  auto work = [&](std::size_t i) {
    try {
      OpnormConfig cfg = config.opnorm;
      cfg.seed = mix_seed(config.opnorm.seed, i);
      GridPoint& pt = grid.points[i];
      pt.lambda = lambdas[i];
      Eigen::MatrixXcd r;
      if (const auto* spec = std::get_if<ShiftSpec>(&op)) {
        ResolventMatrix rm = resolvent_matrix(*spec, lambdas[i], half_width);
        r = std::move(rm.entries);
        pt.trunc_bound = rm.truncation_tail;
      } else {
        const auto& m = std::get<Eigen::MatrixXcd>(op);
        Eigen::MatrixXcd shifted = m - lambdas[i] * Eigen::MatrixXcd::Identity(m.rows(), m.cols());
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(shifted);
        if (!lu.isInvertible()) {
          std::ostringstream os;
          os << "T - lambda I is singular at lambda = " << lambdas[i];
          throw precondition_error(os.str());
        }
        r = lu.inverse();
      }
      const NormEstimate e = estimate(r, norm, cfg);
      pt.norm = e.value;
      pt.converged = e.converged;
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  unsigned threads = config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                         : config.threads;
  threads = std::min<unsigned>(threads, static_cast<unsigned>(lambdas.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < lambdas.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < lambdas.size(); i = next++) work(i);
      });
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return grid;
}

FlatnessReport flatness_report(const PseudoGrid& grid, double tolerance) {
  if (grid.points.empty()) throw std::invalid_argument("flatness_report: empty grid");
  FlatnessReport rep;
  rep.tolerance = tolerance;
  rep.max_value = grid.points.front().norm;
  rep.min_value = grid.points.front().norm;
  rep.argmax = rep.argmin = grid.points.front().lambda;
  for (const auto& p : grid.points) {
    if (p.norm > rep.max_value) {
      rep.max_value = p.norm;
      rep.argmax = p.lambda;
    }
    if (p.norm < rep.min_value) {
      rep.min_value = p.norm;
      rep.argmin = p.lambda;
    }
  }
  rep.relative_variation =
      rep.max_value > 0.0 ? (rep.max_value - rep.min_value) / rep.max_value : 0.0;
  rep.is_flat = rep.relative_variation <= tolerance;
  return rep;
}

std::string to_string(LevelTag t) {
  switch (t) {
    case LevelTag::StrictPseudospectrum: return "strict-pseudospectrum";
    case LevelTag::BoundaryLevelSet: return "boundary-level-set";
    case LevelTag::Exterior: return "exterior";
  }
  return "?";
}

std::vector<LevelTag> classify_levelset(const PseudoGrid& grid, double epsilon,
                                        double estimate_tolerance) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("classify_levelset requires epsilon > 0");
  const double level = 1.0 / epsilon;
  std::vector<LevelTag> tags;
  tags.reserve(grid.points.size());
  for (const auto& p : grid.points) {
    const double band = estimate_tolerance + p.trunc_bound;
    const double diff = p.norm - level;
    if (diff > band)
      tags.push_back(LevelTag::StrictPseudospectrum);
    else if (diff < -band)
      tags.push_back(LevelTag::Exterior);
    else
      tags.push_back(LevelTag::BoundaryLevelSet);
  }
  return tags;
}

void write_grid_csv(std::ostream& os, const PseudoGrid& grid) {
  os << "re,im,norm,trunc_bound\n" << std::setprecision(17);
  for (const auto& p : grid.points)
    os << p.lambda.real() << ',' << p.lambda.imag() << ',' << p.norm << ',' << p.trunc_bound
       << '\n';
}

}  // namespace flatres
