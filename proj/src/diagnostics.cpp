#include "kernlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "kernlab/errors.hpp"

namespace kernlab {

LebesgueResult lebesgue(const LagrangeBasis& basis, const EvalGrid& grid) {
  LebesgueResult out;
  out.function.resize(static_cast<Eigen::Index>(grid.size()));
  basis.visit_values(grid.points(), [&](Eigen::Index first, const Eigen::MatrixXd& block) {
    out.function.segment(first, block.cols()) = block.cwiseAbs().colwise().sum().transpose();
  });
  out.constant = -1.0;
  for (Eigen::Index j = 0; j < out.function.size(); ++j) {
    if (out.function(j) > out.constant) {
      out.constant = out.function(j);
      out.argmax = static_cast<std::size_t>(j);
    }
  }
  out.rounding_bound = basis.rounding_bound();
  return out;
}

Eigen::VectorXd lebesgue_function(const Kernel& kernel, const PointSet& nodes,
                                  const EvalGrid& grid, const SolveOptions& options) {
  return lebesgue(LagrangeBasis(kernel, nodes, options), grid).function;
}

double lebesgue_constant(const Kernel& kernel, const PointSet& nodes, const EvalGrid& grid,
                         const SolveOptions& options) {
  return lebesgue(LagrangeBasis(kernel, nodes, options), grid).constant;
}

ErrorNorms error_norms(const Target& target, const Interpolant& s, const EvalGrid& grid) {
  const Eigen::VectorXd diff = target.sample(grid.points()) - s.evaluate(grid.points());
  ErrorNorms out;
  out.sup = diff.size() > 0 ? diff.cwiseAbs().maxCoeff() : 0.0;
  out.l2 = std::sqrt(grid.weights().dot(diff.cwiseAbs2()));
  return out;
}

double sup_error(const Target& target, const Interpolant& s, const EvalGrid& grid) {
  return error_norms(target, s, grid).sup;
}

double l2_error(const Target& target, const Interpolant& s, const EvalGrid& grid) {
  return error_norms(target, s, grid).l2;
}

std::optional<double> loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) return std::nullopt;
  const auto n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) return std::nullopt;
    sx += std::log(x[i]);
    sy += std::log(y[i]);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y[i]) - my);
  }
  if (sxx == 0.0) return std::nullopt;
  return sxy / sxx;
}

std::optional<double> tail_loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) return std::nullopt;
  const std::size_t keep = std::max<std::size_t>(2, (x.size() + 1) / 2);
  const std::size_t first = x.size() - keep;
  return loglog_slope(x.subspan(first), y.subspan(first));
}

std::string_view to_string(GrowthClass c) {
  switch (c) {
    case GrowthClass::bounded_like:
      return "bounded-like";
    case GrowthClass::diverging_like:
      return "diverging-like";
    default:
      return "inconclusive";
  }
}

void classify_growth(NormGrowth& growth) {
  growth.label = GrowthClass::inconclusive;
  growth.slope.reset();
  growth.variation = 0.0;
  const auto& s = growth.samples;
  if (s.size() < 2) return;

  const std::size_t quartile = std::max<std::size_t>(2, (s.size() + 3) / 4);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t i = s.size() - quartile; i < s.size(); ++i) {
    lo = std::min(lo, s[i].norm);
    hi = std::max(hi, s[i].norm);
  }
  growth.variation = hi > 0.0 ? (hi - lo) / hi : 0.0;

  std::vector<double> n, norm;
  for (const auto& x : s) {
    n.push_back(static_cast<double>(x.n));
    norm.push_back(x.norm);
  }
  if (hi == 0.0) {
    // f vanishes on every level: the norm sequence is identically zero.
    growth.slope = 0.0;
  } else {
    growth.slope = tail_loglog_slope(n, norm);
  }
  if (!growth.slope) return;
  if (growth.variation < 0.10 && *growth.slope < 0.05)
    growth.label = GrowthClass::bounded_like;
  else if (*growth.slope > 0.15)
    growth.label = GrowthClass::diverging_like;
}

NormGrowth norm_growth_sequence(const Target& target, const Kernel& kernel,
                                std::span<const PointSet> levels, const SolveOptions& options) {
  NormGrowth out;
  for (const auto& nodes : levels) {
    try {
      const auto s = fit(kernel, nodes, target.sample(nodes.coords()), options);
      const auto norm = native_norm(s);
      out.samples.push_back({nodes.size(), norm.value, norm.clamped, s.info()});
    } catch (const Error& e) {
      std::ostringstream os;
      os << "level n=" << nodes.size() << ": " << e.what();
      out.failure = os.str();
      break;
    }
  }
  classify_growth(out);
  return out;
}

DecayFit fit_decay(const Eigen::VectorXd& lagrange_values, const EvalGrid& grid,
                   PointView center, double h) {
  if (static_cast<std::size_t>(lagrange_values.size()) != grid.size())
    throw ContractError("one Lagrange value per grid point is required");
  if (!(h > 0.0)) throw ContractError("fill distance must be positive");
  std::vector<double> t, y;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double v = std::abs(lagrange_values(static_cast<Eigen::Index>(j)));
    const double s = distance(grid[j], center) / h;
    if (v > 1e-12 && s >= 1.0) {
      t.push_back(s);
      y.push_back(std::log(v));
    }
  }
  if (t.size() < 8) {
    std::ostringstream os;
    os << "decay fit needs at least 8 usable grid points, found " << t.size();
    throw FitError(os.str());
  }
  const auto m = static_cast<double>(t.size());
  double mt = 0.0, my = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    mt += t[i];
    my += y[i];
  }
  mt /= m;
  my /= m;
  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    stt += (t[i] - mt) * (t[i] - mt);
    sty += (t[i] - mt) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (stt == 0.0) throw FitError("decay fit samples share a single distance");
  const double slope = sty / stt;
  const double intercept = my - slope * mt;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double r = y[i] - (intercept + slope * t[i]);
    ss_res += r * r;
  }

  DecayFit fit;
  fit.rate = -slope;
  fit.constant = std::exp(intercept);
  fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  fit.samples = t.size();
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double s = distance(grid[j], center) / h;
    fit.envelope = std::max(
        fit.envelope,
        std::abs(lagrange_values(static_cast<Eigen::Index>(j))) * std::exp(fit.rate * s));
  }
  return fit;
}

DecayFit decay_profile(const Kernel& kernel, const PointSet& nodes, std::size_t i,
                       const EvalGrid& grid, double h, const SolveOptions& options) {
  if (nodes.dim() != 1 || grid.dim() != 1)
    throw ContractError("decay profiles are one-dimensional");
  // Tails reach 1e-12; binary64 solves and sums bottom out near 1e-9.
  SolveOptions wide = options;
  wide.precision = PrecisionPolicy::double_double;
  const auto l = lagrange(kernel, nodes, i, wide);
  return fit_decay(l.evaluate_wide(grid.points()), grid, nodes[i], h);
}

std::vector<DesignLevel> describe_levels(const NestedDesign& design) {
  if (design.geometry.size() != design.level_count())
    throw ContractError("design levels have not been measured");
  std::vector<DesignLevel> out;
  for (std::size_t i = 0; i < design.level_count(); ++i)
    out.push_back({design.level(i), design.geometry[i]});
  return out;
}

void DiagnosticsReport::validate() const {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && rows[i].n <= rows[i - 1].n)
      throw ContractError("report levels must have strictly increasing n");
    if (rows[i].rho < 1.0 - 1e-6) throw ContractError("mesh ratio below 1 in report");
  }
}

std::size_t DiagnosticsReport::failed_levels() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const ReportRow& r) { return r.status != "ok"; }));
}

namespace {

std::string sampling_annotation(const Kernel& kernel, const PointSet& nodes, double h) {
  const double tau = kernel.sobolev_order();
  if (nodes.dim() != 1 || !std::isfinite(tau)) return "n/a";
  return std::string(
      to_string(sampling_condition(h, tau, nodes.domain().lower(0), nodes.domain().upper(0))));
}

}  // namespace

DiagnosticsReport level_report(const Kernel& kernel, std::span<const DesignLevel> levels,
                               const EvalGrid& grid, const Target* target,
                               const SolveOptions& options) {
  DiagnosticsReport report;
  report.metadata.emplace_back("kernel", kernel.describe());
  report.metadata.emplace_back("grid_points", std::to_string(grid.size()));
  if (target) report.metadata.emplace_back("target", target->name());
  for (const auto& level : levels) {
    ReportRow row;
    row.n = level.nodes.size();
    row.h = level.geometry.fill;
    row.q = level.geometry.separation;
    row.rho = level.geometry.mesh_ratio;
    row.sampling_condition = sampling_annotation(kernel, level.nodes, row.h);
    try {
      const LagrangeBasis basis(kernel, level.nodes, options);
      row.jitter = basis.info().jitter;
      row.precision = basis.info().precision;
      row.lebesgue = lebesgue(basis, grid).constant;
      if (target) {
        const Eigen::VectorXd data = target->sample(level.nodes.coords());
        auto s = basis.interpolant(data);
        if (s.info().relative_residual > options.residual_tolerance)
          s = fit(kernel, level.nodes, data, options);
        row.native_norm = native_norm(s).value;
        const auto err = error_norms(*target, s, grid);
        row.sup_error = err.sup;
        row.l2_error = err.l2;
      }
    } catch (const Error& e) {
      row.status = e.what();
      row.lebesgue.reset();
      row.native_norm.reset();
      row.sup_error.reset();
      row.l2_error.reset();
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

ConvergenceTable convergence_table(const Target& target, const Kernel& kernel,
                                   std::span<const DesignLevel> levels, const EvalGrid& grid,
                                   const SolveOptions& options) {
  ConvergenceTable out;
  out.report = level_report(kernel, levels, grid, &target, options);
  std::vector<double> h, sup, l2;
  for (const auto& r : out.report.rows) {
    if (r.status != "ok") continue;
    h.push_back(r.h);
    sup.push_back(*r.sup_error);
    l2.push_back(*r.l2_error);
  }
  out.sup_slope = tail_loglog_slope(h, sup);
  out.l2_slope = tail_loglog_slope(h, l2);
  return out;
}

}  // namespace kernlab
