#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "kernlab/geometry.hpp"
#include "kernlab/grid.hpp"
#include "kernlab/interp.hpp"
#include "kernlab/kernel.hpp"
#include "kernlab/targets.hpp"

namespace kernlab {

// --- Lebesgue functions -----------------------------------------------------

struct LebesgueResult {
  /// Lambda(x) = sum_i |l_i(x)| at every grid point.
  Eigen::VectorXd function;
  /// max over the grid (a lower bound of the supremum over the box).
  double constant = 0.0;
  /// Grid index attaining the maximum (lowest index on ties).
  std::size_t argmax = 0;
  /// Bound on the rounding error of each Lagrange value entering the sum.
  double rounding_bound = 0.0;
};

LebesgueResult lebesgue(const LagrangeBasis& basis, const EvalGrid& grid);

Eigen::VectorXd lebesgue_function(const Kernel& kernel, const PointSet& nodes,
                                  const EvalGrid& grid, const SolveOptions& options = {});
double lebesgue_constant(const Kernel& kernel, const PointSet& nodes, const EvalGrid& grid,
                         const SolveOptions& options = {});

// --- error norms ------------------------------------------------------------

struct ErrorNorms {
  double sup = 0.0;
  double l2 = 0.0;
};

/// Both norms below from a single evaluation of s on the grid.
ErrorNorms error_norms(const Target& target, const Interpolant& s, const EvalGrid& grid);

/// max over the grid of |f - s|.
double sup_error(const Target& target, const Interpolant& s, const EvalGrid& grid);
/// Composite-trapezoid approximation of ||f - s||_{L2(box)}.
double l2_error(const Target& target, const Interpolant& s, const EvalGrid& grid);

// --- slopes -----------------------------------------------------------------

/// Least-squares slope of log(y) against log(x). nullopt with fewer than two
/// points or any non-positive value.
std::optional<double> loglog_slope(std::span<const double> x, std::span<const double> y);

/// loglog_slope over the last half of the samples (at least two).
std::optional<double> tail_loglog_slope(std::span<const double> x, std::span<const double> y);

// --- native-norm growth -----------------------------------------------------

enum class GrowthClass { bounded_like, diverging_like, inconclusive };
std::string_view to_string(GrowthClass c);

struct NormSample {
  std::size_t n = 0;
  double norm = 0.0;
  bool clamped = false;
  SolveInfo info;
};

struct NormGrowth {
  std::vector<NormSample> samples;
  GrowthClass label = GrowthClass::inconclusive;
  /// Log-log slope of norm against n over the last half of the levels.
  std::optional<double> slope;
  /// (max - min) / max over the last quartile of the levels.
  double variation = 0.0;
  /// Set when a level failed; the sequence stops there.
  std::string failure;
};

/// Advisory three-way label: bounded-like when the last-quartile variation
/// is below 10% and the slope below 0.05, diverging-like when the slope
/// exceeds 0.15, inconclusive otherwise.
void classify_growth(NormGrowth& growth);

NormGrowth norm_growth_sequence(const Target& target, const Kernel& kernel,
                                std::span<const PointSet> levels, const SolveOptions& options = {});

// --- Lagrange decay ---------------------------------------------------------

struct DecayFit {
  /// nu_hat in |l_i(x)| ~ C exp(-nu_hat |x - x_i| / h).
  double rate = 0.0;
  double constant = 0.0;
  double r2 = 0.0;
  /// max over the grid of |l_i(x)| exp(rate |x - x_i| / h).
  double envelope = 0.0;
  std::size_t samples = 0;
};

/// Fits log|l| against |x - x_i| / h over grid points with |l| > 1e-12 and
/// |x - x_i| >= h. Throws FitError with fewer than 8 usable points.
DecayFit fit_decay(const Eigen::VectorXd& lagrange_values, const EvalGrid& grid,
                   PointView center, double h);

/// One-dimensional only: builds l_i and fits its decay. l_i is solved in
/// double-double and summed in binary128 whatever options.precision says.
DecayFit decay_profile(const Kernel& kernel, const PointSet& nodes, std::size_t i,
                       const EvalGrid& grid, double h, const SolveOptions& options = {});

// --- per-level reports ------------------------------------------------------

struct DesignLevel {
  PointSet nodes;
  LevelGeometry geometry;
};

std::vector<DesignLevel> describe_levels(const NestedDesign& measured_design);

struct ReportRow {
  std::size_t n = 0;
  double h = 0.0;
  double q = 0.0;
  double rho = 0.0;
  std::optional<double> lebesgue;
  std::optional<double> native_norm;
  std::optional<double> sup_error;
  std::optional<double> l2_error;
  double jitter = 0.0;
  std::optional<Precision> precision;
  std::string sampling_condition;
  /// "ok", or the failure that stopped this level.
  std::string status = "ok";
};

struct DiagnosticsReport {
  /// Ordered key/value pairs describing kernel, design, grid and target.
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<ReportRow> rows;

  /// Throws ContractError if n is not strictly increasing or some rho < 1 - 1e-6.
  void validate() const;
  std::size_t failed_levels() const;
};

struct ConvergenceTable {
  DiagnosticsReport report;
  std::optional<double> sup_slope;
  std::optional<double> l2_slope;
};

/// Per level: geometry, sampling annotation, Lebesgue constant and, when a
/// target is given, native norm and sup/L2 errors of its interpolant. A level
/// whose solve fails is kept with status set and numeric columns empty.
DiagnosticsReport level_report(const Kernel& kernel, std::span<const DesignLevel> levels,
                               const EvalGrid& grid, const Target* target,
                               const SolveOptions& options = {});

/// level_report with a target plus error slopes against h over the last half
/// of the levels.
ConvergenceTable convergence_table(const Target& target, const Kernel& kernel,
                                   std::span<const DesignLevel> levels, const EvalGrid& grid,
                                   const SolveOptions& options = {});

}  // namespace kernlab
