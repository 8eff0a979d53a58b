#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "kernlab/grid.hpp"
#include "kernlab/point_set.hpp"

namespace kernlab {

/// q_X = (1/2) min_{i != j} ||x_i - x_j||. Needs at least two points.
double separation_distance(const PointSet& x);

/// Exact fill distance of a one-dimensional set on [a, b]:
///   max{ x_1 - a, max_i (x_{i+1} - x_i) / 2, b - x_n }  (x sorted).
/// Unsorted input is sorted internally.
double fill_distance_interval(const PointSet& x, double a, double b);
double fill_distance_interval(const PointSet& x);  // on x.domain()

/// max over probe points of the distance to the nearest node. This
/// underestimates the true fill distance by at most half the probe-cell
/// diagonal (spacing * sqrt(N) / 2).
double fill_distance_grid(const PointSet& x, const EvalGrid& probe);

/// h / q_X.
double mesh_ratio(const PointSet& x, double fill_distance);

/// Which of the two interval sampling thresholds h <= (b-a)/(100 tau^2)
/// ("weak") and h <= (b-a)/(1200 tau^2) ("strong") hold. Strong implies weak.
enum class SamplingCondition { none, weak, strong };
SamplingCondition sampling_condition(double h, double tau, double a, double b);
std::string_view to_string(SamplingCondition c);

enum class CandidateScheme { uniform_random, low_discrepancy, tensor_grid };
std::string_view to_string(CandidateScheme s);
std::optional<CandidateScheme> parse_candidate_scheme(std::string_view name);

/// Deterministic candidate pools strictly inside `box`.
///  - uniform_random: 64-bit Mersenne twister seeded with `seed`;
///  - low_discrepancy: Sobol points, skipping the origin;
///  - tensor_grid: count must be m^N; coordinates lo + (i+1)(hi-lo)/(m+1).
PointSet generate_candidates(const Box& box, std::size_t count, CandidateScheme scheme,
                             std::uint64_t seed = 0);

/// Interior equispaced nodes a + i (b-a)/(n+1), i = 1..n.
PointSet equispaced_interval(double a, double b, std::size_t n);

/// Index of the point closest to `target` (lowest index on ties).
std::size_t nearest_index(const PointSet& x, PointView target);

/// Geometry of one design level.
/// separation and mesh_ratio are NaN for a single node, where q is undefined.
struct LevelGeometry {
  double fill = 0.0;
  double separation = 0.0;
  double mesh_ratio = 0.0;
};

/// Prefix-nested design: level i is master.prefix(levels[i]).
struct NestedDesign {
  PointSet master;
  std::vector<std::size_t> levels;
  /// Filled by measure_levels(); empty until then.
  std::vector<LevelGeometry> geometry;

  std::size_t level_count() const { return levels.size(); }
  PointSet level(std::size_t i) const { return master.prefix(levels.at(i)); }
};

/// Farthest-point selection: start from candidates[seed_index], then
/// repeatedly add the candidate with the largest distance to the selected
/// set (lowest candidate index on ties). The master list has m points;
/// `level_counts` (strictly increasing, each <= m) marks the recorded levels
/// and defaults to {m}.
NestedDesign geometric_greedy(const PointSet& candidates, std::size_t m, std::size_t seed_index,
                              std::vector<std::size_t> level_counts = {});

/// Nested equispaced refinement of [a, b]: the master order lists the
/// midpoint, then the quarter points, then the eighth points, and so on.
/// A prefix of length 2^k - 1 is exactly {a + i (b-a)/2^k}.
NestedDesign dyadic_design(double a, double b, std::vector<std::size_t> level_counts);

/// Computes fill distance, separation distance and mesh ratio for every
/// level. One-dimensional designs use the exact interval formula; higher
/// dimensions need a probe grid.
void measure_levels(NestedDesign& design, const EvalGrid* probe = nullptr);

/// Same for a single point set.
LevelGeometry measure(const PointSet& x, const EvalGrid* probe = nullptr);

}  // namespace kernlab
