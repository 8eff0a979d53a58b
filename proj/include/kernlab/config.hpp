#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kernlab/geometry.hpp"
#include "kernlab/kernel.hpp"
#include "kernlab/point_set.hpp"
#include "kernlab/precision.hpp"
#include "kernlab/targets.hpp"

namespace kernlab {

enum class ExperimentType { lebesgue_trace, convergence, norm_growth, decay, interp_once };
std::string_view to_string(ExperimentType t);

/// greedy: farthest-point selection from a candidate pool (nested).
/// dyadic: interval points 1/2, 1/4, 3/4, 1/8, ... (nested, 2^k - 1 per full level).
/// equispaced: a + (b - a) i / (n + 1) per level, not nested.
enum class DesignScheme { greedy, dyadic, equispaced };
std::string_view to_string(DesignScheme s);

struct KernelSpec {
  KernelFamily family = KernelFamily::matern32;
  double gamma = 1.0;
};

struct DesignSpec {
  DesignScheme scheme = DesignScheme::greedy;
  CandidateScheme candidates = CandidateScheme::low_discrepancy;
  std::size_t candidate_count = 10000;
  std::uint64_t seed = 0;
  /// "center" (candidate nearest the box center) or a candidate index.
  std::string start = "center";
  std::vector<std::size_t> levels;
};

struct GridSpec {
  /// Evaluation grid; defaults to 4097 in 1D and 513 per axis otherwise.
  std::size_t points_per_axis = 0;
  /// Grid used for fill distances in dimension > 1; defaults to 1001 per
  /// axis there (unused in 1D, where the exact interval formula applies).
  std::size_t probe_points_per_axis = 0;
};

/// Named built-in target. Which parameters are read depends on the name:
///   zero
///   constant            value
///   abs_power           center, power
///   kernel_translate    center
///   kernel_combination  centers (flattened rows), weights
///   sine                frequency, phase
///   smooth_step         center (first coordinate), width
struct TargetSpec {
  std::string name = "zero";
  double value = 0.0;
  std::vector<double> center;
  double power = 1.0;
  std::vector<double> centers;
  std::vector<double> weights;
  double frequency = 1.0;
  double phase = 0.0;
  double width = 0.1;
};

struct DecaySpec {
  /// "center" (node nearest the domain center) or a node index.
  std::string node = "center";
};

struct ExperimentConfig {
  ExperimentType type = ExperimentType::lebesgue_trace;
  /// Path prefix of every emitted file.
  std::string output;
  bool svg = false;
  PrecisionPolicy precision = PrecisionPolicy::automatic;
  KernelSpec kernel;
  Box domain = Box::interval(0.0, 1.0);
  DesignSpec design;
  GridSpec grid;
  TargetSpec target;
  DecaySpec decay;

  Kernel make_kernel() const;
  Target make_target() const;

  /// Canonical text form; parse_config(to_text()) reproduces the config.
  std::string to_text() const;
};

/// Parses the sectioned key = value format. Lines starting with '#' or ';'
/// are comments. Throws ConfigError naming the line and "section.key".
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

/// Rebuilds the config from the "# " metadata lines of an emitted CSV.
ExperimentConfig config_from_metadata(std::string_view csv_text);

}  // namespace kernlab
