#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "kernlab/config.hpp"
#include "kernlab/diagnostics.hpp"
#include "kernlab/report_io.hpp"

namespace kernlab {

struct BuiltDesign {
  std::vector<DesignLevel> levels;
  std::vector<DesignRow> rows;
};

/// Node sets of every level with their measured geometry.
BuiltDesign build_design(const ExperimentConfig& config);

struct RunResult {
  std::size_t levels = 0;
  std::size_t failed_levels = 0;
  /// Paths written, in order.
  std::vector<std::string> files;
  /// The "## " lines of the report.
  KeyValues summary;

  bool all_failed() const { return levels > 0 && failed_levels == levels; }
};

/// Runs one experiment and writes <output>_report.csv, <output>_design.csv
/// and, depending on the type, <output>_decay.csv, <output>_interpolant.csv
/// and <output>.svg. Per-level numerical failures are recorded in the
/// report's status column rather than thrown.
RunResult run(const ExperimentConfig& config);

}  // namespace kernlab
