#pragma once

#include <string>
#include <utility>
#include <vector>

namespace kernlab {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

struct AxesSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
};

/// Standalone SVG line chart with markers and a legend. Byte-identical output
/// for identical input. Throws ContractError when there is no point to draw,
/// and DomainError naming the series and point index when a value is not
/// finite or is non-positive on a log axis.
std::string emit_svg(const std::vector<Series>& series, const AxesSpec& axes);

/// emit_svg written to `path`.
void write_svg(const std::string& path, const std::vector<Series>& series, const AxesSpec& axes);

}  // namespace kernlab
