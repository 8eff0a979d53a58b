#pragma once

#include <optional>
#include <string>

namespace kernlab {

/// Shortest round-trip decimal form. Integral values keep a trailing ".0"
/// so every numeric CSV cell reads back as a float.
std::string format_number(double v);

/// Empty string for nullopt.
std::string format_number(const std::optional<double>& v);

}  // namespace kernlab
