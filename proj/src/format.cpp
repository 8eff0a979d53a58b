#include "kernlab/format.hpp"

#include <charconv>
#include <cmath>

namespace kernlab {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string format_number(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string();
}

}  // namespace kernlab
