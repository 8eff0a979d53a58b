#include "kernlab/errors.hpp"

#include <sstream>

namespace kernlab {

DuplicateNodeError::DuplicateNodeError(std::size_t first, std::size_t second, double distance)
    : Error([&] {
        std::ostringstream os;
        os << "duplicate nodes " << first << " and " << second << " (distance " << distance
           << ")";
        return os.str();
      }()),
      first_(first),
      second_(second) {}

FactorizationError::FactorizationError(std::size_t pivot, double pivot_value, double last_jitter)
    : Error([&] {
        std::ostringstream os;
        os << "matrix not positive definite after jitter " << last_jitter << ": pivot " << pivot
           << " = " << pivot_value;
        return os.str();
      }()),
      pivot_(pivot),
      pivot_value_(pivot_value),
      last_jitter_(last_jitter) {}

ConfigError::ConfigError(int line, std::string field, const std::string& message)
    : Error([&] {
        std::ostringstream os;
        if (line > 0) os << "line " << line << ": ";
        if (!field.empty()) os << field << ": ";
        os << message;
        return os.str();
      }()),
      line_(line),
      field_(std::move(field)) {}

}  // namespace kernlab
