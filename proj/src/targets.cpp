#include "kernlab/targets.hpp"

#include <cmath>
#include <numbers>

#include "kernlab/errors.hpp"

namespace kernlab {

Target::Target(std::string name, Function fn, std::optional<double> native_norm)
    : name_(std::move(name)), fn_(std::move(fn)), native_norm_(native_norm) {}

Target Target::zero() {
  return Target("zero", [](PointView) { return 0.0; }, 0.0);
}

Target Target::constant(double c) {
  return Target("constant", [c](PointView) { return c; });
}

Target Target::abs_power(std::vector<double> center, double power) {
  if (!(power > 0.0)) throw ContractError("abs_power needs a positive exponent");
  return Target("abs_power", [center = std::move(center), power](PointView x) {
    if (x.size() != center.size()) throw ContractError("abs_power center has the wrong dimension");
    return std::pow(distance(x, center), power);
  });
}

Target Target::kernel_combination(const Kernel& kernel, const PointSet& centers,
                                  const Eigen::VectorXd& weights) {
  if (static_cast<std::size_t>(weights.size()) != centers.size())
    throw ContractError("one weight per kernel translate is required");
  const auto gram = assemble_gram(kernel, centers);
  const double sq = weights.dot(gram.entries * weights);
  return Target(
      "kernel_translates",
      [kernel, centers, weights](PointView x) {
        double s = 0.0;
        for (std::size_t j = 0; j < centers.size(); ++j)
          s += weights(static_cast<Eigen::Index>(j)) * kernel(centers[j], x);
        return s;
      },
      std::sqrt(std::max(sq, 0.0)));
}

Target Target::sine(double frequency, double phase) {
  return Target("sine", [frequency, phase](PointView x) {
    double v = 1.0;
    for (double xk : x) v *= std::sin(2.0 * std::numbers::pi * frequency * xk + phase);
    return v;
  });
}

Target Target::smooth_step(double center, double width) {
  if (!(width > 0.0)) throw ContractError("smooth_step needs a positive width");
  return Target("smooth_step", [center, width](PointView x) {
    return 0.5 * (1.0 + std::tanh((x[0] - center) / width));
  });
}

Eigen::VectorXd Target::sample(const PointMatrix& points) const {
  Eigen::VectorXd v(points.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i) v(i) = fn_(row_view(points, i));
  return v;
}

}  // namespace kernlab
