#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "kernlab/kernel.hpp"
#include "kernlab/point_set.hpp"

namespace kernlab {

/// A named target function f sampled by the experiments.
class Target {
 public:
  using Function = std::function<double(PointView)>;

  Target(std::string name, Function fn, std::optional<double> native_norm = std::nullopt);

  static Target zero();
  static Target constant(double c);
  /// ||x - c||^p.
  static Target abs_power(std::vector<double> center, double power);
  /// sum_j w_j k(c_j, x); its native-space norm sqrt(w^T K_C w) is known.
  static Target kernel_combination(const Kernel& kernel, const PointSet& centers,
                                   const Eigen::VectorXd& weights);
  /// prod_k sin(2 pi frequency x_k + phase).
  static Target sine(double frequency, double phase);
  /// (1 + tanh((x_1 - center) / width)) / 2.
  static Target smooth_step(double center, double width);

  const std::string& name() const { return name_; }
  double operator()(PointView x) const { return fn_(x); }
  Eigen::VectorXd sample(const PointMatrix& points) const;
  /// Exact ||f||_{H_k} when the target is built from kernel translates.
  const std::optional<double>& native_norm() const { return native_norm_; }

 private:
  std::string name_;
  Function fn_;
  std::optional<double> native_norm_;
};

}  // namespace kernlab
