#pragma once

#include <cstddef>

#include <Eigen/Core>

#include "kernlab/point_set.hpp"

namespace kernlab {

/// Tensor grid over a box with `per_axis` equispaced points per axis
/// (endpoints included), ordered lexicographically with the first coordinate
/// varying slowest. Weights are the tensorised composite trapezoid rule, so
/// they sum to the box volume.
class EvalGrid {
 public:
  EvalGrid(Box box, std::size_t per_axis);

  const Box& box() const { return box_; }
  std::size_t per_axis() const { return per_axis_; }
  std::size_t size() const { return static_cast<std::size_t>(points_.rows()); }
  int dim() const { return box_.dim(); }
  double spacing(int axis) const;

  const PointMatrix& points() const { return points_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  PointView operator[](std::size_t i) const {
    return row_view(points_, static_cast<Eigen::Index>(i));
  }

 private:
  Box box_;
  std::size_t per_axis_;
  PointMatrix points_;
  Eigen::VectorXd weights_;
};

}  // namespace kernlab
