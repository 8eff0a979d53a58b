#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace kernlab {

/// One point per row.
using PointMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using PointView = std::span<const double>;

double distance(PointView a, PointView b);
double squared_distance(PointView a, PointView b);

inline PointView row_view(const PointMatrix& m, Eigen::Index i) {
  return {m.data() + i * m.cols(), static_cast<std::size_t>(m.cols())};
}

/// Axis-aligned box [lo_1,hi_1] x ... x [lo_N,hi_N].
class Box {
 public:
  Box(std::vector<double> lower, std::vector<double> upper);

  static Box interval(double a, double b);
  static Box unit(int dim);

  int dim() const { return static_cast<int>(lower_.size()); }
  double lower(int axis) const { return lower_[axis]; }
  double upper(int axis) const { return upper_[axis]; }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }

  double diameter() const;
  double volume() const;
  std::vector<double> center() const;

  /// Closed-box membership.
  bool contains(PointView p) const;

  friend bool operator==(const Box&, const Box&) = default;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

/// Ordered, pairwise-distinct points inside a box.
///
/// Construction validates both invariants. Two points are duplicates when
/// their distance is below 1e-12 times the box diameter.
class PointSet {
 public:
  PointSet(Box domain, PointMatrix points);

  /// Convenience for one-dimensional sets.
  static PointSet on_interval(double a, double b, const std::vector<double>& xs);

  std::size_t size() const { return static_cast<std::size_t>(points_.rows()); }
  bool empty() const { return points_.rows() == 0; }
  int dim() const { return domain_.dim(); }
  const Box& domain() const { return domain_; }
  const PointMatrix& coords() const { return points_; }

  PointView operator[](std::size_t i) const {
    return row_view(points_, static_cast<Eigen::Index>(i));
  }

  /// First n points. Prefixes of a valid set are valid, so no re-check.
  PointSet prefix(std::size_t n) const;

  /// Points selected by index, in the given order.
  PointSet subset(const std::vector<std::size_t>& indices) const;

  double distinctness_tolerance() const;

 private:
  struct Unchecked {};
  PointSet(Box domain, PointMatrix points, Unchecked);

  Box domain_;
  PointMatrix points_;
};

}  // namespace kernlab
