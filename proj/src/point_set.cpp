#include "kernlab/point_set.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "kernlab/errors.hpp"

namespace kernlab {

double squared_distance(PointView a, PointView b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

double distance(PointView a, PointView b) { return std::sqrt(squared_distance(a, b)); }

Box::Box(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.empty() || lower_.size() != upper_.size())
    throw ContractError("box bounds must be non-empty and of equal dimension");
  for (std::size_t k = 0; k < lower_.size(); ++k) {
    if (!std::isfinite(lower_[k]) || !std::isfinite(upper_[k]) || !(lower_[k] < upper_[k]))
      throw ContractError("box requires finite lower < upper on every axis");
  }
}

Box Box::interval(double a, double b) { return Box({a}, {b}); }

Box Box::unit(int dim) {
  if (dim < 1) throw ContractError("box dimension must be positive");
  return Box(std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0));
}

double Box::diameter() const {
  double s = 0.0;
  for (int k = 0; k < dim(); ++k) s += (upper_[k] - lower_[k]) * (upper_[k] - lower_[k]);
  return std::sqrt(s);
}

double Box::volume() const {
  double v = 1.0;
  for (int k = 0; k < dim(); ++k) v *= upper_[k] - lower_[k];
  return v;
}

std::vector<double> Box::center() const {
  std::vector<double> c(lower_.size());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = 0.5 * (lower_[k] + upper_[k]);
  return c;
}

bool Box::contains(PointView p) const {
  if (static_cast<int>(p.size()) != dim()) return false;
  for (int k = 0; k < dim(); ++k) {
    if (!(p[k] >= lower_[k] && p[k] <= upper_[k])) return false;
  }
  return true;
}

PointSet::PointSet(Box domain, PointMatrix points, Unchecked)
    : domain_(std::move(domain)), points_(std::move(points)) {}

PointSet::PointSet(Box domain, PointMatrix points)
    : domain_(std::move(domain)), points_(std::move(points)) {
  if (points_.cols() != domain_.dim())
    throw ContractError("point dimension does not match the domain dimension");
  const auto n = size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!domain_.contains((*this)[i])) {
      std::ostringstream os;
      os << "point " << i << " lies outside the domain box";
      throw ContractError(os.str());
    }
  }
  // Sweep in order of the first coordinate; only pairs closer than the
  // tolerance along that axis can be duplicates.
  const double tol = distinctness_tolerance();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return points_(a, 0) < points_(b, 0); });
  for (std::size_t s = 0; s < n; ++s) {
    const auto i = order[s];
    for (std::size_t t = s + 1; t < n; ++t) {
      const auto j = order[t];
      if (points_(j, 0) - points_(i, 0) >= tol) break;
      const double d = distance((*this)[i], (*this)[j]);
      if (d < tol) throw DuplicateNodeError(std::min(i, j), std::max(i, j), d);
    }
  }
}

PointSet PointSet::on_interval(double a, double b, const std::vector<double>& xs) {
  PointMatrix m(static_cast<Eigen::Index>(xs.size()), 1);
  for (std::size_t i = 0; i < xs.size(); ++i) m(static_cast<Eigen::Index>(i), 0) = xs[i];
  return PointSet(Box::interval(a, b), std::move(m));
}

PointSet PointSet::prefix(std::size_t n) const {
  if (n > size()) throw ContractError("prefix longer than the point set");
  return PointSet(domain_, points_.topRows(static_cast<Eigen::Index>(n)), Unchecked{});
}

PointSet PointSet::subset(const std::vector<std::size_t>& indices) const {
  PointMatrix m(static_cast<Eigen::Index>(indices.size()), points_.cols());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    if (indices[r] >= size()) throw ContractError("subset index out of range");
    m.row(static_cast<Eigen::Index>(r)) = points_.row(static_cast<Eigen::Index>(indices[r]));
  }
  // Repeated indices would create duplicates, so this path re-validates.
  return PointSet(domain_, std::move(m));
}

double PointSet::distinctness_tolerance() const { return 1e-12 * domain_.diameter(); }

}  // namespace kernlab
