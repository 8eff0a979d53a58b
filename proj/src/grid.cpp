#include "kernlab/grid.hpp"

#include <vector>

#include "kernlab/errors.hpp"

namespace kernlab {

EvalGrid::EvalGrid(Box box, std::size_t per_axis) : box_(std::move(box)), per_axis_(per_axis) {
  if (per_axis < 2) throw ContractError("evaluation grid needs at least 2 points per axis");
  const int dim = box_.dim();
  std::size_t total = 1;
  for (int k = 0; k < dim; ++k) total *= per_axis;

  std::vector<std::vector<double>> coords(dim), w(dim);
  for (int k = 0; k < dim; ++k) {
    const double h = spacing(k);
    coords[k].resize(per_axis);
    w[k].assign(per_axis, h);
    for (std::size_t i = 0; i < per_axis; ++i)
      coords[k][i] = i + 1 == per_axis ? box_.upper(k) : box_.lower(k) + h * static_cast<double>(i);
    w[k].front() = w[k].back() = 0.5 * h;
  }

  points_.resize(static_cast<Eigen::Index>(total), dim);
  weights_.resize(static_cast<Eigen::Index>(total));
  std::vector<std::size_t> idx(dim, 0);
  for (std::size_t p = 0; p < total; ++p) {
    double weight = 1.0;
    for (int k = 0; k < dim; ++k) {
      points_(static_cast<Eigen::Index>(p), k) = coords[k][idx[k]];
      weight *= w[k][idx[k]];
    }
    weights_(static_cast<Eigen::Index>(p)) = weight;
    for (int k = dim - 1; k >= 0; --k) {
      if (++idx[k] < per_axis) break;
      idx[k] = 0;
    }
  }
}

double EvalGrid::spacing(int axis) const {
  return (box_.upper(axis) - box_.lower(axis)) / static_cast<double>(per_axis_ - 1);
}

}  // namespace kernlab
