#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include <Eigen/Core>

#include "kernlab/point_set.hpp"
#include "kernlab/precision.hpp"

namespace kernlab {

enum class KernelFamily { matern12, matern32, matern52, gaussian, interval_w21 };

/// Config spelling: "matern12", "matern32", "matern52", "gaussian", "w21".
std::string_view to_string(KernelFamily f);
std::optional<KernelFamily> parse_kernel_family(std::string_view name);

/// Strictly positive definite kernel.
///
/// Translation-invariant families evaluate k(x,y) = phi(gamma * ||x - y||)
/// with the half-integer Matérn profiles
///   nu = 1/2:  e^{-r}
///   nu = 3/2:  (1 + r) e^{-r}
///   nu = 5/2:  (3 + 3r + r^2) e^{-r}
/// (normalisation constant fixed to 1, so k(x,x) is 1, 1, 3) and the
/// Gaussian e^{-gamma^2 ||x-y||^2}. The interval family is the reproducing
/// kernel of W^1_2(a,b) with the L2 + H1-seminorm inner product:
///   k(x,y) = cosh(b - max(x,y)) cosh(min(x,y) - a) / sinh(b - a),
/// which ignores gamma and is not translation invariant.
class Kernel {
 public:
  static Kernel matern(KernelFamily family, double gamma, int dim);
  static Kernel gaussian(double gamma, int dim);
  static Kernel interval_sobolev(double a, double b);

  /// Dispatching constructor used by the config layer. `interval` is required
  /// for the W21 family and ignored otherwise.
  static Kernel make(KernelFamily family, double gamma, int dim,
                     std::optional<std::pair<double, double>> interval = std::nullopt);

  KernelFamily family() const { return family_; }
  double gamma() const { return gamma_; }
  int dim() const { return dim_; }
  std::pair<double, double> interval() const { return {a_, b_}; }
  bool translation_invariant() const { return family_ != KernelFamily::interval_w21; }

  /// Matérn smoothness nu; NaN for the other families.
  double smoothness() const;
  /// Sobolev order tau of the native space: nu + N/2 for Matérn, 1 for W21,
  /// +inf for the Gaussian.
  double sobolev_order() const;

  /// sup of |k(x,y)| over the domain.
  double max_value() const;

  /// Checked evaluation (dimension and, for W21, domain).
  double operator()(PointView x, PointView y) const;

  /// Unchecked evaluation in arithmetic T (double or Quad).
  template <class T>
  T eval_as(PointView x, PointView y) const;

  std::string describe() const;

  friend bool operator==(const Kernel&, const Kernel&) = default;

 private:
  Kernel(KernelFamily family, double gamma, int dim, double a, double b)
      : family_(family), gamma_(gamma), dim_(dim), a_(a), b_(b) {}

  void check(PointView x, PointView y) const;

  KernelFamily family_;
  double gamma_;
  int dim_;
  double a_ = 0.0;
  double b_ = 0.0;
};

/// Symmetric Gram matrix K_ij = k(x_i, x_j); upper triangle evaluated,
/// lower triangle mirrored.
struct GramMatrix {
  Eigen::MatrixXd entries;

  std::size_t order() const { return static_cast<std::size_t>(entries.rows()); }
};

/// Throws DuplicateNodeError if two nodes are closer than the point set's
/// distinctness tolerance. PointSet already rejects such input; the pairwise
/// pass here is free and guards Gram assembly on its own.
GramMatrix assemble_gram(const Kernel& kernel, const PointSet& nodes);

template <class T>
DenseMatrix<T> assemble_gram_as(const Kernel& kernel, const PointSet& nodes);

// --- implementation ---------------------------------------------------------

template <class T>
T Kernel::eval_as(PointView x, PointView y) const {
  using std::cosh;
  using std::exp;
  using std::sinh;
  using std::sqrt;
  if (family_ == KernelFamily::interval_w21) {
    const T lo = x[0] < y[0] ? T(x[0]) : T(y[0]);
    const T hi = x[0] < y[0] ? T(y[0]) : T(x[0]);
    return cosh(T(b_) - hi) * cosh(lo - T(a_)) / sinh(T(b_) - T(a_));
  }
  T sq = T(0);
  for (std::size_t k = 0; k < x.size(); ++k) {
    const T d = T(x[k]) - T(y[k]);
    sq += d * d;
  }
  if (family_ == KernelFamily::gaussian) return exp(-T(gamma_) * T(gamma_) * sq);
  const T r = T(gamma_) * sqrt(sq);
  switch (family_) {
    case KernelFamily::matern12:
      return exp(-r);
    case KernelFamily::matern32:
      return (T(1) + r) * exp(-r);
    default:
      return (T(3) + T(3) * r + r * r) * exp(-r);
  }
}

template <class T>
DenseMatrix<T> assemble_gram_as(const Kernel& kernel, const PointSet& nodes) {
  const auto gram = assemble_gram(kernel, nodes);  // validates nodes
  const auto n = static_cast<Eigen::Index>(nodes.size());
  DenseMatrix<T> k(n, n);
  if constexpr (std::is_same_v<T, double>) {
    k = gram.entries;
  } else {
    for (Eigen::Index j = 0; j < n; ++j) {
      k(j, j) = kernel.eval_as<T>(nodes[j], nodes[j]);
      for (Eigen::Index i = 0; i < j; ++i) {
        k(i, j) = kernel.eval_as<T>(nodes[i], nodes[j]);
        k(j, i) = k(i, j);
      }
    }
  }
  return k;
}

}  // namespace kernlab
