#pragma once

#include <cstddef>
#include <functional>
#include <string>

#include <Eigen/Core>

#include "kernlab/kernel.hpp"
#include "kernlab/point_set.hpp"
#include "kernlab/precision.hpp"

namespace kernlab {

/// Diagonal shifts tried by factorize(), as multiples of max diag(K).
inline constexpr double kJitterLadder[] = {0.0, 1e-14, 1e-12, 1e-10, 1e-8};

/// Cholesky factor L with L L^T = K + jitter I, in arithmetic T (double or
/// DoubleDouble).
template <class T>
class Factorization {
 public:
  Factorization(DenseMatrix<T> lower, double jitter)
      : lower_(std::move(lower)), jitter_(jitter) {}

  const DenseMatrix<T>& lower() const { return lower_; }
  /// Absolute diagonal shift that was applied (0 unless the ladder was used).
  double jitter() const { return jitter_; }
  std::size_t order() const { return static_cast<std::size_t>(lower_.rows()); }

  DenseMatrix<T> solve(const DenseMatrix<T>& rhs) const;
  DenseVector<T> solve(const DenseVector<T>& rhs) const;
  /// (K + jitter I)^{-1} through the explicit triangular inverse.
  DenseMatrix<T> inverse() const;

 private:
  DenseMatrix<T> lower_;
  double jitter_;
};

/// Attempts plain Cholesky, then climbs kJitterLadder. Throws
/// FactorizationError naming the last failing pivot when every rung fails.
template <class T>
Factorization<T> factorize(const DenseMatrix<T>& k);
Factorization<double> factorize(const GramMatrix& k);

struct SolveOptions {
  PrecisionPolicy precision = PrecisionPolicy::automatic;
  /// Bound on ||K a - r||_inf / ||r||_inf accepted after a solve.
  double residual_tolerance = 1e-8;
  /// Largest system the automatic policy moves to double-double.
  std::size_t max_extended_order = 2048;
};

/// What a solve actually did.
struct SolveInfo {
  Precision precision = Precision::binary64;
  double jitter = 0.0;
  double relative_residual = 0.0;
  /// Set when a binary64 attempt was rejected and double-double took over.
  bool escalated = false;
  std::string note;
};

/// s(x) = sum_i a_i k(x_i, x) with K a = r. Immutable once built.
///
/// When the coefficients were computed in double-double they are kept as
/// binary128 (wide_coefficients(); coefficients() is their binary64
/// rounding). Evaluation then runs in binary128 unless the a-priori bound on
/// the binary64 evaluation error, evaluation_bound(), is at most
/// kEvaluationTolerance * max(1, ||r||_inf).
class Interpolant {
 public:
  Interpolant(Kernel kernel, PointSet nodes, Eigen::VectorXd data, Eigen::VectorXd coefficients,
              SolveInfo info, DenseVector<Quad> wide_coefficients = {});

  const Kernel& kernel() const { return kernel_; }
  const PointSet& nodes() const { return nodes_; }
  const Eigen::VectorXd& data() const { return data_; }
  const Eigen::VectorXd& coefficients() const { return coefficients_; }
  const DenseVector<Quad>& wide_coefficients() const { return wide_; }
  const SolveInfo& info() const { return info_; }
  Precision precision() const { return info_.precision; }
  /// 2 (n + 2) u sum_i |a_i| max|k|, u = 2^-53: bound on the rounding error
  /// of a binary64 evaluation.
  double evaluation_bound() const { return evaluation_bound_; }
  bool evaluates_wide() const { return wide_eval_; }

  double operator()(PointView x) const;
  /// One value per row of `points`; identical to calling operator() per row.
  Eigen::VectorXd evaluate(const PointMatrix& points) const;
  /// Always sums in binary128, from the wide coefficients when there are any.
  /// For values far below the evaluation bound, e.g. Lagrange tails.
  Eigen::VectorXd evaluate_wide(const PointMatrix& points) const;

 private:
  Quad sum_wide(PointView x) const;

  Kernel kernel_;
  PointSet nodes_;
  Eigen::VectorXd data_;
  Eigen::VectorXd coefficients_;
  DenseVector<Quad> wide_;
  SolveInfo info_;
  double evaluation_bound_ = 0.0;
  bool wide_eval_ = false;
};

inline constexpr double kEvaluationTolerance = 1e-10;

Interpolant fit(const Kernel& kernel, const PointSet& nodes, const Eigen::VectorXd& values,
                const SolveOptions& options = {});

/// Fit against an existing binary64 factorization of the nodes' Gram matrix.
Interpolant fit(const Factorization<double>& factor, const Kernel& kernel, const PointSet& nodes,
                const Eigen::VectorXd& values);

/// Lagrange function l_i: the interpolant of the i-th unit vector.
Interpolant lagrange(const Kernel& kernel, const PointSet& nodes, std::size_t i,
                     const SolveOptions& options = {});

struct NativeNorm {
  double value = 0.0;
  /// r^T a before the square root.
  double squared = 0.0;
  /// r^T a came out negative from roundoff and was clamped to 0.
  bool clamped = false;
};

/// ||s||_{H_k} = sqrt(r^T a), accumulated in the interpolant's precision.
NativeNorm native_norm(const Interpolant& s);

/// All Lagrange functions of a node set at once: the coefficient matrix
/// C = K^{-1}, whose column i holds the coefficients of l_i.
class LagrangeBasis {
 public:
  LagrangeBasis(Kernel kernel, PointSet nodes, const SolveOptions& options = {});

  const Kernel& kernel() const { return kernel_; }
  const PointSet& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  const SolveInfo& info() const { return info_; }

  /// C rounded to binary64.
  const Eigen::MatrixXd& coefficients() const { return c64_; }

  /// l_i(p_j) for every node i (row) and point p_j (column), computed in
  /// binary64 from the rounded coefficients. The error of each entry is at
  /// most rounding_bound().
  Eigen::MatrixXd values(const PointMatrix& points) const;

  /// Streams values() in column blocks of at most 256 points; `visit` gets
  /// the index of the first point and the n x len block. Blocks may be
  /// visited concurrently, so `visit` must only touch block-local state.
  void visit_values(const PointMatrix& points,
                    const std::function<void(Eigen::Index, const Eigen::MatrixXd&)>& visit) const;

  /// Same values evaluated in the solve precision.
  Eigen::MatrixXd values_exact(const PointMatrix& points) const;

  /// max_{i,j} |l_i(x_j) - delta_ij| evaluated in the solve precision.
  double cardinality_error() const;

  /// A-priori bound on |values() - exact| per entry:
  /// 2 (n + 2) u max_i sum_k |C_ki| max|k|, u = 2^-53.
  double rounding_bound() const;

  /// The interpolant sum_i r_i l_i, with coefficients C r formed in the
  /// solve precision.
  Interpolant interpolant(const Eigen::VectorXd& data) const;

 private:
  Kernel kernel_;
  PointSet nodes_;
  SolveInfo info_;
  Eigen::MatrixXd c64_;
  DenseMatrix<Quad> cwide_;
  double rounding_bound_ = 0.0;
};

}  // namespace kernlab
