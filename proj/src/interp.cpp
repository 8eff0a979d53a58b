#include "kernlab/interp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "kernlab/double_double.hpp"
#include "kernlab/errors.hpp"

namespace kernlab {

namespace {

template <class T>
double to_double(const T& v) {
  return static_cast<double>(v);
}

struct PivotFailure {
  std::size_t pivot;
  double value;
};

// Left-looking Cholesky on a copy of the lower triangle of `a`.
template <class T>
std::optional<PivotFailure> cholesky_in_place(DenseMatrix<T>& a) {
  using std::sqrt;
  const Eigen::Index n = a.rows();
  if constexpr (std::is_same_v<T, DoubleDouble>) {
    // Works on U = L^T in the upper triangle so every dot product runs over
    // contiguous memory; the result is transposed back at the end.
    a.template triangularView<Eigen::StrictlyUpper>() = a.transpose();
    for (Eigen::Index j = 0; j < n; ++j) {
      const T* uj = &a(0, j);
      const T d = a(j, j) - dot(uj, 1, uj, 1, j);
      if (!(d > T(0))) return PivotFailure{static_cast<std::size_t>(j), to_double(d)};
      const T ujj = sqrt(d);
      a(j, j) = ujj;
      const T inv = T(1.0) / ujj;
      for (Eigen::Index i = j + 1; i < n; ++i) a(j, i) = (a(j, i) - dot(&a(0, i), 1, uj, 1, j)) * inv;
    }
    a.template triangularView<Eigen::StrictlyLower>() = a.transpose();
    a.template triangularView<Eigen::StrictlyUpper>().setZero();
    return std::nullopt;
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto head = a.row(j).head(j);
    const T d = a(j, j) - head.dot(head);
    if (!(d > T(0))) return PivotFailure{static_cast<std::size_t>(j), to_double(d)};
    const T ljj = sqrt(d);
    a(j, j) = ljj;
    const Eigen::Index rest = n - j - 1;
    if (rest > 0) {
      if (j > 0) a.col(j).tail(rest).noalias() -= a.bottomLeftCorner(rest, j) * head.transpose();
      a.col(j).tail(rest) /= ljj;
    }
  }
  a.template triangularView<Eigen::StrictlyUpper>().setZero();
  return std::nullopt;
}

template <class T>
double max_abs_diagonal(const DenseMatrix<T>& k) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < k.rows(); ++i) m = std::max(m, std::abs(to_double(k(i, i))));
  return m;
}

}  // namespace

template <class T>
Factorization<T> factorize(const DenseMatrix<T>& k) {
  if (k.rows() != k.cols()) throw ContractError("Gram matrix must be square");
  const double scale = max_abs_diagonal(k);
  PivotFailure last{0, 0.0};
  double last_jitter = 0.0;
  for (double rung : kJitterLadder) {
    const double jitter = rung * scale;
    DenseMatrix<T> a = k;
    if (jitter > 0.0) a.diagonal().array() += T(jitter);
    const auto failure = cholesky_in_place(a);
    if (!failure) return Factorization<T>(std::move(a), jitter);
    last = *failure;
    last_jitter = jitter;
  }
  throw FactorizationError(last.pivot, last.value, last_jitter);
}

Factorization<double> factorize(const GramMatrix& k) { return factorize<double>(k.entries); }

template <class T>
DenseMatrix<T> Factorization<T>::solve(const DenseMatrix<T>& rhs) const {
  if (static_cast<std::size_t>(rhs.rows()) != order())
    throw ContractError("right-hand side has the wrong length");
  DenseMatrix<T> x = lower_.template triangularView<Eigen::Lower>().solve(rhs);
  lower_.transpose().template triangularView<Eigen::Upper>().solveInPlace(x);
  return x;
}

template <class T>
DenseVector<T> Factorization<T>::solve(const DenseVector<T>& rhs) const {
  if (static_cast<std::size_t>(rhs.rows()) != order())
    throw ContractError("right-hand side has the wrong length");
  DenseVector<T> x = lower_.template triangularView<Eigen::Lower>().solve(rhs);
  lower_.transpose().template triangularView<Eigen::Upper>().solveInPlace(x);
  return x;
}

template <class T>
DenseMatrix<T> Factorization<T>::inverse() const {
  const Eigen::Index n = lower_.rows();
  if constexpr (std::is_same_v<T, double>) {
    DenseMatrix<T> linv = lower_.template triangularView<Eigen::Lower>().solve(
        DenseMatrix<T>::Identity(n, n));
    DenseMatrix<T> c = linv.transpose() * linv;
    return c;
  } else {
    // Triangular inverse X = L^{-1}, then C = X^T X, each n^3/6
    // multiply-adds over contiguous columns (U = L^T holds the rows of L).
    const DenseMatrix<T> u = lower_.transpose();
    DenseMatrix<T> x = DenseMatrix<T>::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      x(j, j) = T(1.0) / u(j, j);
      for (Eigen::Index i = j + 1; i < n; ++i)
        x(i, j) = -dot(&u(j, i), 1, &x(j, j), 1, i - j) / u(i, i);
    }
    DenseMatrix<T> c(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i <= j; ++i) {
        c(i, j) = dot(&x(j, i), 1, &x(j, j), 1, n - j);
        c(j, i) = c(i, j);
      }
    }
    return c;
  }
}

template class Factorization<double>;
template class Factorization<DoubleDouble>;
template Factorization<double> factorize<double>(const DenseMatrix<double>&);
template Factorization<DoubleDouble> factorize<DoubleDouble>(const DenseMatrix<DoubleDouble>&);

namespace {

// Worst column of ||K a - r||_inf / ||r||_inf, over the listed columns.
template <class T>
double relative_residual(const DenseMatrix<T>& k, const DenseMatrix<T>& a,
                         const DenseMatrix<T>& r, const std::vector<Eigen::Index>& columns) {
  double worst = 0.0;
  for (auto c : columns) {
    DenseVector<T> res = k * a.col(c) - r.col(c);
    double num = 0.0, den = 0.0;
    for (Eigen::Index i = 0; i < res.rows(); ++i) {
      num = std::max(num, std::abs(to_double(res(i))));
      den = std::max(den, std::abs(to_double(r(i, c))));
    }
    worst = std::max(worst, den > 0.0 ? num / den : num);
  }
  return worst;
}

std::vector<Eigen::Index> all_columns(Eigen::Index n) {
  std::vector<Eigen::Index> c(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) c[static_cast<std::size_t>(i)] = i;
  return c;
}

// Evenly spaced sample of at most `count` columns, always including the
// first and the last.
std::vector<Eigen::Index> sample_columns(Eigen::Index n, Eigen::Index count) {
  if (n <= count) return all_columns(n);
  std::vector<Eigen::Index> c;
  for (Eigen::Index s = 0; s < count; ++s) c.push_back(s * (n - 1) / (count - 1));
  return c;
}

template <class T>
struct Attempt {
  DenseMatrix<T> coefficients;
  SolveInfo info;
};

// Solves K A = R in arithmetic T. With `inverse` set, R is implicitly the
// identity and A = K^{-1}.
template <class T>
DenseMatrix<T> gram_in(const Kernel& kernel, const PointSet& nodes) {
  if constexpr (std::is_same_v<T, double>) {
    return assemble_gram_as<double>(kernel, nodes);
  } else {
    // Kernel values come from binary128 evaluation, rounded to ~106 bits.
    return assemble_gram_as<Quad>(kernel, nodes).unaryExpr([](const Quad& q) { return T(q); });
  }
}

template <class T>
Attempt<T> solve_in(const Kernel& kernel, const PointSet& nodes, const Eigen::MatrixXd& rhs,
                    bool inverse) {
  const DenseMatrix<T> k = gram_in<T>(kernel, nodes);
  const auto factor = factorize<T>(k);
  const Eigen::Index n = k.rows();
  Attempt<T> out;
  out.info.precision = precision_of<T>();
  out.info.jitter = factor.jitter();
  if (inverse) {
    out.coefficients = factor.inverse();
    const DenseMatrix<T> id = DenseMatrix<T>::Identity(n, n);
    // A full K C - I check costs n^3 extended multiply-adds; a column
    // sample keeps it O(n^2).
    const auto cols = std::is_same_v<T, double> ? all_columns(n) : sample_columns(n, 16);
    out.info.relative_residual = relative_residual<T>(k, out.coefficients, id, cols);
  } else {
    const DenseMatrix<T> r = rhs.unaryExpr([](double v) { return T(v); });
    out.coefficients = factor.solve(r);
    out.info.relative_residual = relative_residual<T>(k, out.coefficients, r, all_columns(r.cols()));
  }
  return out;
}

std::string residual_note(const char* what, double residual) {
  std::ostringstream os;
  os << what << " residual " << residual;
  return os.str();
}

struct MixedSolution {
  Eigen::MatrixXd c64;
  DenseMatrix<Quad> cwide;
  SolveInfo info;
};

MixedSolution solve_system(const Kernel& kernel, const PointSet& nodes, const Eigen::MatrixXd& rhs,
                           bool inverse, const SolveOptions& opt) {
  if (nodes.empty()) throw ContractError("cannot interpolate on an empty node set");
  if (!inverse && static_cast<std::size_t>(rhs.rows()) != nodes.size())
    throw ContractError("data length does not match the number of nodes");
  MixedSolution out;
  std::string note;
  if (opt.precision != PrecisionPolicy::double_double) {
    try {
      auto a = solve_in<double>(kernel, nodes, rhs, inverse);
      if (a.info.relative_residual <= opt.residual_tolerance) {
        out.c64 = std::move(a.coefficients);
        out.info = a.info;
        return out;
      }
      note = residual_note("binary64", a.info.relative_residual);
      if (opt.precision == PrecisionPolicy::binary64) throw NumericalError(note);
    } catch (const FactorizationError& e) {
      if (opt.precision == PrecisionPolicy::binary64) throw;
      note = std::string("binary64: ") + e.what();
    }
    if (nodes.size() > opt.max_extended_order)
      throw NumericalError(note + "; system too large for double-double");
  }
  auto a = solve_in<DoubleDouble>(kernel, nodes, rhs, inverse);
  if (a.info.relative_residual > opt.residual_tolerance)
    throw NumericalError(note.empty()
                             ? residual_note("double-double", a.info.relative_residual)
                             : note + "; " +
                                   residual_note("double-double", a.info.relative_residual));
  out.cwide = a.coefficients.unaryExpr([](const DoubleDouble& v) { return Quad(v); });
  out.c64 = a.coefficients.unaryExpr([](const DoubleDouble& v) { return static_cast<double>(v); });
  out.info = a.info;
  out.info.escalated = opt.precision == PrecisionPolicy::automatic;
  out.info.note = std::move(note);
  return out;
}

}  // namespace

Interpolant::Interpolant(Kernel kernel, PointSet nodes, Eigen::VectorXd data,
                         Eigen::VectorXd coefficients, SolveInfo info, DenseVector<Quad> wide)
    : kernel_(std::move(kernel)),
      nodes_(std::move(nodes)),
      data_(std::move(data)),
      coefficients_(std::move(coefficients)),
      wide_(std::move(wide)),
      info_(std::move(info)) {
  if (static_cast<std::size_t>(data_.size()) != nodes_.size() ||
      static_cast<std::size_t>(coefficients_.size()) != nodes_.size())
    throw ContractError("interpolant data and coefficients must match the node count");
  if (info_.precision == Precision::double_double &&
      static_cast<std::size_t>(wide_.size()) != nodes_.size())
    throw ContractError("double-double interpolant needs its wide coefficients");
  const double n = static_cast<double>(nodes_.size());
  evaluation_bound_ =
      2.0 * (n + 2.0) * 0x1.0p-53 * coefficients_.cwiseAbs().sum() * kernel_.max_value();
  const double scale = std::max(1.0, data_.size() > 0 ? data_.cwiseAbs().maxCoeff() : 0.0);
  wide_eval_ = info_.precision == Precision::double_double &&
               evaluation_bound_ > kEvaluationTolerance * scale;
}

double Interpolant::operator()(PointView x) const {
  if (nodes_.empty()) return 0.0;
  kernel_(x, nodes_[0]);  // dimension and domain check
  const auto n = nodes_.size();
  if (wide_eval_) return static_cast<double>(sum_wide(x));
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    s += coefficients_(static_cast<Eigen::Index>(i)) * kernel_.eval_as<double>(nodes_[i], x);
  return s;
}

Eigen::VectorXd Interpolant::evaluate(const PointMatrix& points) const {
  const auto m = static_cast<std::ptrdiff_t>(points.rows());
  if (m > 0 && points.cols() != kernel_.dim())
    throw ContractError("evaluation points have the wrong dimension");
  Eigen::VectorXd out(m);
  // The first call surfaces contract errors before entering the parallel loop.
  if (m > 0) out(0) = (*this)(row_view(points, 0));
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 1; j < m; ++j) out(j) = (*this)(row_view(points, j));
  return out;
}

Quad Interpolant::sum_wide(PointView x) const {
  Quad s = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    const Quad a = wide_.size() > 0 ? wide_(k) : Quad(coefficients_(k));
    s += a * kernel_.eval_as<Quad>(nodes_[i], x);
  }
  return s;
}

Eigen::VectorXd Interpolant::evaluate_wide(const PointMatrix& points) const {
  const auto m = static_cast<std::ptrdiff_t>(points.rows());
  if (m > 0 && points.cols() != kernel_.dim())
    throw ContractError("evaluation points have the wrong dimension");
  if (m > 0 && !nodes_.empty()) kernel_(row_view(points, 0), nodes_[0]);
  Eigen::VectorXd out(m);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < m; ++j) out(j) = static_cast<double>(sum_wide(row_view(points, j)));
  return out;
}

Interpolant fit(const Kernel& kernel, const PointSet& nodes, const Eigen::VectorXd& values,
                const SolveOptions& options) {
  auto sol = solve_system(kernel, nodes, values, false, options);
  DenseVector<Quad> wide;
  if (sol.info.precision == Precision::double_double) wide = sol.cwide.col(0);
  Eigen::VectorXd a = sol.c64.col(0);
  return Interpolant(kernel, nodes, values, std::move(a), std::move(sol.info), std::move(wide));
}

Interpolant fit(const Factorization<double>& factor, const Kernel& kernel, const PointSet& nodes,
                const Eigen::VectorXd& values) {
  if (factor.order() != nodes.size()) throw ContractError("factorization order mismatch");
  Eigen::VectorXd a = factor.solve(Eigen::VectorXd(values));
  const auto k = assemble_gram(kernel, nodes);
  SolveInfo info;
  info.jitter = factor.jitter();
  const double den = values.size() > 0 ? values.cwiseAbs().maxCoeff() : 0.0;
  const double num = values.size() > 0 ? (k.entries * a - values).cwiseAbs().maxCoeff() : 0.0;
  info.relative_residual = den > 0.0 ? num / den : num;
  return Interpolant(kernel, nodes, values, std::move(a), std::move(info));
}

Interpolant lagrange(const Kernel& kernel, const PointSet& nodes, std::size_t i,
                     const SolveOptions& options) {
  if (i >= nodes.size()) throw ContractError("Lagrange index out of range");
  Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nodes.size()));
  e(static_cast<Eigen::Index>(i)) = 1.0;
  return fit(kernel, nodes, e, options);
}

NativeNorm native_norm(const Interpolant& s) {
  NativeNorm out;
  if (s.precision() == Precision::double_double) {
    Quad acc = 0;
    for (Eigen::Index i = 0; i < s.data().size(); ++i) acc += Quad(s.data()(i)) * s.wide_coefficients()(i);
    out.squared = static_cast<double>(acc);
  } else {
    out.squared = s.data().dot(s.coefficients());
  }
  if (out.squared < 0.0) {
    out.clamped = true;
    out.value = 0.0;
  } else {
    out.value = std::sqrt(out.squared);
  }
  return out;
}

LagrangeBasis::LagrangeBasis(Kernel kernel, PointSet nodes, const SolveOptions& options)
    : kernel_(std::move(kernel)), nodes_(std::move(nodes)) {
  auto sol = solve_system(kernel_, nodes_, Eigen::MatrixXd(), true, options);
  info_ = std::move(sol.info);
  c64_ = std::move(sol.c64);
  cwide_ = std::move(sol.cwide);
  const Eigen::Index n = c64_.rows();
  const double kmax = kernel_.max_value();
  const double col_sum = n > 0 ? c64_.cwiseAbs().colwise().sum().maxCoeff() : 0.0;
  rounding_bound_ =
      2.0 * (static_cast<double>(n) + 2.0) * 0x1.0p-53 * col_sum * kmax;
}

namespace {

constexpr Eigen::Index kBlock = 256;

}  // namespace

void LagrangeBasis::visit_values(
    const PointMatrix& points,
    const std::function<void(Eigen::Index, const Eigen::MatrixXd&)>& visit) const {
  const Eigen::Index n = c64_.rows();
  const Eigen::Index m = points.rows();
  if (m > 0 && points.cols() != kernel_.dim())
    throw ContractError("evaluation points have the wrong dimension");
  if (m > 0 && n > 0) kernel_(row_view(points, 0), nodes_[0]);
  const Eigen::Index blocks = (m + kBlock - 1) / kBlock;
  // Fixed block decomposition: each block is an independent product, so the
  // result does not depend on how blocks are distributed over threads.
#pragma omp parallel for schedule(dynamic)
  for (Eigen::Index b = 0; b < blocks; ++b) {
    const Eigen::Index first = b * kBlock;
    const Eigen::Index len = std::min(kBlock, m - first);
    Eigen::MatrixXd kx(n, len);
    for (Eigen::Index j = 0; j < len; ++j) {
      const auto p = row_view(points, first + j);
      for (Eigen::Index i = 0; i < n; ++i) kx(i, j) = kernel_.eval_as<double>(nodes_[i], p);
    }
    Eigen::MatrixXd block(n, len);
    block.noalias() = c64_.transpose() * kx;
    visit(first, block);
  }
}

Eigen::MatrixXd LagrangeBasis::values(const PointMatrix& points) const {
  Eigen::MatrixXd out(c64_.rows(), points.rows());
  visit_values(points, [&](Eigen::Index first, const Eigen::MatrixXd& block) {
    out.middleCols(first, block.cols()) = block;
  });
  return out;
}

Eigen::MatrixXd LagrangeBasis::values_exact(const PointMatrix& points) const {
  if (info_.precision == Precision::binary64) return values(points);
  const Eigen::Index n = cwide_.rows();
  const Eigen::Index m = points.rows();
  if (m > 0 && points.cols() != kernel_.dim())
    throw ContractError("evaluation points have the wrong dimension");
  if (m > 0 && n > 0) kernel_(row_view(points, 0), nodes_[0]);
  Eigen::MatrixXd out(n, m);
#pragma omp parallel for schedule(dynamic)
  for (Eigen::Index j = 0; j < m; ++j) {
    DenseVector<Quad> kx(n);
    const auto p = row_view(points, j);
    for (Eigen::Index i = 0; i < n; ++i) kx(i) = kernel_.eval_as<Quad>(nodes_[i], p);
    const DenseVector<Quad> v = cwide_.transpose() * kx;
    out.col(j) = v.cast<double>();
  }
  return out;
}

double LagrangeBasis::cardinality_error() const {
  if (info_.precision == Precision::binary64) {
    const Eigen::MatrixXd v = values(nodes_.coords());
    return (v - Eigen::MatrixXd::Identity(v.rows(), v.cols())).cwiseAbs().maxCoeff();
  }
  const DenseMatrix<Quad> k = assemble_gram_as<Quad>(kernel_, nodes_);
  const DenseMatrix<Quad> v = cwide_.transpose() * k;
  double worst = 0.0;
  for (Eigen::Index j = 0; j < v.cols(); ++j)
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      const Quad target = i == j ? Quad(1) : Quad(0);
      worst = std::max(worst, std::abs(static_cast<double>(v(i, j) - target)));
    }
  return worst;
}

double LagrangeBasis::rounding_bound() const { return rounding_bound_; }

Interpolant LagrangeBasis::interpolant(const Eigen::VectorXd& data) const {
  if (static_cast<std::size_t>(data.size()) != size())
    throw ContractError("data length does not match the number of nodes");
  SolveInfo info = info_;
  const double den = data.size() > 0 ? data.cwiseAbs().maxCoeff() : 0.0;
  if (info_.precision == Precision::double_double) {
    const DenseVector<Quad> r = data.cast<Quad>();
    DenseVector<Quad> a = cwide_ * r;
    const DenseMatrix<Quad> k = assemble_gram_as<Quad>(kernel_, nodes_);
    const DenseVector<Quad> res = k * a - r;
    double num = 0.0;
    for (Eigen::Index i = 0; i < res.size(); ++i) num = std::max(num, std::abs(static_cast<double>(res(i))));
    info.relative_residual = den > 0.0 ? num / den : num;
    Eigen::VectorXd a64 = a.cast<double>();
    return Interpolant(kernel_, nodes_, data, std::move(a64), std::move(info), std::move(a));
  }
  Eigen::VectorXd a = c64_ * data;
  const auto k = assemble_gram(kernel_, nodes_);
  const double num = data.size() > 0 ? (k.entries * a - data).cwiseAbs().maxCoeff() : 0.0;
  info.relative_residual = den > 0.0 ? num / den : num;
  return Interpolant(kernel_, nodes_, data, std::move(a), std::move(info));
}

}  // namespace kernlab
