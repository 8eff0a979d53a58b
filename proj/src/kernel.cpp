#include "kernlab/kernel.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "kernlab/errors.hpp"

namespace kernlab {

std::string_view to_string(Precision p) {
  return p == Precision::binary64 ? "binary64" : "double-double";
}

std::string_view to_string(PrecisionPolicy p) {
  switch (p) {
    case PrecisionPolicy::binary64:
      return "binary64";
    case PrecisionPolicy::double_double:
      return "double-double";
    default:
      return "auto";
  }
}

std::string_view to_string(KernelFamily f) {
  switch (f) {
    case KernelFamily::matern12:
      return "matern12";
    case KernelFamily::matern32:
      return "matern32";
    case KernelFamily::matern52:
      return "matern52";
    case KernelFamily::gaussian:
      return "gaussian";
    case KernelFamily::interval_w21:
      return "w21";
  }
  return "?";
}

std::optional<KernelFamily> parse_kernel_family(std::string_view name) {
  for (auto f : {KernelFamily::matern12, KernelFamily::matern32, KernelFamily::matern52,
                 KernelFamily::gaussian, KernelFamily::interval_w21}) {
    if (to_string(f) == name) return f;
  }
  return std::nullopt;
}

Kernel Kernel::matern(KernelFamily family, double gamma, int dim) {
  if (family != KernelFamily::matern12 && family != KernelFamily::matern32 &&
      family != KernelFamily::matern52)
    throw ContractError("not a Matérn family");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ContractError("gamma must be positive");
  if (dim < 1) throw ContractError("dimension must be positive");
  return Kernel(family, gamma, dim, 0.0, 0.0);
}

Kernel Kernel::gaussian(double gamma, int dim) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ContractError("gamma must be positive");
  if (dim < 1) throw ContractError("dimension must be positive");
  return Kernel(KernelFamily::gaussian, gamma, dim, 0.0, 0.0);
}

Kernel Kernel::interval_sobolev(double a, double b) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
    throw ContractError("interval kernel requires a < b");
  return Kernel(KernelFamily::interval_w21, 1.0, 1, a, b);
}

Kernel Kernel::make(KernelFamily family, double gamma, int dim,
                    std::optional<std::pair<double, double>> interval) {
  switch (family) {
    case KernelFamily::gaussian:
      return gaussian(gamma, dim);
    case KernelFamily::interval_w21:
      if (!interval) throw ContractError("w21 kernel needs an interval");
      if (dim != 1) throw ContractError("w21 kernel is one-dimensional");
      return interval_sobolev(interval->first, interval->second);
    default:
      return matern(family, gamma, dim);
  }
}

double Kernel::smoothness() const {
  switch (family_) {
    case KernelFamily::matern12:
      return 0.5;
    case KernelFamily::matern32:
      return 1.5;
    case KernelFamily::matern52:
      return 2.5;
    default:
      return std::numeric_limits<double>::quiet_NaN();
  }
}

double Kernel::sobolev_order() const {
  switch (family_) {
    case KernelFamily::gaussian:
      return std::numeric_limits<double>::infinity();
    case KernelFamily::interval_w21:
      return 1.0;
    default:
      return smoothness() + 0.5 * dim_;
  }
}

double Kernel::max_value() const {
  switch (family_) {
    case KernelFamily::matern52:
      return 3.0;
    case KernelFamily::interval_w21:
      // k(x,x) is largest at the endpoints.
      return std::cosh(b_ - a_) / std::sinh(b_ - a_);
    default:
      return 1.0;
  }
}

void Kernel::check(PointView x, PointView y) const {
  if (static_cast<int>(x.size()) != dim_ || static_cast<int>(y.size()) != dim_) {
    std::ostringstream os;
    os << "kernel of dimension " << dim_ << " evaluated at points of dimension " << x.size()
       << " and " << y.size();
    throw ContractError(os.str());
  }
  if (family_ == KernelFamily::interval_w21) {
    for (double v : {x[0], y[0]}) {
      if (!(v >= a_ && v <= b_)) {
        std::ostringstream os;
        os << "point " << v << " outside [" << a_ << ", " << b_ << "]";
        throw DomainError(os.str());
      }
    }
  }
}

double Kernel::operator()(PointView x, PointView y) const {
  check(x, y);
  return eval_as<double>(x, y);
}

std::string Kernel::describe() const {
  std::ostringstream os;
  os << to_string(family_);
  if (family_ == KernelFamily::interval_w21)
    os << " on [" << a_ << ", " << b_ << "]";
  else
    os << " gamma=" << gamma_ << " dim=" << dim_;
  return os.str();
}

GramMatrix assemble_gram(const Kernel& kernel, const PointSet& nodes) {
  if (nodes.dim() != kernel.dim())
    throw ContractError("node dimension does not match the kernel dimension");
  const auto n = static_cast<Eigen::Index>(nodes.size());
  if (n > 0) kernel(nodes[0], nodes[0]);  // domain check for W21
  if (kernel.family() == KernelFamily::interval_w21) {
    for (Eigen::Index i = 0; i < n; ++i) kernel(nodes[i], nodes[i]);
  }
  const double tol = nodes.distinctness_tolerance();
  GramMatrix gram{Eigen::MatrixXd(n, n)};
  auto& k = gram.entries;
  for (Eigen::Index j = 0; j < n; ++j) {
    k(j, j) = kernel.eval_as<double>(nodes[j], nodes[j]);
    for (Eigen::Index i = 0; i < j; ++i) {
      if (distance(nodes[i], nodes[j]) < tol)
        throw DuplicateNodeError(static_cast<std::size_t>(i), static_cast<std::size_t>(j),
                                 distance(nodes[i], nodes[j]));
      k(i, j) = kernel.eval_as<double>(nodes[i], nodes[j]);
      k(j, i) = k(i, j);
    }
  }
  return gram;
}

}  // namespace kernlab
