#pragma once

#include <string_view>
#include <type_traits>

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/float128.hpp>
#include <Eigen/Core>

namespace kernlab {

/// IEEE binary128 in software (libquadmath). Used for kernel values and
/// coefficients that must carry more than binary64 accuracy.
using Quad = boost::multiprecision::float128;

template <class T>
using DenseMatrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <class T>
using DenseVector = Eigen::Matrix<T, Eigen::Dynamic, 1>;

/// Arithmetic a solve ran in. double_double is the ~106-bit pair arithmetic
/// of double_double.hpp.
enum class Precision { binary64, double_double };

/// How solves pick their arithmetic. `automatic` tries binary64 first and
/// moves to double_double when the post-solve residual check fails.
enum class PrecisionPolicy { binary64, double_double, automatic };

std::string_view to_string(Precision p);
std::string_view to_string(PrecisionPolicy p);

template <class T>
constexpr Precision precision_of() {
  return std::is_same_v<T, double> ? Precision::binary64 : Precision::double_double;
}

}  // namespace kernlab
