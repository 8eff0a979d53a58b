#pragma once

#include <cmath>
#include <limits>

#include <Eigen/Core>

#include "kernlab/precision.hpp"

namespace kernlab {

/// Unevaluated sum hi + lo of two doubles with |lo| <= ulp(hi) / 2, giving
/// about 106 significant bits. Built from the error-free transformations
/// TwoSum and TwoProd (the latter through fma), so it runs at hardware speed.
/// Only the operations needed by the factorizations are provided.
struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;

  constexpr DoubleDouble() = default;
  constexpr DoubleDouble(double h) : hi(h) {}  // NOLINT(google-explicit-constructor)
  constexpr DoubleDouble(double h, double l) : hi(h), lo(l) {}
  explicit DoubleDouble(int v) : hi(v) {}
  explicit DoubleDouble(const Quad& q) {
    hi = static_cast<double>(q);
    lo = static_cast<double>(q - Quad(hi));
  }

  explicit operator double() const { return hi + lo; }
  explicit operator Quad() const { return Quad(hi) + Quad(lo); }
};

namespace dd {

inline DoubleDouble quick_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}

inline DoubleDouble two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

inline DoubleDouble two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

}  // namespace dd

inline DoubleDouble operator+(const DoubleDouble& a, const DoubleDouble& b) {
  DoubleDouble s = dd::two_sum(a.hi, b.hi);
  const DoubleDouble t = dd::two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = dd::quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return dd::quick_two_sum(s.hi, s.lo);
}

inline DoubleDouble operator-(const DoubleDouble& a) { return {-a.hi, -a.lo}; }
inline DoubleDouble operator-(const DoubleDouble& a, const DoubleDouble& b) { return a + (-b); }

inline DoubleDouble operator*(const DoubleDouble& a, const DoubleDouble& b) {
  DoubleDouble p = dd::two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return dd::quick_two_sum(p.hi, p.lo);
}

inline DoubleDouble operator/(const DoubleDouble& a, const DoubleDouble& b) {
  const double q1 = a.hi / b.hi;
  DoubleDouble r = a - b * DoubleDouble(q1);
  const double q2 = r.hi / b.hi;
  r = r - b * DoubleDouble(q2);
  const double q3 = r.hi / b.hi;
  return dd::quick_two_sum(q1, q2) + DoubleDouble(q3);
}

inline DoubleDouble& operator+=(DoubleDouble& a, const DoubleDouble& b) { return a = a + b; }
inline DoubleDouble& operator-=(DoubleDouble& a, const DoubleDouble& b) { return a = a - b; }
inline DoubleDouble& operator*=(DoubleDouble& a, const DoubleDouble& b) { return a = a * b; }
inline DoubleDouble& operator/=(DoubleDouble& a, const DoubleDouble& b) { return a = a / b; }

inline bool operator==(const DoubleDouble& a, const DoubleDouble& b) {
  return a.hi == b.hi && a.lo == b.lo;
}
inline bool operator!=(const DoubleDouble& a, const DoubleDouble& b) { return !(a == b); }
inline bool operator<(const DoubleDouble& a, const DoubleDouble& b) {
  return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
}
inline bool operator>(const DoubleDouble& a, const DoubleDouble& b) { return b < a; }
inline bool operator<=(const DoubleDouble& a, const DoubleDouble& b) { return !(b < a); }
inline bool operator>=(const DoubleDouble& a, const DoubleDouble& b) { return !(a < b); }

inline DoubleDouble abs(const DoubleDouble& a) { return a.hi < 0.0 ? -a : a; }

inline DoubleDouble sqrt(const DoubleDouble& a) {
  if (!(a.hi > 0.0)) return DoubleDouble(std::sqrt(a.hi));
  const double x = std::sqrt(a.hi);
  const DoubleDouble r = a - dd::two_prod(x, x);
  return dd::quick_two_sum(x, r.hi / (2.0 * x));
}

/// sum_i a_i b_i over `len` strided entries, with four independent
/// accumulators to keep the floating-point pipeline busy.
inline DoubleDouble dot(const DoubleDouble* a, Eigen::Index a_stride, const DoubleDouble* b,
                        Eigen::Index b_stride, Eigen::Index len) {
  DoubleDouble s0, s1, s2, s3;
  Eigen::Index i = 0;
  for (; i + 4 <= len; i += 4) {
    s0 += a[i * a_stride] * b[i * b_stride];
    s1 += a[(i + 1) * a_stride] * b[(i + 1) * b_stride];
    s2 += a[(i + 2) * a_stride] * b[(i + 2) * b_stride];
    s3 += a[(i + 3) * a_stride] * b[(i + 3) * b_stride];
  }
  for (; i < len; ++i) s0 += a[i * a_stride] * b[i * b_stride];
  return (s0 + s1) + (s2 + s3);
}

}  // namespace kernlab

namespace Eigen {

template <>
struct NumTraits<kernlab::DoubleDouble> : GenericNumTraits<kernlab::DoubleDouble> {
  using Real = kernlab::DoubleDouble;
  using NonInteger = kernlab::DoubleDouble;
  using Nested = kernlab::DoubleDouble;
  using Literal = kernlab::DoubleDouble;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 0,
    ReadCost = 2,
    AddCost = 20,
    MulCost = 12
  };
  static Real epsilon() { return Real(0x1.0p-104); }
  static Real dummy_precision() { return Real(1e-28); }
  static Real highest() { return Real(std::numeric_limits<double>::max()); }
  static Real lowest() { return Real(-std::numeric_limits<double>::max()); }
  static int digits10() { return 31; }
};

}  // namespace Eigen
