#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "kernlab/errors.hpp"
#include "kernlab/interp.hpp"
#include "kernlab/kernel.hpp"

using namespace kernlab;

namespace {

std::vector<double> pt(std::initializer_list<double> v) { return v; }

double eval(const Kernel& k, std::vector<double> x, std::vector<double> y) { return k(x, y); }

// Composite Gauss-Legendre (5 points per panel) on [a, b].
template <class F>
double integrate(F f, double a, double b, int panels = 400) {
  static const double node[] = {0.0, -0.5384693101056831, 0.5384693101056831,
                                -0.9061798459386640, 0.9061798459386640};
  static const double weight[] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                  0.2369268850561891, 0.2369268850561891};
  double sum = 0.0;
  const double w = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * w;
    for (int q = 0; q < 5; ++q) sum += weight[q] * f(mid + 0.5 * w * node[q]);
  }
  return 0.5 * w * sum;
}

}  // namespace

TEST(KernelEval, Matern12AtZeroDistanceIsOne) {
  const auto k = Kernel::matern(KernelFamily::matern12, 1.0, 1);
  EXPECT_EQ(eval(k, {0.3}, {0.3}), 1.0);
}

TEST(KernelEval, Matern32AtUnitDistance) {
  const auto k = Kernel::matern(KernelFamily::matern32, 1.0, 1);
  EXPECT_NEAR(eval(k, {0.0}, {1.0}), 2.0 * std::exp(-1.0), 1e-15);
  EXPECT_NEAR(eval(k, {0.0}, {1.0}), 0.7357589, 1e-7);
}

TEST(KernelEval, Matern52UsesTheUnnormalisedPolynomial) {
  const auto k = Kernel::matern(KernelFamily::matern52, 2.0, 2);
  const double r = 2.0 * std::hypot(0.3, 0.4);
  EXPECT_NEAR(eval(k, {0.0, 0.0}, {0.3, 0.4}), (3 + 3 * r + r * r) * std::exp(-r), 1e-15);
}

TEST(KernelEval, DiagonalValues) {
  for (auto [family, value] : {std::pair{KernelFamily::matern12, 1.0},
                               std::pair{KernelFamily::matern32, 1.0},
                               std::pair{KernelFamily::matern52, 3.0}}) {
    const auto k = Kernel::matern(family, 7.0, 3);
    EXPECT_EQ(eval(k, {0.1, 0.2, 0.3}, {0.1, 0.2, 0.3}), value);
    EXPECT_EQ(k.max_value(), value);
  }
}

TEST(KernelEval, GaussianScalesTheSquaredDistance) {
  const auto k = Kernel::gaussian(10.0, 1);
  EXPECT_NEAR(eval(k, {0.2}, {0.3}), std::exp(-1.0), 1e-14);
  EXPECT_NEAR(eval(k, {0.2}, {0.3}), 0.3678794, 1e-7);
}

TEST(KernelEval, IntervalKernelAtTheLeftEndpoint) {
  const auto k = Kernel::interval_sobolev(0.0, 1.0);
  EXPECT_NEAR(eval(k, {0.0}, {0.0}), std::cosh(1.0) / std::sinh(1.0), 1e-15);
  EXPECT_NEAR(eval(k, {0.0}, {0.0}), 1.3130353, 1e-7);
  EXPECT_NEAR(k.max_value(), 1.3130352854993312, 1e-15);
}

// <k(., y), g>_{W^1_2} = int k g + k' g' must equal g(y). The derivative of
// k(., y) is written out here independently of the library.
TEST(KernelEval, IntervalKernelReproducesPointValues) {
  const double a = -0.5, b = 1.25;
  const auto k = Kernel::interval_sobolev(a, b);
  const double s = std::sinh(b - a);
  auto g = [](double x) { return std::sin(3.0 * x) + x * x; };
  auto dg = [](double x) { return 3.0 * std::cos(3.0 * x) + 2.0 * x; };
  for (double y : {-0.5, -0.1, 0.3, 0.77, 1.25}) {
    auto dk = [&](double x) {
      return x < y ? std::cosh(b - y) * std::sinh(x - a) / s
                   : -std::sinh(b - x) * std::cosh(y - a) / s;
    };
    auto integrand = [&](double x) { return eval(k, {x}, {y}) * g(x) + dk(x) * dg(x); };
    const double inner = (y > a ? integrate(integrand, a, y) : 0.0) +
                         (y < b ? integrate(integrand, y, b) : 0.0);
    EXPECT_NEAR(inner, g(y), 1e-10) << "y = " << y;
  }
}

TEST(KernelEval, SymmetricAndPure) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto family : {KernelFamily::matern12, KernelFamily::matern32, KernelFamily::matern52,
                      KernelFamily::gaussian, KernelFamily::interval_w21}) {
    const int dim = family == KernelFamily::interval_w21 ? 1 : 2;
    const auto k = Kernel::make(family, 3.0, dim, std::pair{0.0, 1.0});
    for (int t = 0; t < 200; ++t) {
      std::vector<double> x(dim), y(dim);
      for (auto& v : x) v = u(rng);
      for (auto& v : y) v = u(rng);
      EXPECT_EQ(k(x, y), k(y, x));
      EXPECT_EQ(k(x, y), k(x, y));
      EXPECT_GT(k(x, x), 0.0);
    }
  }
}

TEST(KernelEval, QuadEvaluationAgreesWithDouble) {
  const auto k = Kernel::matern(KernelFamily::matern52, 3.0, 2);
  const auto x = pt({0.1, 0.7}), y = pt({0.4, 0.2});
  EXPECT_NEAR(static_cast<double>(k.eval_as<Quad>(x, y)), k(x, y), 1e-15);
}

TEST(KernelEval, ContractAndDomainErrors) {
  const auto m = Kernel::matern(KernelFamily::matern32, 1.0, 2);
  EXPECT_THROW(eval(m, {0.0}, {0.0, 1.0}), ContractError);
  const auto w = Kernel::interval_sobolev(0.0, 1.0);
  EXPECT_THROW(eval(w, {1.5}, {0.5}), DomainError);
  EXPECT_THROW(Kernel::matern(KernelFamily::matern32, -1.0, 1), ContractError);
  EXPECT_THROW(Kernel::interval_sobolev(1.0, 0.0), ContractError);
}

TEST(KernelEval, SobolevOrder) {
  EXPECT_EQ(Kernel::matern(KernelFamily::matern12, 1.0, 1).sobolev_order(), 1.0);
  EXPECT_EQ(Kernel::matern(KernelFamily::matern32, 1.0, 2).sobolev_order(), 2.5);
  EXPECT_EQ(Kernel::matern(KernelFamily::matern52, 1.0, 1).sobolev_order(), 3.0);
  EXPECT_EQ(Kernel::interval_sobolev(0, 1).sobolev_order(), 1.0);
  EXPECT_TRUE(std::isinf(Kernel::gaussian(1.0, 1).sobolev_order()));
}

TEST(KernelFamilyNames, RoundTrip) {
  for (auto f : {KernelFamily::matern12, KernelFamily::matern32, KernelFamily::matern52,
                 KernelFamily::gaussian, KernelFamily::interval_w21})
    EXPECT_EQ(parse_kernel_family(to_string(f)), f);
  EXPECT_FALSE(parse_kernel_family("matern72"));
}

TEST(Gram, SingleNode) {
  const auto k = Kernel::matern(KernelFamily::matern52, 1.0, 1);
  const auto g = assemble_gram(k, PointSet::on_interval(0.0, 1.0, {0.4}));
  ASSERT_EQ(g.order(), 1u);
  EXPECT_EQ(g.entries(0, 0), 3.0);
}

TEST(Gram, TwoNodesExponential) {
  const auto k = Kernel::matern(KernelFamily::matern12, 1.0, 1);
  const auto g = assemble_gram(k, PointSet::on_interval(0.0, 1.0, {0.0, 1.0}));
  EXPECT_EQ(g.entries(0, 0), 1.0);
  EXPECT_EQ(g.entries(1, 1), 1.0);
  EXPECT_NEAR(g.entries(0, 1), std::exp(-1.0), 1e-16);
  EXPECT_EQ(g.entries(0, 1), g.entries(1, 0));
}

TEST(Gram, ExactlySymmetricAndMatchesEval) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PointMatrix m(6, 2);
  for (Eigen::Index i = 0; i < 6; ++i) m.row(i) << u(rng), u(rng);
  const PointSet x(Box::unit(2), m);
  for (auto family : {KernelFamily::matern12, KernelFamily::matern32, KernelFamily::matern52,
                      KernelFamily::gaussian}) {
    const auto k = Kernel::make(family, 2.0, 2);
    const auto g = assemble_gram(k, x);
    EXPECT_TRUE(g.entries == g.entries.transpose());
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 6; ++j)
        EXPECT_EQ(g.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)),
                  k(x[std::min(i, j)], x[std::max(i, j)]));
  }
}

TEST(Gram, DuplicateNodesAreRejected) {
  EXPECT_THROW(PointSet::on_interval(0.0, 1.0, {0.2, 0.5, 0.2}), DuplicateNodeError);
}

TEST(Gram, SmallSeparatedSetsFactorWithoutJitter) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  while (checked < 200) {
    const int n = 2 + static_cast<int>(rng() % 7);
    PointMatrix m(n, 2);
    for (int i = 0; i < n; ++i) m.row(i) << u(rng), u(rng);
    const PointSet x(Box::unit(2), m);
    bool separated = true;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) separated = separated && distance(x[i], x[j]) > 2e-3;
    if (!separated) continue;
    for (auto family : {KernelFamily::matern12, KernelFamily::matern32, KernelFamily::matern52}) {
      const auto f = factorize(assemble_gram(Kernel::make(family, 1.0, 2), x));
      EXPECT_EQ(f.jitter(), 0.0);
    }
    ++checked;
  }
}
