#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "funk/error.hpp"
#include "funk/quadrature.hpp"
#include "test_util.hpp"

using namespace funk;
using funk::testing::kind_of;

namespace {

constexpr double kPi = std::numbers::pi;

PeriodicSamples sample(int m, double (*f)(double)) {
  std::vector<double> v(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) v[static_cast<std::size_t>(j)] = f(PeriodicSamples::node(static_cast<std::size_t>(j), m));
  return PeriodicSamples(std::move(v));
}

ProfileGrid uniform_grid(int n, double (*f)(double)) {
  ProfileGrid g;
  for (int i = 1; i <= n; ++i) {
    const double u = kPi / 2 * i / n;
    g.nodes.push_back(u);
    g.values.push_back(f(u));
  }
  return g;
}

}  // namespace

TEST(PeriodicSamples, NodesStartAtMinusPi) {
  EXPECT_DOUBLE_EQ(PeriodicSamples::node(0, 8), -kPi);
  EXPECT_DOUBLE_EQ(PeriodicSamples::node(4, 8), 0.0);
}

TEST(PeriodicSamples, RejectsBadCounts) {
  EXPECT_EQ(kind_of([] { PeriodicSamples(std::vector<double>(2, 1.0)); }), ErrorKind::TooFewNodes);
  EXPECT_EQ(kind_of([] { PeriodicSamples(std::vector<double>(7, 1.0)); }), ErrorKind::InvalidArgument);
}

TEST(PeriodicTrapezoid, Examples) {
  EXPECT_NEAR(periodic_trapezoid(sample(8, [](double) { return 1.0; })), 2 * kPi, 1e-15);
  EXPECT_NEAR(periodic_trapezoid(sample(16, [](double p) { return std::cos(p); })), 0.0, 1e-14);
  EXPECT_NEAR(periodic_trapezoid(sample(16, [](double p) { return std::cos(p) * std::cos(p); })), kPi, 1e-13);
}

TEST(PeriodicTrapezoid, ExactBelowHalfNodeCount) {
  const int m = 32;
  for (int d = 0; d < m / 2; ++d) {
    std::vector<double> v;
    for (int j = 0; j < m; ++j) {
      const double p = PeriodicSamples::node(static_cast<std::size_t>(j), m);
      v.push_back(std::cos(d * p) + 0.5 * std::sin(d * p));
    }
    EXPECT_NEAR(periodic_trapezoid(PeriodicSamples(v)), d == 0 ? 2 * kPi : 0.0, 1e-13) << d;
  }
}

TEST(GaussLegendre, WeightsSumToTwo) {
  for (int order : {1, 2, 5, 64, 128}) {
    const GaussLegendreRule r(order);
    double s = 0.0;
    for (double w : r.weights) s += w;
    EXPECT_NEAR(s, 2.0, 1e-13) << order;
  }
}

TEST(IntegrateProfile, Examples) {
  auto sin5cos = [](double u) { return std::pow(std::sin(u), 5) * std::cos(u); };
  EXPECT_NEAR(integrate_profile(sin5cos, 0.0, kPi / 2), 1.0 / 6.0, 1e-12);
  EXPECT_NEAR(integrate_profile([](double u) { return std::cos(u); }, 0.0, kPi / 2), 1.0, 1e-13);
  auto s2s3 = [](double u) { return std::pow(std::sin(u), 2) * std::pow(std::sin(u), 3) * std::cos(u); };
  EXPECT_NEAR(integrate_profile(s2s3, 0.0, kPi / 2), 1.0 / 6.0, 1e-12);
}

TEST(IntegrateProfile, PolynomialExactness) {
  // order p integrates polynomials of degree 2p - 1 exactly
  for (int p : {2, 4, 8}) {
    const int deg = 2 * p - 1;
    const double exact = (std::pow(2.0, deg + 1) - std::pow(-1.0, deg + 1)) / (deg + 1);
    EXPECT_NEAR(integrate_profile([deg](double x) { return std::pow(x, deg); }, -1.0, 2.0, p), exact, 1e-11);
  }
  for (int a = 0; a <= 6; ++a) {
    for (int b = 0; b <= 6; ++b) {
      const double exact = std::beta((a + 1) / 2.0, (b + 1) / 2.0) / 2.0;
      const double got = integrate_profile(
          [a, b](double u) { return std::pow(std::sin(u), a) * std::pow(std::cos(u), b); }, 0.0, kPi / 2);
      EXPECT_NEAR(got, exact, 1e-12) << a << " " << b;
    }
  }
}

TEST(IntegrateProfile, Errors) {
  auto f = [](double) { return 1.0; };
  EXPECT_EQ(kind_of([&] { integrate_profile(f, 1.0, 1.0); }), ErrorKind::InvalidInterval);
  EXPECT_EQ(kind_of([&] { integrate_profile(f, 2.0, 1.0); }), ErrorKind::InvalidInterval);
  EXPECT_EQ(kind_of([&] { integrate_profile(f, 0.0, 1.0, 1); }), ErrorKind::InvalidArgument);
}

TEST(ProfileGrid, Validation) {
  EXPECT_EQ(kind_of([] { ProfileGrid{{0.1, 0.2}, {1.0}}.validate(); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { ProfileGrid{{0.2, 0.1}, {1.0, 1.0}}.validate(); }), ErrorKind::InvalidArgument);
  EXPECT_EQ(kind_of([] { ProfileGrid{{0.1, 2.0}, {1.0, 1.0}}.validate(); }), ErrorKind::InvalidArgument);
  EXPECT_NO_THROW((ProfileGrid{{0.0, kPi / 2}, {1.0, 1.0}}.validate()));
}

TEST(CubicProfile, ReproducesCubics) {
  const ProfileGrid g = uniform_grid(16, [](double u) { return 1.0 - 2.0 * u + 0.5 * u * u * u; });
  const CubicProfile c(g);
  for (double u = 0.0; u <= kPi / 2; u += 0.01) EXPECT_NEAR(c(u), 1.0 - 2.0 * u + 0.5 * u * u * u, 1e-12) << u;
}

TEST(CubicProfile, ClampsNonnegativeData) {
  ProfileGrid g;
  for (int i = 1; i <= 8; ++i) {
    g.nodes.push_back(kPi / 2 * i / 8);
    g.values.push_back(i == 4 ? 1.0 : 0.0);
  }
  const CubicProfile c(g);
  for (double u = 0.0; u <= kPi / 2; u += 0.001) EXPECT_GE(c(u), 0.0);
}

TEST(CumulativeWeightedIntegral, Examples) {
  const ProfileGrid ones = cumulative_weighted_integral(uniform_grid(512, [](double) { return 1.0; }), 1);
  for (std::size_t i = 0; i < ones.nodes.size(); ++i) {
    EXPECT_NEAR(ones.values[i], std::pow(std::sin(ones.nodes[i]), 2) / 2, 1e-8);
  }
  const ProfileGrid zero = cumulative_weighted_integral(uniform_grid(64, [](double) { return 0.0; }), 3);
  for (double v : zero.values) EXPECT_EQ(v, 0.0);
  const ProfileGrid s3 =
      cumulative_weighted_integral(uniform_grid(512, [](double u) { return std::pow(std::sin(u), 3); }), 2);
  for (std::size_t i = 0; i < s3.nodes.size(); ++i) {
    EXPECT_NEAR(s3.values[i], std::pow(std::sin(s3.nodes[i]), 6) / 6, 1e-8);
  }
}

TEST(CumulativeWeightedIntegral, CoarseGridStillAccurate) {
  const ProfileGrid g =
      cumulative_weighted_integral(uniform_grid(64, [](double u) { return std::pow(std::sin(u), 3); }), 2);
  EXPECT_NEAR(g.values.back(), 1.0 / 6.0, 1e-8);
}

TEST(CumulativeWeightedIntegral, MonotoneForNonnegativeProfile) {
  const ProfileGrid g = cumulative_weighted_integral(
      uniform_grid(64, [](double u) { return std::exp(-40.0 * (u - 0.8) * (u - 0.8)); }), 4);
  for (std::size_t i = 1; i < g.values.size(); ++i) EXPECT_GE(g.values[i], g.values[i - 1]);
}

TEST(CumulativeWeightedIntegral, Errors) {
  const ProfileGrid g = uniform_grid(64, [](double) { return 1.0; });
  EXPECT_EQ(kind_of([&] { cumulative_weighted_integral(g, -1); }), ErrorKind::InvalidExponent);
  EXPECT_EQ(kind_of([&] { cumulative_weighted_integral(uniform_grid(3, [](double) { return 1.0; }), 1); }),
            ErrorKind::TooFewNodes);
}

TEST(IntegrateInterpolated, MatchesGaussOnSmoothProfile) {
  const ProfileGrid g = uniform_grid(256, [](double u) { return std::cos(3 * u); });
  const double got = integrate_interpolated(g, [](double u) { return std::sin(u); });
  const double exact = integrate_profile([](double u) { return std::sin(u) * std::cos(3 * u); }, 0.0, kPi / 2);
  EXPECT_NEAR(got, exact, 1e-9);
}
