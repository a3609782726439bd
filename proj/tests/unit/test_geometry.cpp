#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "funk/error.hpp"
#include "funk/geometry.hpp"
#include "funk/phantoms.hpp"

using namespace funk;

namespace {

constexpr double kPi = std::numbers::pi;

double dist(const UnitVector& a, const UnitVector& b) { return norm(a.vec() - b.vec()); }

UnitVector random_away_from(std::mt19937_64& gen, std::initializer_list<UnitVector> avoid) {
  for (;;) {
    const UnitVector w = random_unit_vector(gen);
    bool ok = true;
    for (const auto& a : avoid) ok = ok && std::abs(dot(w, a)) < 0.99;
    if (ok) return w;
  }
}

}  // namespace

TEST(UnitVector, NormalizesOnConstruction) {
  const UnitVector v(3.0, -4.0, 12.0);
  EXPECT_NEAR(norm(v.vec()), 1.0, 1e-12);
  EXPECT_NEAR(v.z(), 12.0 / 13.0, 1e-15);
}

TEST(UnitVector, ZeroVectorThrows) {
  try {
    UnitVector(0.0, 0.0, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
  }
}

TEST(SphToVec, PolesAndEquator) {
  const UnitVector n = north_pole();
  EXPECT_LT(dist(sph_to_vec(n, 0.0, 1.3), n), 1e-15);
  EXPECT_LT(dist(sph_to_vec(n, kPi, 0.4), -n), 1e-15);
  for (double tau : {0.0, 0.7, 2.0, 5.9}) EXPECT_NEAR(dot(sph_to_vec(n, kPi / 2, tau), n), 0.0, 1e-12);
}

TEST(SphToVec, RoundTripAboutArbitraryPoles) {
  std::mt19937_64 gen(11);
  for (int t = 0; t < 200; ++t) {
    const UnitVector pole = random_unit_vector(gen);
    const double nu = 0.01 + (kPi - 0.02) * (unit_interval_pm1(gen()) + 1.0) / 2.0;
    const double tau = kPi * (unit_interval_pm1(gen()) + 1.0);
    const SphericalCoords c = vec_to_sph(pole, sph_to_vec(pole, nu, tau));
    EXPECT_NEAR(c.nu, nu, 1e-10);
    EXPECT_NEAR(std::remainder(c.tau - tau, 2 * kPi), 0.0, 1e-10);
    EXPECT_GE(c.tau, 0.0);
    EXPECT_LT(c.tau, 2 * kPi);
  }
}

TEST(SphToVec, StandardFrameAtNorthPole) {
  const UnitVector v = sph_to_vec(north_pole(), 0.3, 1.1);
  EXPECT_NEAR(v.x(), std::sin(0.3) * std::cos(1.1), 1e-15);
  EXPECT_NEAR(v.y(), std::sin(0.3) * std::sin(1.1), 1e-15);
  EXPECT_NEAR(v.z(), std::cos(0.3), 1e-15);
}

TEST(WrapTwoPi, ReducesIntoRange) {
  EXPECT_NEAR(wrap_two_pi(-0.5), 2 * kPi - 0.5, 1e-15);
  EXPECT_NEAR(wrap_two_pi(7.0), 7.0 - 2 * kPi, 1e-15);
  EXPECT_EQ(wrap_two_pi(0.0), 0.0);
}

TEST(ReferenceDirection, EquatorialOmegaGivesPole) {
  const UnitVector omega = sph_to_vec(north_pole(), kPi / 2, 0.8);
  EXPECT_LT(dist(reference_direction(omega, north_pole()), north_pole()), 1e-12);
}

TEST(ReferenceDirection, CoordinateForm) {
  for (double nu : {kPi / 4, 0.2, 1.3, kPi / 2}) {
    for (double tau : {0.0, 1.0, 4.0}) {
      const UnitVector omega = sph_to_vec(north_pole(), nu, tau);
      const UnitVector expected = sph_to_vec(north_pole(), kPi / 2 - nu, tau + kPi);
      EXPECT_LT(dist(reference_direction(omega, north_pole()), expected), 1e-12) << nu << " " << tau;
    }
  }
}

TEST(ReferenceDirection, DegenerateThrows) {
  for (const UnitVector& omega : {north_pole(), -north_pole(), UnitVector(1e-6, 0.0, 1.0)}) {
    try {
      reference_direction(omega, north_pole());
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::DegenerateProjection);
    }
  }
}

TEST(GreatCircleFrame, Orthonormal) {
  std::mt19937_64 gen(3);
  for (int t = 0; t < 500; ++t) {
    const UnitVector pole = random_unit_vector(gen);
    const UnitVector omega = random_away_from(gen, {pole});
    const GreatCircleFrame f = great_circle_frame(omega, pole);
    EXPECT_NEAR(dot(f.e_ref, f.omega), 0.0, 1e-12);
    EXPECT_NEAR(dot(f.e_quad, f.omega), 0.0, 1e-12);
    EXPECT_NEAR(dot(f.e_ref, f.e_quad), 0.0, 1e-12);
    EXPECT_NEAR(norm(f.e_quad.vec()), 1.0, 1e-12);
    EXPECT_LT(dist(f.e_ref, reference_direction(omega, pole)), 1e-15);
    // e_quad = e_ref x omega
    EXPECT_LT(norm(f.e_quad.vec() - cross(f.e_ref.vec(), omega.vec())), 1e-12);
  }
}

TEST(GreatCircleFrame, EquatorialOmega) {
  const GreatCircleFrame f = great_circle_frame(UnitVector(1.0, 0.0, 0.0), north_pole());
  EXPECT_LT(dist(f.e_ref, north_pole()), 1e-12);
}

TEST(CirclePoint, SpecialAngles) {
  const GreatCircleFrame f = great_circle_frame(sph_to_vec(north_pole(), 0.6, 2.0), north_pole());
  EXPECT_LT(dist(circle_point(f, 0.0), f.e_ref), 1e-15);
  EXPECT_LT(dist(circle_point(f, kPi), -f.e_ref), 1e-15);
  EXPECT_LT(dist(circle_point(f, kPi / 2), f.e_quad), 1e-15);
  for (double phi = -kPi; phi <= kPi; phi += 0.1) EXPECT_NEAR(dot(circle_point(f, phi), f.omega), 0.0, 1e-12);
}

// A point at angle phi on S_omega has polar distance nu_Omega with
// cos nu_Omega = cos phi sin nu.
TEST(GreatCircleFrame, SphericalTrigonometryRelation) {
  std::mt19937_64 gen(5);
  for (int t = 0; t < 1000; ++t) {
    const double nu = 0.01 + (kPi / 2 - 0.02) * (unit_interval_pm1(gen()) + 1.0) / 2.0;
    const double tau = kPi * (unit_interval_pm1(gen()) + 1.0);
    const double phi = kPi * unit_interval_pm1(gen());
    const GreatCircleFrame f = great_circle_frame(sph_to_vec(north_pole(), nu, tau), north_pole());
    const UnitVector p = circle_point(f, phi);
    EXPECT_NEAR(p.z(), std::cos(phi) * std::sin(nu), 1e-10);
  }
}

// Along the bundle of circles through a fixed point Omega, parameterized by
// the rotation angle psi about Omega, (nu, tau, phi) of the circle pole and of
// Omega on the circle change as
//   nu' = -sin phi, tau' = -cos phi / sin nu, phi' = -cos phi cos nu / sin nu.
TEST(GreatCircleFrame, BundleDerivativeOrientation) {
  std::mt19937_64 gen(9);
  const double h = 1e-5;
  for (int t = 0; t < 200; ++t) {
    const UnitVector omega0 = random_away_from(gen, {north_pole()});
    if (omega0.z() < 0.05) continue;
    const GreatCircleFrame f0 = great_circle_frame(omega0, north_pole());
    const double phi0 = kPi * unit_interval_pm1(gen());
    const UnitVector point = circle_point(f0, phi0);
    if (std::abs(point.z()) > 0.99) continue;
    // rotate omega about `point` by psi
    auto pole_at = [&](double psi) {
      const Vec3 k = point.vec();
      const Vec3 v = omega0.vec();
      return UnitVector(std::cos(psi) * v + std::sin(psi) * cross(k, v) + (1 - std::cos(psi)) * dot(k, v) * k);
    };
    auto state = [&](double psi) {
      const UnitVector w = pole_at(psi);
      const SphericalCoords c = vec_to_sph(north_pole(), w);
      const GreatCircleFrame f = great_circle_frame(w, north_pole());
      const double phi = std::atan2(dot(point, f.e_quad), dot(point, f.e_ref));
      return std::array<double, 3>{c.nu, c.tau, phi};
    };
    const auto plus = state(h);
    const auto minus = state(-h);
    const auto mid = state(0.0);
    double dtau = std::remainder(plus[1] - minus[1], 2 * kPi) / (2 * h);
    const double dnu = (plus[0] - minus[0]) / (2 * h);
    const double dphi = std::remainder(plus[2] - minus[2], 2 * kPi) / (2 * h);
    const double nu = mid[0];
    const double phi = mid[2];
    // the rotation sense of psi is free; fix it by the sign of nu'
    const double s = dnu * -std::sin(phi) >= 0 ? 1.0 : -1.0;
    if (std::abs(std::sin(phi)) < 0.05) continue;
    EXPECT_NEAR(s * dnu, -std::sin(phi), 1e-6);
    EXPECT_NEAR(s * dtau, -std::cos(phi) / std::sin(nu), 1e-5);
    EXPECT_NEAR(s * dphi, -std::cos(phi) * std::cos(nu) / std::sin(nu), 1e-5);
  }
}

TEST(AlphaAngle, SpecialCases) {
  const UnitVector omega = sph_to_vec(north_pole(), 1.0, 0.3);
  EXPECT_NEAR(alpha_angle(omega, north_pole(), north_pole()), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(alpha_angle(omega, -north_pole(), north_pole())), kPi, 1e-12);
  EXPECT_GT(alpha_angle(omega, -north_pole(), north_pole()), 0.0);
}

TEST(AlphaAngle, AntisymmetricUnderSwap) {
  std::mt19937_64 gen(13);
  for (int t = 0; t < 300; ++t) {
    const UnitVector point = random_unit_vector(gen);
    const UnitVector pole = random_away_from(gen, {point});
    const UnitVector omega = random_away_from(gen, {point, pole});
    const double a = alpha_angle(omega, point, pole);
    const double b = alpha_angle(omega, pole, point);
    EXPECT_NEAR(std::remainder(a + b, 2 * kPi), 0.0, 1e-12);
    EXPECT_GT(a, -kPi);
    EXPECT_LE(a, kPi);
  }
}

TEST(AlphaAngle, DegenerateThrows) {
  EXPECT_THROW(alpha_angle(north_pole(), UnitVector(1, 0, 0), north_pole()), Error);
  EXPECT_THROW(alpha_angle(UnitVector(1, 0, 0), UnitVector(1, 0, 0), north_pole()), Error);
}

TEST(RotationToPole, IdentityAndAntipode) {
  const Rotation id = rotation_to_pole(north_pole());
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) EXPECT_EQ(id(r, c), r == c ? 1.0 : 0.0);
  }
  const Rotation flip = rotation_to_pole(-north_pole());
  EXPECT_LT(dist(flip.apply(-north_pole()), north_pole()), 1e-12);
  EXPECT_NEAR(flip.det(), 1.0, 1e-12);
  // pi about the x axis
  EXPECT_LT(dist(flip.apply(UnitVector(1, 0, 0)), UnitVector(1, 0, 0)), 1e-12);
}

TEST(RotationToPole, ProperOrthogonal) {
  std::mt19937_64 gen(17);
  for (int t = 0; t < 200; ++t) {
    const UnitVector w = random_unit_vector(gen);
    const Rotation r = rotation_to_pole(w);
    EXPECT_LT(dist(r.apply(w), north_pole()), 1e-12);
    EXPECT_NEAR(r.det(), 1.0, 1e-12);
    const Rotation rt = r.transpose();
    for (const Vec3& e : {Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}}) {
      EXPECT_LT(norm(rt.apply(r.apply(e)) - e), 1e-12);
    }
  }
}

TEST(RotationToPole, ConjugatesReferenceDirection) {
  std::mt19937_64 gen(19);
  for (int t = 0; t < 200; ++t) {
    const UnitVector point = random_unit_vector(gen);
    const UnitVector omega = random_away_from(gen, {point});
    const Rotation r = rotation_to_pole(point);
    const UnitVector lhs = reference_direction(r.apply(omega), north_pole());
    const UnitVector rhs = r.apply(reference_direction(omega, point));
    EXPECT_LT(dist(lhs, rhs), 1e-10);
  }
}

TEST(AngleBetween, NearlyParallel) {
  EXPECT_NEAR(angle_between(north_pole(), UnitVector(1e-9, 0, 1)), 1e-9, 1e-20);
  EXPECT_NEAR(angle_between(north_pole(), -north_pole()), kPi, 1e-15);
}
