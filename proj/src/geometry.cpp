#include "funk/geometry.hpp"

#include <limits>
#include <numbers>
#include <string>

#include "funk/error.hpp"

namespace funk {

namespace {

Vec3 normalized_or_throw(const Vec3& v) {
  const double n = norm(v);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error(ErrorKind::InvalidArgument, "cannot normalize a zero or non-finite vector");
  }
  if (std::abs(n - 1.0) <= 2 * std::numeric_limits<double>::epsilon()) return v;
  return v * (1.0 / n);
}

}  // namespace

UnitVector::UnitVector(double x, double y, double z) : v_(normalized_or_throw({x, y, z})) {}

UnitVector::UnitVector(const Vec3& v) : v_(normalized_or_throw(v)) {}

UnitVector UnitVector::operator-() const {
  UnitVector r = *this;
  r.v_ = -v_;
  return r;
}

double angle_between(const UnitVector& a, const UnitVector& b) {
  return std::atan2(norm(cross(a.vec(), b.vec())), dot(a, b));
}

Rotation::Rotation() : m_{1, 0, 0, 0, 1, 0, 0, 0, 1} {}

Vec3 Rotation::apply(const Vec3& v) const {
  return {m_[0] * v.x + m_[1] * v.y + m_[2] * v.z,
          m_[3] * v.x + m_[4] * v.y + m_[5] * v.z,
          m_[6] * v.x + m_[7] * v.y + m_[8] * v.z};
}

UnitVector Rotation::apply(const UnitVector& v) const { return UnitVector(apply(v.vec())); }

Rotation Rotation::transpose() const {
  return Rotation({m_[0], m_[3], m_[6], m_[1], m_[4], m_[7], m_[2], m_[5], m_[8]});
}

double Rotation::det() const {
  return m_[0] * (m_[4] * m_[8] - m_[5] * m_[7]) - m_[1] * (m_[3] * m_[8] - m_[5] * m_[6]) +
         m_[2] * (m_[3] * m_[7] - m_[4] * m_[6]);
}

Rotation rotation_to_pole(const UnitVector& omega_point) {
  const Vec3 n{0.0, 0.0, 1.0};
  const Vec3 axis = cross(omega_point.vec(), n);
  const double s = norm(axis);
  const double c = omega_point.z();
  if (s < 1e-15) {
    if (c > 0.0) return Rotation();
    return Rotation({1, 0, 0, 0, -1, 0, 0, 0, -1});
  }
  // Rodrigues: R = I + sin(t) K + (1 - cos(t)) K^2 with K the unit-axis cross matrix.
  const Vec3 k = axis * (1.0 / s);
  const double t = 1.0 - c;
  return Rotation({c + k.x * k.x * t, k.x * k.y * t - k.z * s, k.x * k.z * t + k.y * s,
                   k.y * k.x * t + k.z * s, c + k.y * k.y * t, k.y * k.z * t - k.x * s,
                   k.z * k.x * t - k.y * s, k.z * k.y * t + k.x * s, c + k.z * k.z * t});
}

double wrap_two_pi(double angle) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(angle, two_pi);
  if (r < 0.0) r += two_pi;
  if (r >= two_pi) r = 0.0;
  return r;
}

UnitVector sph_to_vec(const UnitVector& pole, double nu, double tau) {
  const Vec3 local{std::sin(nu) * std::cos(tau), std::sin(nu) * std::sin(tau), std::cos(nu)};
  if (pole.z() == 1.0) return UnitVector(local);
  return UnitVector(rotation_to_pole(pole).transpose().apply(local));
}

SphericalCoords vec_to_sph(const UnitVector& pole, const UnitVector& v) {
  const Vec3 local = pole.z() == 1.0 ? v.vec() : rotation_to_pole(pole).apply(v.vec());
  SphericalCoords c;
  c.pole = pole;
  c.nu = std::atan2(std::hypot(local.x, local.y), local.z);
  c.tau = wrap_two_pi(std::atan2(local.y, local.x));
  return c;
}

UnitVector reference_direction(const UnitVector& omega, const UnitVector& pole) {
  const double c = dot(omega, pole);
  if (std::abs(c) >= kDegeneracyThreshold) {
    throw Error(ErrorKind::DegenerateProjection,
                "circle pole is parallel to the reference point (|<omega,pole>| = " +
                    std::to_string(std::abs(c)) + ")");
  }
  return UnitVector(pole.vec() - c * omega.vec());
}

GreatCircleFrame great_circle_frame(const UnitVector& omega, const UnitVector& pole) {
  const UnitVector e_ref = reference_direction(omega, pole);
  return {omega, e_ref, UnitVector(cross(e_ref.vec(), omega.vec()))};
}

double alpha_angle(const UnitVector& omega, const UnitVector& omega_point, const UnitVector& pole) {
  const GreatCircleFrame frame = great_circle_frame(omega, pole);
  const UnitVector r = reference_direction(omega, omega_point);
  const double a = std::atan2(dot(r, frame.e_quad), dot(r, frame.e_ref));
  return a <= -std::numbers::pi ? std::numbers::pi : a;
}

}  // namespace funk
