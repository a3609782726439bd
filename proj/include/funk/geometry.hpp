#pragma once

// Points, directions and great-circle frames on the unit sphere.
//
// Conventions used throughout the library:
//  * The default pole N is the world z axis.
//  * Spherical coordinates (nu, tau) relative to a pole p use the azimuth
//    frame (R^T x, R^T y, p) where R = rotation_to_pole(p). For p = N this is
//    the usual (x, y, z) frame: v = (sin nu cos tau, sin nu sin tau, cos nu).
//  * On the great circle S_omega the angle phi is measured from the reference
//    direction e_ref (projection of the pole) towards e_quad = e_ref x omega.
//    This orientation makes (nu, tau, phi) -> point satisfy
//      d nu/dpsi = -sin phi,  d tau/dpsi = -cos phi / sin nu,
//      d phi/dpsi = -cos phi cos nu / sin nu
//    along the bundle of circles through a fixed point, which is what the
//    consistency recurrences for the Fourier coefficients rely on.

#include <array>
#include <cmath>

namespace funk {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator-() const { return {-x, -y, -z}; }
  constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  friend constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }
};

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

/// A point of S^2. Always normalized; construction from a zero vector throws.
class UnitVector {
 public:
  /// The default pole N = (0, 0, 1).
  UnitVector() = default;
  UnitVector(double x, double y, double z);
  explicit UnitVector(const Vec3& v);

  double x() const { return v_.x; }
  double y() const { return v_.y; }
  double z() const { return v_.z; }
  const Vec3& vec() const { return v_; }

  UnitVector operator-() const;

 private:
  Vec3 v_{0.0, 0.0, 1.0};
};

inline double dot(const UnitVector& a, const UnitVector& b) { return dot(a.vec(), b.vec()); }
inline double dot(const UnitVector& a, const Vec3& b) { return dot(a.vec(), b); }

/// The North Pole N.
inline UnitVector north_pole() { return UnitVector{}; }

/// Angle between two unit vectors in [0, pi], accurate for nearly (anti)parallel inputs.
double angle_between(const UnitVector& a, const UnitVector& b);

/// Proper rotation stored row-major.
class Rotation {
 public:
  Rotation();  // identity
  explicit Rotation(const std::array<double, 9>& rows) : m_(rows) {}

  Vec3 apply(const Vec3& v) const;
  UnitVector apply(const UnitVector& v) const;
  Rotation transpose() const;
  double det() const;
  double operator()(int r, int c) const { return m_[static_cast<std::size_t>(3 * r + c)]; }

 private:
  std::array<double, 9> m_;
};

/// Rotation R with R(omega_point) = N.
///
/// The minimal rotation about the axis omega_point x N is used; for
/// omega_point = -N it is the rotation by pi about the x axis.
Rotation rotation_to_pole(const UnitVector& omega_point);

struct SphericalCoords {
  UnitVector pole;
  double nu = 0.0;   // [0, pi]
  double tau = 0.0;  // [0, 2 pi)
};

/// Reduce an angle into [0, 2 pi).
double wrap_two_pi(double angle);

UnitVector sph_to_vec(const UnitVector& pole, double nu, double tau);
SphericalCoords vec_to_sph(const UnitVector& pole, const UnitVector& v);

/// |<omega, pole>| at or above this triggers DegenerateProjection.
inline constexpr double kDegeneracyThreshold = 1.0 - 1e-10;

/// normalize(pole - <pole, omega> omega): the point of S_omega closest to pole.
UnitVector reference_direction(const UnitVector& omega, const UnitVector& pole);

struct GreatCircleFrame {
  UnitVector omega;   // pole of the circle S_omega
  UnitVector e_ref;   // phi = 0
  UnitVector e_quad;  // phi = pi/2
};

GreatCircleFrame great_circle_frame(const UnitVector& omega, const UnitVector& pole);

inline UnitVector circle_point(const GreatCircleFrame& frame, double phi) {
  return UnitVector(std::cos(phi) * frame.e_ref.vec() + std::sin(phi) * frame.e_quad.vec());
}

/// Oriented angle in (-pi, pi] from the projection of `pole` to the projection
/// of `omega_point` on S_omega, positive towards e_quad of the pole frame.
double alpha_angle(const UnitVector& omega, const UnitVector& omega_point, const UnitVector& pole);

}  // namespace funk
