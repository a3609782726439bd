#pragma once

// Quadrature rules for circle integrals and profile integrals on [0, pi/2].

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace funk {

inline constexpr int kDefaultCircleNodes = 256;
inline constexpr int kDefaultGaussOrder = 128;
inline constexpr int kDefaultCumulativeNodes = 512;

/// Values at the equiangular nodes phi_j = -pi + 2 pi j / M, j = 0..M-1.
class PeriodicSamples {
 public:
  /// Throws TooFewNodes if M < 4, InvalidArgument if M is odd.
  explicit PeriodicSamples(std::vector<double> values);

  static double node(std::size_t j, std::size_t m);

  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t j) const { return values_[j]; }

 private:
  std::vector<double> values_;
};

/// (2 pi / M) * sum of samples.
double periodic_trapezoid(const PeriodicSamples& samples);

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  /// Throws InvalidArgument if order < 1.
  explicit GaussLegendreRule(int order);

  /// Nodes/weights mapped to [a, b].
  std::pair<std::vector<double>, std::vector<double>> mapped(double a, double b) const;
};

/// Gauss-Legendre approximation of the integral of f over [a, b].
/// Throws InvalidInterval unless a < b, InvalidArgument if order < 2.
double integrate_profile(const std::function<double(double)>& f, double a, double b,
                         int order = kDefaultGaussOrder);

/// A function of the polar distance u in [0, pi/2] sampled at strictly increasing nodes.
struct ProfileGrid {
  std::vector<double> nodes;
  std::vector<double> values;

  /// Throws InvalidArgument on length mismatch, unsorted nodes or nodes outside [0, pi/2].
  void validate() const;
};

/// Piecewise cubic interpolant of a profile: on each interval the cubic through
/// the four nearest nodes. Below the first node the first cubic is extended.
/// When all four nodes are nonnegative the interpolant is clamped at zero.
class CubicProfile {
 public:
  explicit CubicProfile(const ProfileGrid& grid);
  double operator()(double u) const;

  const ProfileGrid& grid() const { return grid_; }

 private:
  double eval_window(std::size_t first, double u) const;
  std::size_t window_for_interval(std::size_t interval) const;

  ProfileGrid grid_;
};

/// G(nu_i) = integral over [0, nu_i] of sin^m u cos u profile(u) du, on the
/// profile's own nodes. Per-interval Gauss-Legendre of the cubic interpolant.
/// Throws InvalidExponent if m < 0, TooFewNodes if fewer than 4 nodes.
ProfileGrid cumulative_weighted_integral(const ProfileGrid& profile, int m);

/// Integral over [0, last node] of weight(u) * profile(u) du with the profile
/// replaced by its cubic interpolant; weight is evaluated at per-interval
/// Gauss-Legendre points.
double integrate_interpolated(const ProfileGrid& profile, const std::function<double(double)>& weight);

}  // namespace funk
