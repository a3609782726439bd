#pragma once

// Forward transforms on great circles.
//
// For a circle S_omega with frame (e_ref, e_quad) built from `pole`, the
// restriction is f_omega(phi) = f(cos phi e_ref + sin phi e_quad) and
//   Ff = (1/2pi) int f_omega,  Cf = (1/2pi) int cos(phi) f_omega,
//   Sf = (1/2pi) int sin(phi) f_omega,
// all over phi in [-pi, pi) by the periodic trapezoid rule on M nodes.

#include <utility>
#include <vector>

#include "funk/geometry.hpp"
#include "funk/quadrature.hpp"
#include "funk/sphere_field.hpp"

namespace funk {

struct CircleRestriction {
  GreatCircleFrame frame;
  PeriodicSamples samples;
};

/// Fourier coefficients of a restriction: f_omega = a0 + sum a_n cos(n phi) + b_n sin(n phi).
/// `a` holds a_0..a_nmax; `b` holds b_0..b_nmax with b_0 = 0 so indices line up.
struct FourierProfile {
  std::vector<double> a;
  std::vector<double> b;

  int nmax() const { return static_cast<int>(a.size()) - 1; }
};

struct TransformValues {
  double ff = 0.0;
  double cf = 0.0;
  double sf = 0.0;
};

CircleRestriction restrict_field(const SphereField& field, const UnitVector& omega, const UnitVector& pole,
                                 int circle_nodes = kDefaultCircleNodes);

/// Funk transform. Independent of the reference direction, so a fixed world
/// axis replaces `pole` when omega is parallel to it.
double funk(const SphereField& field, const UnitVector& omega, const UnitVector& pole = north_pole(),
            int circle_nodes = kDefaultCircleNodes);

double weighted_cos(const SphereField& field, const UnitVector& omega, const UnitVector& pole = north_pole(),
                    int circle_nodes = kDefaultCircleNodes);
double weighted_sin(const SphereField& field, const UnitVector& omega, const UnitVector& pole = north_pole(),
                    int circle_nodes = kDefaultCircleNodes);

/// C_Omega f(omega): the cosine-weighted transform with phi measured from the
/// projection of omega_point onto S_omega.
double weighted_cos_about(const SphereField& field, const UnitVector& omega, const UnitVector& omega_point,
                          int circle_nodes = kDefaultCircleNodes);

/// (Ff, Cf, Sf) from a single restriction.
TransformValues transform_values(const SphereField& field, const UnitVector& omega,
                                 const UnitVector& pole = north_pole(), int circle_nodes = kDefaultCircleNodes);
TransformValues transform_values(const CircleRestriction& restriction);

/// Throws TooFewNodes unless M >= 2 nmax + 2.
FourierProfile fourier_coeffs(const CircleRestriction& restriction, int nmax);
FourierProfile fourier_coeffs(const SphereField& field, const UnitVector& omega, const UnitVector& pole, int nmax,
                              int circle_nodes = kDefaultCircleNodes);

/// (f+, f-) with f+(w) = (f(w) + f(-w)) / 2 and f-(w) = (f(w) - f(-w)) / 2.
std::pair<SphereField, SphereField> even_odd_split(const SphereField& field);

/// Ff, Cf, Sf sampled at nu_i = i (pi/2) / nu_count (i = 1..nu_count) and
/// tau_j = 2 pi j / tau_count, relative to `pole`. Row-major, tau fastest.
struct TransformGrid {
  UnitVector pole;
  std::vector<double> nu_nodes;
  std::vector<double> tau_nodes;
  std::vector<double> ff;
  std::vector<double> cf;
  std::vector<double> sf;
  int circle_nodes = kDefaultCircleNodes;

  std::size_t nu_count() const { return nu_nodes.size(); }
  std::size_t tau_count() const { return tau_nodes.size(); }
  std::size_t index(std::size_t i, std::size_t j) const { return i * tau_nodes.size() + j; }

  /// Throws InvalidArgument when shapes disagree or a value is not finite.
  void validate() const;
};

/// Throws InvalidArgument if a count is below 8; a failing cell is rethrown
/// with its (i, j) position in the message.
TransformGrid transform_grid(const SphereField& field, const UnitVector& pole, int nu_count, int tau_count,
                             int circle_nodes = kDefaultCircleNodes);

inline constexpr double kDefaultDifferenceStep = 1e-3;

/// Left-hand side of the consistency recurrence for the Fourier coefficients
/// at (nu, tau), with partial derivatives replaced by central differences:
///   n = 1: a2' + 2 a2 cot(nu) - 2 a0' - (db2/dtau) / sin(nu)
///   n > 1: a_{n+1}' - a_{n-1}' + ((n+1) a_{n+1} + (n-1) a_{n-1}) cot(nu)
///          - (db_{n+1}/dtau + db_{n-1}/dtau) / sin(nu)
/// where ' is d/dnu. Zero for exact derivatives of a C1 field.
/// Throws OutOfDomain unless n >= 1, h < nu < pi/2 - h and the field is at least C1.
double recurrence_residual(const SphereField& field, const UnitVector& pole, int n, double nu, double tau,
                           double h = kDefaultDifferenceStep, int circle_nodes = kDefaultCircleNodes);

}  // namespace funk
