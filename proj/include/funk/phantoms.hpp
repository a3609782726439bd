#pragma once

// Analytic test functions with known point values and transforms.
//
// Catalog (names accepted by make_phantom, parameters as name:key=value,...):
//   const1                            f = 1
//   cos_nu                            f = z
//   cos3_nu                           f = z^3
//   even_harm2                        f = (3 z^2 - 1)/2 + x y
//   mixed                             f = 1 + z + (3 z^2 - 1)/2 + x y
//   bandlimited_random:L=4,seed=1     sum_{l<=L} sum_m a_lm Y_lm, a_lm uniform in [-1, 1)
//   bump:theta=0.3,phi=0.5,width=0.5  exp(-(1 - <x, c>)/w^2), c at polar angle theta, azimuth phi
//
// Y_lm are the orthonormal real spherical harmonics (Condon-Shortley phase,
// sqrt(2) cos(m phi) for m > 0 and sqrt(2) sin(|m| phi) for m < 0).
// The random coefficients are drawn in the order l = 0..L, m = -l..l from a
// std::mt19937_64 seeded with `seed`, each raw 64-bit output x mapped to
// ((x >> 11) * 2^-53) * 2 - 1.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "funk/sphere_field.hpp"
#include "funk/transforms.hpp"

namespace funk {

struct KnownTransforms {
  /// Ff(omega); empty when no closed form is available.
  std::function<double(const UnitVector& omega)> ff;
  /// (Cf, Sf) at omega relative to pole; empty when unknown.
  std::function<std::pair<double, double>(const UnitVector& omega, const UnitVector& pole)> cf_sf;
};

struct Phantom {
  std::string name;  // canonical spec, e.g. "bump:theta=0.3,phi=0.5,width=0.5"
  SphereField field;
  std::function<double(const UnitVector&)> truth;
  KnownTransforms known;
  std::optional<int> band_limit;  // max Fourier degree of every restriction
};

/// One instance of every phantom family with default parameters.
std::vector<Phantom> phantom_catalog();

/// Parses `name[:key=value,...]`. Throws UnknownPhantom for an unknown name
/// and InvalidArgument for a bad or unknown parameter.
Phantom make_phantom(const std::string& spec);

Phantom bandlimited_random(int L, std::uint64_t seed);
Phantom bump(double theta, double phi, double width);

/// Coefficients a_lm of bandlimited_random in generation order.
std::vector<double> random_harmonic_coefficients(int L, std::uint64_t seed);

/// Real orthonormal Y_lm at a unit vector, for -l <= m <= l.
double real_spherical_harmonic(int l, int m, const UnitVector& w);

struct PhantomReport {
  std::string name;
  double max_truth_deviation = 0.0;
  std::optional<double> max_ff_deviation;
  std::optional<double> max_cf_deviation;  // max over Cf and Sf
  double max_odd_funk = 0.0;               // |F(f^-)|
  std::optional<double> max_high_harmonic;  // |a_n|, |b_n| for n > band_limit
  std::vector<std::string> failures;
  bool passed() const { return failures.empty(); }
};

/// Compares the field with its truth at `samples` random points and the
/// quadrature transforms (M circle nodes) with the known closed forms.
PhantomReport verify_phantom(const Phantom& p, int circle_nodes = kDefaultCircleNodes, int samples = 100,
                             std::uint64_t seed = 7);

/// Uniform [-1, 1) from one raw generator output, as used by the random phantom.
double unit_interval_pm1(std::uint64_t raw);

/// Uniformly distributed point on the sphere: z = u1, phi = pi (u2 + 1).
UnitVector random_unit_vector(std::mt19937_64& gen);

}  // namespace funk
