#pragma once

// Self-check suites run by `funk verify`.

#include <cstdint>
#include <string>
#include <vector>

#include "funk/coefficients.hpp"
#include "funk/quadrature.hpp"

namespace funk {

struct SuiteResult {
  std::string name;
  int passed = 0;
  int total = 0;
  double worst = 0.0;  // largest deviation seen (suite-specific meaning)
  std::vector<std::string> failures;
  bool ok() const { return total > 0 && passed == total; }
};

/// verify_phantom over the catalog.
SuiteResult suite_phantoms(int circle_nodes = kDefaultCircleNodes);

/// Exact sum identities of every table row.
SuiteResult suite_identities(const CoeffTable& table);

/// |C_Omega f(omega) - (cos alpha Cf + sin alpha Sf)| <= 1e-10 for `trials`
/// random (Omega, omega) pairs split between cos3_nu and bandlimited_random:L=4,seed=1.
SuiteResult suite_theorem3(int trials = 100, std::uint64_t seed = 2024, int circle_nodes = kDefaultCircleNodes);

struct ResidualSweep {
  int n = 0;
  std::vector<double> h;
  std::vector<double> residual;
  std::vector<double> ratios;  // residual(h)/residual(h/2) above the floor
};

/// Residuals of the consistency recurrence on the mixed phantom for
/// h = 0.1 / 2^j, j = 0..steps-1, at (nu, tau) = (0.7, 0.4).
ResidualSweep residual_sweep(int n, int steps = 7, int circle_nodes = kDefaultCircleNodes);

inline constexpr double kResidualFloor = 1e-9;

/// Ratios in [3.5, 4.5] for n = 1, 2, 3 until the residual reaches the floor.
SuiteResult suite_recurrence(int circle_nodes = kDefaultCircleNodes);

/// |abar_n (representation) - abar_n (ODE)| <= 1e-6 (1 + |value|) at pi/2 for
/// n <= 12 on cos3_nu, cos_nu, mixed and bandlimited_random:L=4,seed=1.
SuiteResult suite_oracle(const CoeffTable& table, int circle_nodes = kDefaultCircleNodes);

}  // namespace funk
