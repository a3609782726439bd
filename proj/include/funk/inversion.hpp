#pragma once

// Reconstruction of f at a point from the two data Funk transform.
//
// With the reconstruction point taken as the pole and abar_n(nu) the azimuthal
// integral of the n-th Fourier coefficient of the restrictions at polar
// distance nu,
//
//   2 pi f(N) = Fbar(pi/2) + sum_{k>=1} [abar_{2k-1}(pi/2) + abar_{2k}(pi/2)],
//
// where abar_0 = Fbar, abar_1 = 2 Cbar, and the higher averages come from the
// coefficient tables (representation path) or from integrating the averaged
// ODE system step by step (oracle path).

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "funk/coefficients.hpp"
#include "funk/geometry.hpp"
#include "funk/quadrature.hpp"
#include "funk/sphere_field.hpp"
#include "funk/transforms.hpp"

namespace funk {

enum class ProfileLayout {
  GaussLegendre,  // Gauss-Legendre nodes on (0, pi/2) followed by pi/2
  Tabulated,      // arbitrary increasing nodes ending at pi/2, integrated through a cubic interpolant
};

/// Azimuthal integrals Fbar(nu) = int_0^{2pi} Ff(nu, tau) dtau and
/// Cbar(nu) = int_0^{2pi} Cf(nu, tau) dtau at polar distances nu in (0, pi/2].
struct AveragedProfiles {
  ProfileLayout layout = ProfileLayout::Tabulated;
  std::vector<double> nu;
  std::vector<double> fbar;
  std::vector<double> cbar;
  std::vector<double> weights;  // Gauss-Legendre weights, one per node (0 for pi/2)

  double fbar_end() const { return fbar.back(); }
  double cbar_end() const { return cbar.back(); }
  std::size_t size() const { return nu.size(); }

  /// int_0^{pi/2} weight(u) Fbar(u) du (which = 0) or ... Cbar(u) du (which = 1).
  double integrate(int which, const std::function<double(double)>& weight) const;

  /// Throws InvalidArgument on length mismatch, non-finite values or a last node other than pi/2.
  void validate() const;
};

/// Periodic-trapezoid tau averages of a grid relative to its own pole.
/// Throws NonuniformGrid unless tau_j = 2 pi j / T and nu_i = i (pi/2) / N.
AveragedProfiles average_profiles(const TransformGrid& grid);

/// Ff, Cf, Sf relative to a fixed pole, evaluable at any circle pole omega.
class TransformData {
 public:
  virtual ~TransformData() = default;
  virtual const UnitVector& pole() const = 0;
  virtual TransformValues at(const UnitVector& omega) const = 0;
  /// The underlying grid when the data is tabulated.
  virtual const TransformGrid* grid() const { return nullptr; }
};

/// Transforms computed by quadrature from a known field.
class FieldTransformData final : public TransformData {
 public:
  FieldTransformData(SphereField field, UnitVector pole = north_pole(), int circle_nodes = kDefaultCircleNodes)
      : field_(std::move(field)), pole_(pole), circle_nodes_(circle_nodes) {}

  const UnitVector& pole() const override { return pole_; }
  TransformValues at(const UnitVector& omega) const override;

 private:
  SphereField field_;
  UnitVector pole_;
  int circle_nodes_;
};

/// Tensor 4-point Lagrange interpolation of a TransformGrid (periodic in tau,
/// one-sided windows at the first and last rows). Circle poles below the
/// grid's equator use omega -> -omega (Ff, Cf unchanged, Sf changes sign).
/// Needs at least 4 rows and 4 columns.
class GridTransformData final : public TransformData {
 public:
  explicit GridTransformData(TransformGrid grid);

  const UnitVector& pole() const override { return grid_.pole; }
  TransformValues at(const UnitVector& omega) const override;
  const TransformGrid* grid() const override { return &grid_; }

 private:
  TransformGrid grid_;
};

inline constexpr int kDefaultProfileTauCount = 64;

/// Profiles about `point` at Gauss-Legendre nodes (plus pi/2).
/// C_point f is obtained from (Cf, Sf) as cos(alpha) Cf + sin(alpha) Sf.
/// A circle pole that is degenerate for the data pole is rotated about
/// `point` by 1e-6 rad (doubling until it is not).
AveragedProfiles gauss_profiles(const TransformData& data, const UnitVector& point,
                                int gauss_order = kDefaultGaussOrder, int tau_count = kDefaultProfileTauCount);

/// Profiles about `point` at nu_i = i (pi/2) / node_count, i = 1..node_count.
AveragedProfiles uniform_profiles(const TransformData& data, const UnitVector& point,
                                  int node_count = kDefaultCumulativeNodes, int tau_count = kDefaultProfileTauCount);

/// abar_n(pi/2) from the coefficient tables. Throws OutOfRange when n needs
/// k > kmax, InsufficientProfile when the profile is too coarse for n
/// (tabulated: nodes < 16 n; Gauss-Legendre: order < 2 n + 2).
double abar_via_representation(const CoeffTable& table, const AveragedProfiles& profiles, int n);

/// abar_0..abar_nmax on the profile nodes from the averaged ODE system,
/// integrated one index at a time with zero data at nu = 0. Row n holds abar_n.
/// Throws InsufficientProfile with fewer than 64 nodes.
std::vector<std::vector<double>> abar_via_ode(const AveragedProfiles& profiles, int nmax);

struct ReconstructionReport {
  std::vector<double> partial_sums;  // S_1..S_n
  std::vector<double> odd_terms;     // abar_{2k-1}(pi/2), k = 1..n
  std::vector<double> even_terms;    // abar_{2k}(pi/2), k = 1..n
  double fbar_half_pi = 0.0;
  double cbar_half_pi = 0.0;
  double estimate = 0.0;          // S_n / (2 pi)
  double grouped_estimate = 0.0;  // same partial sum through P_n^0, P_n^1
  int n_used = 0;
  double last_term = 0.0;   // |abar_{2n-1} + abar_{2n}| at pi/2
  double cauchy_gap = 0.0;  // |S_n - S_{n-1}| / (2 pi), S_0 = Fbar(pi/2)
  std::string stop_reason;  // "fixed", "tolerance" or "cap"
};

/// Term-wise partial sum S_n. Throws OutOfRange unless 1 <= n <= kmax.
ReconstructionReport reconstruct_at_pole(const CoeffTable& table, const AveragedProfiles& profiles, int n);

/// Adds pairs until the Cauchy gap drops below `tol` (checked from n = 2) or n = cap.
ReconstructionReport reconstruct_at_pole_auto(const CoeffTable& table, const AveragedProfiles& profiles,
                                              double tol = 1e-8, int cap = 20);

/// S_n = Fbar(pi/2) + 2n (Cbar(pi/2) + Fbar(pi/2))
///       + int_0^{pi/2} (2 P_n^1(u) Cbar(u) + P_n^0(u) Fbar(u)) cos u du.
double grouped_partial_sum(const CoeffTable& table, const AveragedProfiles& profiles, int n);

struct ReconstructionOptions {
  int n = 0;  // 0 selects auto mode
  double tol = 1e-8;
  int cap = 20;
  int gauss_order = kDefaultGaussOrder;
  int tau_count = kDefaultProfileTauCount;
};

/// Profiles about `point` from the data, then reconstruct_at_pole. Tabulated
/// data whose pole is `point` is averaged directly without interpolation.
ReconstructionReport reconstruct_at_point(const CoeffTable& table, const TransformData& data,
                                          const UnitVector& point, const ReconstructionOptions& options = {});
AveragedProfiles profiles_about(const TransformData& data, const UnitVector& point,
                                const ReconstructionOptions& options = {});

struct ConvergenceRow {
  int n = 0;
  double estimate = 0.0;
  std::optional<double> abs_error;
  double cauchy_gap = 0.0;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  bool gap_tail_decreasing = false;  // strictly decreasing over the final 5 rows
  bool stagnated = false;            // gap did not shrink over the last 3 rows and is above stop_tol
  bool stopped_on_tolerance = false;
};

/// One partial sum per n = 1..n_max, stopping after the first n >= 2 whose gap
/// is below stop_tol (stop_tol <= 0 reports every n).
ConvergenceReport convergence_report(const CoeffTable& table, const AveragedProfiles& profiles, int n_max,
                                     std::optional<double> truth = std::nullopt, double stop_tol = 1e-8);

}  // namespace funk
