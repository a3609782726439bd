#include "funk/inversion.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "funk/error.hpp"

namespace funk {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Lagrange weights for nodes -1, 0, 1, 2 at position t.
std::array<double, 4> lagrange4(double t) {
  return {-t * (t - 1.0) * (t - 2.0) / 6.0, (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0,
          -(t + 1.0) * t * (t - 2.0) / 2.0, (t + 1.0) * t * (t - 1.0) / 6.0};
}

bool is_same_point(const UnitVector& a, const UnitVector& b) { return dot(a, b) >= 1.0 - 1e-15; }

bool uniform_from_zero(const std::vector<double>& nodes, double end) {
  const auto n = static_cast<double>(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (std::abs(nodes[i] - end * static_cast<double>(i + 1) / n) > 1e-12) return false;
  }
  return true;
}

}  // namespace

double AveragedProfiles::integrate(int which, const std::function<double(double)>& weight) const {
  const auto& values = which == 0 ? fbar : cbar;
  if (layout == ProfileLayout::GaussLegendre) {
    double sum = 0.0;
    for (std::size_t i = 0; i < nu.size(); ++i) {
      if (weights[i] != 0.0) sum += weights[i] * weight(nu[i]) * values[i];
    }
    return sum;
  }
  return integrate_interpolated(ProfileGrid{nu, values}, weight);
}

void AveragedProfiles::validate() const {
  if (nu.empty() || fbar.size() != nu.size() || cbar.size() != nu.size()) {
    throw Error(ErrorKind::InvalidArgument, "averaged profile lengths do not match");
  }
  if (layout == ProfileLayout::GaussLegendre && weights.size() != nu.size()) {
    throw Error(ErrorKind::InvalidArgument, "Gauss-Legendre profile needs one weight per node");
  }
  if (std::abs(nu.back() - kHalfPi) > 1e-12) {
    throw Error(ErrorKind::InvalidArgument, "averaged profiles must end at pi/2");
  }
  for (std::size_t i = 0; i < nu.size(); ++i) {
    if (!std::isfinite(fbar[i]) || !std::isfinite(cbar[i])) {
      throw Error(ErrorKind::InvalidArgument, "averaged profile has a non-finite value");
    }
  }
}

AveragedProfiles average_profiles(const TransformGrid& grid) {
  grid.validate();
  const std::size_t t = grid.tau_count();
  for (std::size_t j = 0; j < t; ++j) {
    if (std::abs(grid.tau_nodes[j] - kTwoPi * static_cast<double>(j) / static_cast<double>(t)) > 1e-12) {
      throw Error(ErrorKind::NonuniformGrid, "tau nodes must be 2 pi j / T");
    }
  }
  if (!uniform_from_zero(grid.nu_nodes, kHalfPi)) {
    throw Error(ErrorKind::NonuniformGrid, "nu nodes must be i (pi/2) / N, i = 1..N");
  }
  AveragedProfiles p;
  p.layout = ProfileLayout::Tabulated;
  p.nu = grid.nu_nodes;
  p.fbar.resize(grid.nu_count());
  p.cbar.resize(grid.nu_count());
  for (std::size_t i = 0; i < grid.nu_count(); ++i) {
    double f = 0.0;
    double c = 0.0;
    for (std::size_t j = 0; j < t; ++j) {
      f += grid.ff[grid.index(i, j)];
      c += grid.cf[grid.index(i, j)];
    }
    p.fbar[i] = kTwoPi * f / static_cast<double>(t);
    p.cbar[i] = kTwoPi * c / static_cast<double>(t);
  }
  return p;
}

TransformValues FieldTransformData::at(const UnitVector& omega) const {
  return transform_values(field_, omega, pole_, circle_nodes_);
}

GridTransformData::GridTransformData(TransformGrid grid) : grid_(std::move(grid)) {
  grid_.validate();
  if (grid_.nu_count() < 4 || grid_.tau_count() < 4) {
    throw Error(ErrorKind::InvalidArgument, "transform grid too small to interpolate");
  }
  if (!uniform_from_zero(grid_.nu_nodes, kHalfPi)) {
    throw Error(ErrorKind::NonuniformGrid, "nu nodes must be i (pi/2) / N, i = 1..N");
  }
  const std::size_t t = grid_.tau_count();
  for (std::size_t j = 0; j < t; ++j) {
    if (std::abs(grid_.tau_nodes[j] - kTwoPi * static_cast<double>(j) / static_cast<double>(t)) > 1e-12) {
      throw Error(ErrorKind::NonuniformGrid, "tau nodes must be 2 pi j / T");
    }
  }
}

TransformValues GridTransformData::at(const UnitVector& omega) const {
  SphericalCoords c = vec_to_sph(grid_.pole, omega);
  double sin_sign = 1.0;
  if (c.nu > kHalfPi) {
    c.nu = std::numbers::pi - c.nu;
    c.tau = wrap_two_pi(c.tau + std::numbers::pi);
    sin_sign = -1.0;
  }
  const auto rows = static_cast<long>(grid_.nu_count());
  const auto cols = static_cast<long>(grid_.tau_count());
  // row r sits at (r + 1) (pi/2) / N; windows are clipped to the grid in nu, periodic in tau
  const double di = c.nu * static_cast<double>(rows) / kHalfPi - 1.0;
  const long i0 = std::clamp(static_cast<long>(std::floor(di)), 1L, rows - 3);
  const double dj = c.tau * static_cast<double>(cols) / kTwoPi;
  const long j0 = static_cast<long>(std::floor(dj));
  const auto wi = lagrange4(di - static_cast<double>(i0));
  const auto wj = lagrange4(dj - static_cast<double>(j0));
  std::array<std::size_t, 4> ii{};
  std::array<std::size_t, 4> jj{};
  for (long k = 0; k < 4; ++k) {
    ii[static_cast<std::size_t>(k)] = static_cast<std::size_t>(i0 - 1 + k);
    jj[static_cast<std::size_t>(k)] = static_cast<std::size_t>(((j0 - 1 + k) % cols + cols) % cols);
  }
  auto interp = [&](const std::vector<double>& m) {
    double sum = 0.0;
    for (std::size_t a = 0; a < 4; ++a) {
      double row = 0.0;
      for (std::size_t b = 0; b < 4; ++b) row += wj[b] * m[grid_.index(ii[a], jj[b])];
      sum += wi[a] * row;
    }
    return sum;
  };
  return {interp(grid_.ff), interp(grid_.cf), sin_sign * interp(grid_.sf)};
}

namespace {

// Fbar and Cbar about `point` at one polar distance.
std::pair<double, double> tau_average(const TransformData& data, const UnitVector& point, double nu, int tau_count) {
  const bool aligned = is_same_point(point, data.pole());
  double f = 0.0;
  double c = 0.0;
  for (int j = 0; j < tau_count; ++j) {
    const double tau = kTwoPi * j / tau_count;
    UnitVector omega = sph_to_vec(point, nu, tau);
    double shift = 1e-6;
    while (std::abs(dot(omega, data.pole())) >= kDegeneracyThreshold) {
      omega = sph_to_vec(point, nu, tau + shift);
      shift *= 2.0;
    }
    const TransformValues v = data.at(omega);
    f += v.ff;
    if (aligned) {
      c += v.cf;
    } else {
      const double alpha = alpha_angle(omega, point, data.pole());
      c += std::cos(alpha) * v.cf + std::sin(alpha) * v.sf;
    }
  }
  return {kTwoPi * f / tau_count, kTwoPi * c / tau_count};
}

void fill_profiles(AveragedProfiles& p, const TransformData& data, const UnitVector& point, int tau_count) {
  if (tau_count < 8) throw Error(ErrorKind::InvalidArgument, "tau_count must be >= 8");
  p.fbar.resize(p.nu.size());
  p.cbar.resize(p.nu.size());
  const auto count = static_cast<long long>(p.nu.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const auto [f, c] = tau_average(data, point, p.nu[k], tau_count);
    p.fbar[k] = f;
    p.cbar[k] = c;
  }
}

}  // namespace

AveragedProfiles gauss_profiles(const TransformData& data, const UnitVector& point, int gauss_order, int tau_count) {
  if (gauss_order < 2) throw Error(ErrorKind::InvalidArgument, "Gauss-Legendre order must be >= 2");
  AveragedProfiles p;
  p.layout = ProfileLayout::GaussLegendre;
  auto [x, w] = GaussLegendreRule(gauss_order).mapped(0.0, kHalfPi);
  p.nu = std::move(x);
  p.weights = std::move(w);
  p.nu.push_back(kHalfPi);
  p.weights.push_back(0.0);
  fill_profiles(p, data, point, tau_count);
  return p;
}

AveragedProfiles uniform_profiles(const TransformData& data, const UnitVector& point, int node_count, int tau_count) {
  if (node_count < 4) throw Error(ErrorKind::InvalidArgument, "node_count must be >= 4");
  AveragedProfiles p;
  p.layout = ProfileLayout::Tabulated;
  for (int i = 1; i <= node_count; ++i) p.nu.push_back(kHalfPi * i / node_count);
  fill_profiles(p, data, point, tau_count);
  return p;
}

double abar_via_representation(const CoeffTable& table, const AveragedProfiles& profiles, int n) {
  profiles.validate();
  if (n < 0) throw Error(ErrorKind::OutOfRange, "abar index must be >= 0");
  if (n == 0) return profiles.fbar_end();
  const int k = (n + 1) / 2;
  if (k > table.kmax()) {
    throw Error(ErrorKind::OutOfRange, "abar_" + std::to_string(n) + " needs k = " + std::to_string(k) +
                                           " > kmax = " + std::to_string(table.kmax()));
  }
  const auto nodes = static_cast<int>(profiles.size());
  const bool sufficient = profiles.layout == ProfileLayout::GaussLegendre ? nodes - 1 >= 2 * n + 2 : nodes >= 16 * n;
  if (!sufficient) {
    throw Error(ErrorKind::InsufficientProfile,
                std::to_string(nodes) + " profile nodes are too few for abar_" + std::to_string(n));
  }
  if (n == 1) return 2.0 * profiles.cbar_end();
  if (n % 2 == 0) {
    const double integral =
        profiles.integrate(0, [&](double u) { return table.even_term(k, std::sin(u)) * std::cos(u); });
    return 2.0 * profiles.fbar_end() + integral;
  }
  const double integral =
      profiles.integrate(1, [&](double u) { return table.odd_term(k, std::sin(u)) * std::cos(u); });
  return 2.0 * profiles.cbar_end() + 2.0 * integral;
}

std::vector<std::vector<double>> abar_via_ode(const AveragedProfiles& profiles, int nmax) {
  profiles.validate();
  if (profiles.size() < 64) {
    throw Error(ErrorKind::InsufficientProfile, "the ODE oracle needs at least 64 profile nodes");
  }
  if (nmax < 0) throw Error(ErrorKind::InvalidArgument, "nmax must be >= 0");
  const std::size_t count = profiles.size();
  std::vector<std::vector<double>> abar(static_cast<std::size_t>(std::max(nmax, 1)) + 1);
  abar[0] = profiles.fbar;
  abar[1] = profiles.cbar;
  for (double& v : abar[1]) v *= 2.0;

  auto step = [&](const std::vector<double>& prev, int weight_power, double scale, double carry) {
    const ProfileGrid g = cumulative_weighted_integral(ProfileGrid{profiles.nu, prev}, weight_power);
    std::vector<double> next(count);
    for (std::size_t i = 0; i < count; ++i) {
      const double s = std::sin(profiles.nu[i]);
      next[i] = carry * prev[i] - scale * g.values[i] / std::pow(s, weight_power + 1);
    }
    return next;
  };
  for (int n = 1; n + 1 <= nmax; ++n) {
    const auto idx = static_cast<std::size_t>(n + 1);
    if (n == 1) {
      // (sin^2 abar_2)' = 2 sin^2 abar_0'
      abar[idx] = step(abar[0], 1, 4.0, 2.0);
    } else {
      // (sin^{n+1} abar_{n+1})' = sin^{n+1} abar_{n-1}' - (n-1) sin^n cos abar_{n-1}
      abar[idx] = step(abar[idx - 2], n, 2.0 * n, 1.0);
    }
  }
  abar.resize(static_cast<std::size_t>(nmax) + 1);
  return abar;
}

double grouped_partial_sum(const CoeffTable& table, const AveragedProfiles& profiles, int n) {
  profiles.validate();
  if (n < 1 || n > table.kmax()) throw Error(ErrorKind::OutOfRange, "n must be in [1, kmax]");
  const double linear = profiles.fbar_end() + 2.0 * n * (profiles.cbar_end() + profiles.fbar_end());
  const double odd = profiles.integrate(1, [&](double u) { return 2.0 * table.p1(n, std::sin(u)) * std::cos(u); });
  const double even = profiles.integrate(0, [&](double u) { return table.p0(n, std::sin(u)) * std::cos(u); });
  return linear + odd + even;
}

namespace {

void finish_report(ReconstructionReport& r, const CoeffTable& table, const AveragedProfiles& profiles) {
  const auto n = static_cast<std::size_t>(r.n_used);
  const double s_n = r.partial_sums[n - 1];
  const double s_prev = n >= 2 ? r.partial_sums[n - 2] : r.fbar_half_pi;
  r.estimate = s_n / kTwoPi;
  r.last_term = std::abs(r.odd_terms[n - 1] + r.even_terms[n - 1]);
  r.cauchy_gap = std::abs(s_n - s_prev) / kTwoPi;
  r.grouped_estimate = grouped_partial_sum(table, profiles, r.n_used) / kTwoPi;
}

void add_pair(ReconstructionReport& r, const CoeffTable& table, const AveragedProfiles& profiles, int k) {
  const double odd = abar_via_representation(table, profiles, 2 * k - 1);
  const double even = abar_via_representation(table, profiles, 2 * k);
  const double prev = r.partial_sums.empty() ? r.fbar_half_pi : r.partial_sums.back();
  r.odd_terms.push_back(odd);
  r.even_terms.push_back(even);
  r.partial_sums.push_back(prev + odd + even);
  r.n_used = k;
}

ReconstructionReport start_report(const AveragedProfiles& profiles) {
  profiles.validate();
  ReconstructionReport r;
  r.fbar_half_pi = profiles.fbar_end();
  r.cbar_half_pi = profiles.cbar_end();
  return r;
}

}  // namespace

ReconstructionReport reconstruct_at_pole(const CoeffTable& table, const AveragedProfiles& profiles, int n) {
  if (n < 1 || n > table.kmax()) {
    throw Error(ErrorKind::OutOfRange,
                "n = " + std::to_string(n) + " outside [1, kmax = " + std::to_string(table.kmax()) + "]");
  }
  ReconstructionReport r = start_report(profiles);
  for (int k = 1; k <= n; ++k) add_pair(r, table, profiles, k);
  r.stop_reason = "fixed";
  finish_report(r, table, profiles);
  return r;
}

ReconstructionReport reconstruct_at_pole_auto(const CoeffTable& table, const AveragedProfiles& profiles, double tol,
                                              int cap) {
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be > 0");
  if (cap < 1 || cap > table.kmax()) {
    throw Error(ErrorKind::OutOfRange, "cap must be in [1, kmax = " + std::to_string(table.kmax()) + "]");
  }
  ReconstructionReport r = start_report(profiles);
  r.stop_reason = "cap";
  for (int k = 1; k <= cap; ++k) {
    add_pair(r, table, profiles, k);
    const double prev = k >= 2 ? r.partial_sums[static_cast<std::size_t>(k - 2)] : r.fbar_half_pi;
    if (k >= 2 && std::abs(r.partial_sums.back() - prev) / kTwoPi < tol) {
      r.stop_reason = "tolerance";
      break;
    }
  }
  finish_report(r, table, profiles);
  return r;
}

AveragedProfiles profiles_about(const TransformData& data, const UnitVector& point,
                                const ReconstructionOptions& options) {
  if (const TransformGrid* grid = data.grid(); grid != nullptr && is_same_point(point, grid->pole)) {
    return average_profiles(*grid);
  }
  return gauss_profiles(data, point, options.gauss_order, options.tau_count);
}

ReconstructionReport reconstruct_at_point(const CoeffTable& table, const TransformData& data,
                                          const UnitVector& point, const ReconstructionOptions& options) {
  const AveragedProfiles profiles = profiles_about(data, point, options);
  if (options.n > 0) return reconstruct_at_pole(table, profiles, options.n);
  return reconstruct_at_pole_auto(table, profiles, options.tol, options.cap);
}

ConvergenceReport convergence_report(const CoeffTable& table, const AveragedProfiles& profiles, int n_max,
                                     std::optional<double> truth, double stop_tol) {
  if (n_max < 1 || n_max > table.kmax()) {
    throw Error(ErrorKind::OutOfRange, "n_max must be in [1, kmax = " + std::to_string(table.kmax()) + "]");
  }
  ReconstructionReport r = start_report(profiles);
  ConvergenceReport out;
  for (int k = 1; k <= n_max; ++k) {
    add_pair(r, table, profiles, k);
    const double s = r.partial_sums.back();
    const double prev = k >= 2 ? r.partial_sums[static_cast<std::size_t>(k - 2)] : r.fbar_half_pi;
    ConvergenceRow row;
    row.n = k;
    row.estimate = s / kTwoPi;
    row.cauchy_gap = std::abs(s - prev) / kTwoPi;
    if (truth) row.abs_error = std::abs(row.estimate - *truth);
    out.rows.push_back(row);
    if (stop_tol > 0.0 && k >= 2 && row.cauchy_gap < stop_tol) {
      out.stopped_on_tolerance = true;
      break;
    }
  }
  const auto& rows = out.rows;
  if (rows.size() >= 5) {
    out.gap_tail_decreasing = true;
    for (std::size_t i = rows.size() - 4; i < rows.size(); ++i) {
      if (!(rows[i].cauchy_gap < rows[i - 1].cauchy_gap)) out.gap_tail_decreasing = false;
    }
  }
  if (rows.size() >= 3 && !out.stopped_on_tolerance) {
    const std::size_t last = rows.size() - 1;
    out.stagnated = rows[last].cauchy_gap >= rows[last - 2].cauchy_gap && rows[last].cauchy_gap > stop_tol;
  }
  return out;
}

}  // namespace funk
