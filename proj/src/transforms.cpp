#include "funk/transforms.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "funk/error.hpp"

namespace funk {

namespace {

// cos/sin of 2 pi r / M for r = 0..M-1; phi_j = -pi + 2 pi j / M so
// cos(n phi_j) = (-1)^n cos(2 pi (n j mod M) / M).
struct TrigTable {
  int m = 0;
  std::vector<double> c;
  std::vector<double> s;
};

const TrigTable& trig_table(int m) {
  thread_local TrigTable table;
  if (table.m != m) {
    table.m = m;
    table.c.resize(static_cast<std::size_t>(m));
    table.s.resize(static_cast<std::size_t>(m));
    for (int r = 0; r < m; ++r) {
      const double t = 2.0 * std::numbers::pi * r / m;
      table.c[static_cast<std::size_t>(r)] = std::cos(t);
      table.s[static_cast<std::size_t>(r)] = std::sin(t);
    }
  }
  return table;
}

void check_nodes(int circle_nodes) {
  if (circle_nodes < 4) {
    throw Error(ErrorKind::TooFewNodes, "circle rule needs at least 4 nodes, got " + std::to_string(circle_nodes));
  }
  if (circle_nodes % 2 != 0) throw Error(ErrorKind::InvalidArgument, "circle node count must be even");
}

CircleRestriction sample_circle(const SphereField& field, const GreatCircleFrame& frame, int circle_nodes) {
  check_nodes(circle_nodes);
  const TrigTable& t = trig_table(circle_nodes);
  std::vector<double> values(static_cast<std::size_t>(circle_nodes));
  const Vec3& r = frame.e_ref.vec();
  const Vec3& q = frame.e_quad.vec();
  for (std::size_t j = 0; j < values.size(); ++j) {
    values[j] = field(UnitVector(-t.c[j] * r - t.s[j] * q));
  }
  return {frame, PeriodicSamples(std::move(values))};
}

// First-harmonic integrals (1/2pi) int cos(phi) g, (1/2pi) int sin(phi) g.
std::pair<double, double> first_harmonic(const PeriodicSamples& samples) {
  const int m = static_cast<int>(samples.size());
  const TrigTable& t = trig_table(m);
  double c = 0.0;
  double s = 0.0;
  for (std::size_t j = 0; j < samples.size(); ++j) {
    c -= t.c[j] * samples[j];
    s -= t.s[j] * samples[j];
  }
  return {c / m, s / m};
}

}  // namespace

CircleRestriction restrict_field(const SphereField& field, const UnitVector& omega, const UnitVector& pole,
                                 int circle_nodes) {
  return sample_circle(field, great_circle_frame(omega, pole), circle_nodes);
}

double funk(const SphereField& field, const UnitVector& omega, const UnitVector& pole, int circle_nodes) {
  UnitVector reference = pole;
  if (std::abs(dot(omega, pole)) >= kDegeneracyThreshold) {
    reference = std::abs(omega.x()) < 0.5 ? UnitVector(1.0, 0.0, 0.0) : UnitVector(0.0, 1.0, 0.0);
  }
  const CircleRestriction r = restrict_field(field, omega, reference, circle_nodes);
  return periodic_trapezoid(r.samples) / (2.0 * std::numbers::pi);
}

TransformValues transform_values(const CircleRestriction& restriction) {
  const auto [c, s] = first_harmonic(restriction.samples);
  return {periodic_trapezoid(restriction.samples) / (2.0 * std::numbers::pi), c, s};
}

TransformValues transform_values(const SphereField& field, const UnitVector& omega, const UnitVector& pole,
                                 int circle_nodes) {
  return transform_values(restrict_field(field, omega, pole, circle_nodes));
}

double weighted_cos(const SphereField& field, const UnitVector& omega, const UnitVector& pole, int circle_nodes) {
  return first_harmonic(restrict_field(field, omega, pole, circle_nodes).samples).first;
}

double weighted_sin(const SphereField& field, const UnitVector& omega, const UnitVector& pole, int circle_nodes) {
  return first_harmonic(restrict_field(field, omega, pole, circle_nodes).samples).second;
}

double weighted_cos_about(const SphereField& field, const UnitVector& omega, const UnitVector& omega_point,
                          int circle_nodes) {
  return weighted_cos(field, omega, omega_point, circle_nodes);
}

FourierProfile fourier_coeffs(const CircleRestriction& restriction, int nmax) {
  const int m = static_cast<int>(restriction.samples.size());
  if (nmax < 0) throw Error(ErrorKind::InvalidArgument, "nmax must be >= 0");
  if (m < 2 * nmax + 2) {
    throw Error(ErrorKind::TooFewNodes, "need M >= 2 nmax + 2 (M = " + std::to_string(m) +
                                            ", nmax = " + std::to_string(nmax) + ")");
  }
  const TrigTable& t = trig_table(m);
  FourierProfile p;
  p.a.assign(static_cast<std::size_t>(nmax) + 1, 0.0);
  p.b.assign(static_cast<std::size_t>(nmax) + 1, 0.0);
  for (int n = 0; n <= nmax; ++n) {
    double ca = 0.0;
    double sb = 0.0;
    for (int j = 0; j < m; ++j) {
      const auto r = static_cast<std::size_t>((static_cast<long long>(n) * j) % m);
      const double g = restriction.samples[static_cast<std::size_t>(j)];
      ca += t.c[r] * g;
      sb += t.s[r] * g;
    }
    const double sign = n % 2 == 0 ? 1.0 : -1.0;
    const auto k = static_cast<std::size_t>(n);
    if (n == 0) {
      p.a[k] = ca / m;
    } else {
      p.a[k] = sign * 2.0 * ca / m;
      p.b[k] = sign * 2.0 * sb / m;
    }
  }
  return p;
}

FourierProfile fourier_coeffs(const SphereField& field, const UnitVector& omega, const UnitVector& pole, int nmax,
                              int circle_nodes) {
  if (circle_nodes < 2 * nmax + 2) {
    throw Error(ErrorKind::TooFewNodes, "need M >= 2 nmax + 2");
  }
  return fourier_coeffs(restrict_field(field, omega, pole, circle_nodes), nmax);
}

std::pair<SphereField, SphereField> even_odd_split(const SphereField& field) {
  SphereField even([field](const UnitVector& w) { return 0.5 * (field(w) + field(-w)); }, field.smoothness());
  SphereField odd([field](const UnitVector& w) { return 0.5 * (field(w) - field(-w)); }, field.smoothness());
  return {std::move(even), std::move(odd)};
}

void TransformGrid::validate() const {
  const std::size_t cells = nu_count() * tau_count();
  if (ff.size() != cells || cf.size() != cells || sf.size() != cells) {
    throw Error(ErrorKind::InvalidArgument, "transform grid matrices do not match the node counts");
  }
  for (std::size_t k = 0; k < cells; ++k) {
    if (!std::isfinite(ff[k]) || !std::isfinite(cf[k]) || !std::isfinite(sf[k])) {
      throw Error(ErrorKind::InvalidArgument, "transform grid has a non-finite value at cell " + std::to_string(k));
    }
  }
}

TransformGrid transform_grid(const SphereField& field, const UnitVector& pole, int nu_count, int tau_count,
                             int circle_nodes) {
  if (nu_count < 8 || tau_count < 8) {
    throw Error(ErrorKind::InvalidArgument, "transform grid counts must be >= 8");
  }
  check_nodes(circle_nodes);
  TransformGrid grid;
  grid.pole = pole;
  grid.circle_nodes = circle_nodes;
  for (int i = 1; i <= nu_count; ++i) grid.nu_nodes.push_back(0.5 * std::numbers::pi * i / nu_count);
  for (int j = 0; j < tau_count; ++j) grid.tau_nodes.push_back(2.0 * std::numbers::pi * j / tau_count);
  const std::size_t cells = grid.nu_count() * grid.tau_count();
  grid.ff.resize(cells);
  grid.cf.resize(cells);
  grid.sf.resize(cells);

  std::string failure;
  const auto total = static_cast<long long>(cells);
#pragma omp parallel for schedule(dynamic, 16)
  for (long long cell = 0; cell < total; ++cell) {
    const auto k = static_cast<std::size_t>(cell);
    const std::size_t i = k / grid.tau_count();
    const std::size_t j = k % grid.tau_count();
    try {
      const UnitVector omega = sph_to_vec(pole, grid.nu_nodes[i], grid.tau_nodes[j]);
      const TransformValues v = transform_values(field, omega, pole, circle_nodes);
      grid.ff[k] = v.ff;
      grid.cf[k] = v.cf;
      grid.sf[k] = v.sf;
    } catch (const Error& e) {
#pragma omp critical(funk_grid_failure)
      if (failure.empty()) {
        failure = "cell (" + std::to_string(i) + ", " + std::to_string(j) + "): " + e.what();
      }
    }
  }
  if (!failure.empty()) throw Error(ErrorKind::InvalidArgument, failure);
  grid.validate();
  return grid;
}

double recurrence_residual(const SphereField& field, const UnitVector& pole, int n, double nu, double tau,
                           double h, int circle_nodes) {
  if (n < 1) throw Error(ErrorKind::OutOfDomain, "recurrence index must be >= 1");
  if (!(h > 0.0) || !(nu > h) || !(nu < 0.5 * std::numbers::pi - h)) {
    throw Error(ErrorKind::OutOfDomain, "need h < nu < pi/2 - h");
  }
  if (field.smoothness() == Smoothness::Continuous) {
    throw Error(ErrorKind::OutOfDomain, "recurrence residual needs a C1 field");
  }
  const int nmax = n + 1;
  auto coeffs = [&](double v, double t) {
    return fourier_coeffs(field, sph_to_vec(pole, v, t), pole, nmax, circle_nodes);
  };
  const FourierProfile c = coeffs(nu, tau);
  const FourierProfile nu_plus = coeffs(nu + h, tau);
  const FourierProfile nu_minus = coeffs(nu - h, tau);
  const FourierProfile tau_plus = coeffs(nu, tau + h);
  const FourierProfile tau_minus = coeffs(nu, tau - h);

  auto d_nu_a = [&](int k) { return (nu_plus.a[k] - nu_minus.a[k]) / (2.0 * h); };
  auto d_tau_b = [&](int k) { return (tau_plus.b[k] - tau_minus.b[k]) / (2.0 * h); };
  const double cot = std::cos(nu) / std::sin(nu);
  const double inv_sin = 1.0 / std::sin(nu);

  if (n == 1) {
    return d_nu_a(2) + 2.0 * c.a[2] * cot - 2.0 * d_nu_a(0) - d_tau_b(2) * inv_sin;
  }
  return d_nu_a(n + 1) - d_nu_a(n - 1) + ((n + 1) * c.a[static_cast<std::size_t>(n + 1)] +
                                          (n - 1) * c.a[static_cast<std::size_t>(n - 1)]) * cot -
         (d_tau_b(n + 1) + d_tau_b(n - 1)) * inv_sin;
}

}  // namespace funk
