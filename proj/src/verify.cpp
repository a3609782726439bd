#include "funk/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "funk/error.hpp"
#include "funk/inversion.hpp"
#include "funk/io.hpp"
#include "funk/phantoms.hpp"

namespace funk {

namespace {

void tally(SuiteResult& r, bool ok, const std::string& what) {
  ++r.total;
  if (ok) {
    ++r.passed;
  } else {
    r.failures.push_back(what);
  }
}

}  // namespace

SuiteResult suite_phantoms(int circle_nodes) {
  SuiteResult r;
  r.name = "phantoms";
  for (const Phantom& p : phantom_catalog()) {
    const PhantomReport rep = verify_phantom(p, circle_nodes);
    std::string what = p.name;
    for (const auto& f : rep.failures) what += "; " + f;
    tally(r, rep.passed(), what);
    r.worst = std::max({r.worst, rep.max_truth_deviation, rep.max_ff_deviation.value_or(0.0),
                        rep.max_cf_deviation.value_or(0.0), rep.max_odd_funk});
  }
  return r;
}

SuiteResult suite_identities(const CoeffTable& table) {
  SuiteResult r;
  r.name = "identities";
  for (int k = 1; k <= table.kmax(); ++k) {
    tally(r, table.even_identity_holds(k), "sum c_m(" + std::to_string(2 * k) + ")/(2m) != -2");
    if (k >= 2) tally(r, table.odd_identity_holds(k), "sum c_m(" + std::to_string(2 * k - 1) + ")/(2m+2) != -1");
  }
  return r;
}

SuiteResult suite_theorem3(int trials, std::uint64_t seed, int circle_nodes) {
  SuiteResult r;
  r.name = "theorem3";
  const UnitVector pole = north_pole();
  const std::string names[] = {"cos3_nu", "bandlimited_random:L=4,seed=1"};
  for (int which = 0; which < 2; ++which) {
    const std::string& name = names[which];
    const Phantom p = make_phantom(name);
    std::mt19937_64 gen(seed);
    const int count = which == 0 ? (trials + 1) / 2 : trials / 2;
    for (int t = 0; t < count; ++t) {
      UnitVector point = random_unit_vector(gen);
      UnitVector omega = random_unit_vector(gen);
      while (std::abs(dot(omega, pole)) > 0.999 || std::abs(dot(omega, point)) > 0.999) {
        omega = random_unit_vector(gen);
      }
      const double direct = weighted_cos(p.field, omega, point, circle_nodes);
      const TransformValues v = transform_values(p.field, omega, pole, circle_nodes);
      const double alpha = alpha_angle(omega, point, pole);
      const double dev = std::abs(direct - (std::cos(alpha) * v.cf + std::sin(alpha) * v.sf));
      r.worst = std::max(r.worst, dev);
      tally(r, dev <= 1e-10, name + " trial " + std::to_string(t) + ": " + format_real(dev));
    }
  }
  return r;
}

ResidualSweep residual_sweep(int n, int steps, int circle_nodes) {
  const Phantom p = make_phantom("mixed");
  ResidualSweep s;
  s.n = n;
  for (int j = 0; j < steps; ++j) {
    const double h = 0.1 / std::ldexp(1.0, j);
    s.h.push_back(h);
    s.residual.push_back(std::abs(recurrence_residual(p.field, north_pole(), n, 0.7, 0.4, h, circle_nodes)));
  }
  for (std::size_t j = 0; j + 1 < s.residual.size(); ++j) {
    if (s.residual[j + 1] <= kResidualFloor) break;
    s.ratios.push_back(s.residual[j] / s.residual[j + 1]);
  }
  return s;
}

SuiteResult suite_recurrence(int circle_nodes) {
  SuiteResult r;
  r.name = "recurrence";
  for (int n = 1; n <= 3; ++n) {
    const ResidualSweep s = residual_sweep(n, 7, circle_nodes);
    bool ok = s.ratios.size() >= 2;
    std::string what = "n = " + std::to_string(n) + " ratios:";
    for (double q : s.ratios) {
      ok = ok && q >= 3.5 && q <= 4.5;
      what += " " + format_real(q);
      r.worst = std::max(r.worst, std::abs(q - 4.0));
    }
    tally(r, ok, what);
  }
  return r;
}

SuiteResult suite_oracle(const CoeffTable& table, int circle_nodes) {
  SuiteResult r;
  r.name = "oracle";
  const int nmax = std::min(12, 2 * table.kmax());
  for (const std::string name : {"cos3_nu", "cos_nu", "mixed", "bandlimited_random:L=4,seed=1"}) {
    const Phantom p = make_phantom(name);
    const FieldTransformData data(p.field, north_pole(), circle_nodes);
    const AveragedProfiles profiles = uniform_profiles(data, north_pole());
    const auto ode = abar_via_ode(profiles, nmax);
    for (int n = 0; n <= nmax; ++n) {
      const double rep = abar_via_representation(table, profiles, n);
      const double via_ode = ode[static_cast<std::size_t>(n)].back();
      const double dev = std::abs(rep - via_ode) / (1.0 + std::abs(via_ode));
      r.worst = std::max(r.worst, dev);
      tally(r, dev <= 1e-6, name + " n = " + std::to_string(n) + ": " + format_real(dev));
    }
  }
  return r;
}

}  // namespace funk
