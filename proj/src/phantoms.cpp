#include "funk/phantoms.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>

#include "funk/error.hpp"

namespace funk {

namespace {

// sum_{l,m} coeff[l^2 + l + m] Y_lm, evaluated through
// Y_lm ~ K_lm Q_l^m(z) Re/Im (x + i y)^m so it is a polynomial in (x, y, z).
class HarmonicSum {
 public:
  HarmonicSum(int L, std::vector<double> coeffs) : L_(L), coeffs_(std::move(coeffs)) {
    norm_.resize(coeffs_.size());
    for (int l = 0; l <= L; ++l) {
      for (int m = -l; m <= l; ++m) {
        const int am = std::abs(m);
        double ratio = 1.0;  // (l - |m|)! / (l + |m|)!
        for (int i = l - am + 1; i <= l + am; ++i) ratio /= i;
        double k = std::sqrt((2 * l + 1) / (4.0 * std::numbers::pi) * ratio);
        if (m != 0) k *= std::numbers::sqrt2;
        norm_[index(l, m)] = k;
      }
    }
  }

  double operator()(const UnitVector& w) const {
    const double x = w.x();
    const double y = w.y();
    const double z = w.z();
    double re = 1.0;
    double im = 0.0;
    double diag = 1.0;  // Q_m^m = (-1)^m (2m - 1)!!
    double sum = 0.0;
    for (int m = 0; m <= L_; ++m) {
      if (m > 0) {
        const double r = re * x - im * y;
        im = re * y + im * x;
        re = r;
        diag *= -(2.0 * m - 1.0);
      }
      double q_prev = 0.0;
      double q = diag;
      for (int l = m; l <= L_; ++l) {
        if (l > m) {
          const double next = l == m + 1 ? (2.0 * m + 1.0) * z * q
                                         : ((2.0 * l - 1.0) * z * q - (l + m - 1.0) * q_prev) / (l - m);
          q_prev = q;
          q = next;
        }
        sum += coeffs_[index(l, m)] * norm_[index(l, m)] * q * re;
        if (m > 0) sum += coeffs_[index(l, -m)] * norm_[index(l, -m)] * q * im;
      }
    }
    return sum;
  }

  static std::size_t index(int l, int m) { return static_cast<std::size_t>(l * l + l + m); }

 private:
  int L_;
  std::vector<double> coeffs_;
  std::vector<double> norm_;
};

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::pair<double, double> frame_components(const Vec3& v, const UnitVector& omega, const UnitVector& pole) {
  const GreatCircleFrame f = great_circle_frame(omega, pole);
  return {dot(f.e_ref, v), dot(f.e_quad, v)};
}

double harm2(const UnitVector& w) { return 0.5 * (3.0 * w.z() * w.z() - 1.0) + w.x() * w.y(); }

Phantom analytic(std::string name, std::function<double(const UnitVector&)> f, KnownTransforms known,
                 std::optional<int> band_limit) {
  return Phantom{std::move(name), SphereField(f, Smoothness::Analytic), f, std::move(known), band_limit};
}

const Vec3 kZ{0.0, 0.0, 1.0};

Phantom const1() {
  return analytic("const1", [](const UnitVector&) { return 1.0; },
                  {[](const UnitVector&) { return 1.0; },
                   [](const UnitVector&, const UnitVector&) { return std::pair{0.0, 0.0}; }},
                  0);
}

Phantom cos_nu() {
  return analytic("cos_nu", [](const UnitVector& w) { return w.z(); },
                  {[](const UnitVector&) { return 0.0; },
                   [](const UnitVector& omega, const UnitVector& pole) {
                     const auto [a, b] = frame_components(kZ, omega, pole);
                     return std::pair{0.5 * a, 0.5 * b};
                   }},
                  1);
}

Phantom cos3_nu() {
  return analytic("cos3_nu", [](const UnitVector& w) { return w.z() * w.z() * w.z(); },
                  {[](const UnitVector&) { return 0.0; },
                   [](const UnitVector& omega, const UnitVector& pole) {
                     const auto [a, b] = frame_components(kZ, omega, pole);
                     const double r2 = a * a + b * b;
                     return std::pair{0.375 * a * r2, 0.375 * b * r2};
                   }},
                  3);
}

Phantom even_harm2() {
  return analytic("even_harm2", harm2,
                  {[](const UnitVector& omega) { return -0.5 * harm2(omega); },
                   [](const UnitVector&, const UnitVector&) { return std::pair{0.0, 0.0}; }},
                  2);
}

Phantom mixed() {
  return analytic("mixed", [](const UnitVector& w) { return 1.0 + w.z() + harm2(w); },
                  {[](const UnitVector& omega) { return 1.0 - 0.5 * harm2(omega); },
                   [](const UnitVector& omega, const UnitVector& pole) {
                     const auto [a, b] = frame_components(kZ, omega, pole);
                     return std::pair{0.5 * a, 0.5 * b};
                   }},
                  2);
}

using Params = std::map<std::string, std::string>;

double param_double(Params& params, const std::string& key, double fallback) {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  const std::string text = it->second;
  params.erase(it);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw Error(ErrorKind::InvalidArgument, "phantom parameter " + key + "=" + text + " is not a number");
  }
  return v;
}

std::uint64_t param_uint(Params& params, const std::string& key, std::uint64_t fallback) {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  const std::string text = it->second;
  params.erase(it);
  std::uint64_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error(ErrorKind::InvalidArgument, "phantom parameter " + key + "=" + text + " is not a non-negative integer");
  }
  return v;
}

}  // namespace

double unit_interval_pm1(std::uint64_t raw) { return static_cast<double>(raw >> 11) * 0x1.0p-53 * 2.0 - 1.0; }

UnitVector random_unit_vector(std::mt19937_64& gen) {
  const double z = unit_interval_pm1(gen());
  const double phi = std::numbers::pi * (unit_interval_pm1(gen()) + 1.0);
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return UnitVector(r * std::cos(phi), r * std::sin(phi), z);
}

std::vector<double> random_harmonic_coefficients(int L, std::uint64_t seed) {
  if (L < 0) throw Error(ErrorKind::InvalidArgument, "band limit L must be >= 0");
  std::mt19937_64 gen(seed);
  std::vector<double> coeffs(static_cast<std::size_t>((L + 1) * (L + 1)));
  for (double& c : coeffs) c = unit_interval_pm1(gen());
  return coeffs;
}

double real_spherical_harmonic(int l, int m, const UnitVector& w) {
  if (l < 0 || std::abs(m) > l) throw Error(ErrorKind::InvalidArgument, "need l >= 0 and |m| <= l");
  std::vector<double> coeffs(static_cast<std::size_t>((l + 1) * (l + 1)), 0.0);
  coeffs[HarmonicSum::index(l, m)] = 1.0;
  return HarmonicSum(l, std::move(coeffs))(w);
}

Phantom bandlimited_random(int L, std::uint64_t seed) {
  if (L > 40) throw Error(ErrorKind::InvalidArgument, "band limit L must be <= 40");
  const std::vector<double> coeffs = random_harmonic_coefficients(L, seed);
  std::vector<double> funk_coeffs = coeffs;
  for (int l = 0; l <= L; ++l) {
    const double p_l0 = std::legendre(static_cast<unsigned>(l), 0.0);
    for (int m = -l; m <= l; ++m) funk_coeffs[HarmonicSum::index(l, m)] *= p_l0;
  }
  const HarmonicSum f(L, coeffs);
  const HarmonicSum ff(L, std::move(funk_coeffs));
  return analytic("bandlimited_random:L=" + std::to_string(L) + ",seed=" + std::to_string(seed), f,
                  {ff, nullptr}, L);
}

Phantom bump(double theta, double phi, double width) {
  if (!(width > 0.0) || !std::isfinite(width)) throw Error(ErrorKind::InvalidArgument, "bump width must be > 0");
  const Vec3 c{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
  const double inv = 1.0 / (width * width);
  auto f = [c, inv](const UnitVector& w) { return std::exp((dot(w, c) - 1.0) * inv); };
  auto ff = [c, inv](const UnitVector& omega) {
    const Vec3 perp = c - dot(omega, c) * omega.vec();
    return std::exp(-inv) * std::cyl_bessel_i(0.0, norm(perp) * inv);
  };
  auto cf_sf = [c, inv](const UnitVector& omega, const UnitVector& pole) {
    const auto [a, b] = frame_components(c, omega, pole);
    const double amp = std::hypot(a, b);
    if (amp == 0.0) return std::pair{0.0, 0.0};
    const double i1 = std::exp(-inv) * std::cyl_bessel_i(1.0, amp * inv);
    return std::pair{i1 * a / amp, i1 * b / amp};
  };
  return analytic("bump:theta=" + format_double(theta) + ",phi=" + format_double(phi) +
                      ",width=" + format_double(width),
                  f, {ff, cf_sf}, std::nullopt);
}

std::vector<Phantom> phantom_catalog() {
  return {const1(), cos_nu(), cos3_nu(), even_harm2(), mixed(), bandlimited_random(4, 1), bump(0.3, 0.5, 0.5)};
}

Phantom make_phantom(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  Params params;
  if (colon != std::string::npos) {
    const std::string rest = spec.substr(colon + 1);
    std::size_t start = 0;
    while (start <= rest.size()) {
      const auto comma = std::min(rest.find(',', start), rest.size());
      const std::string item = rest.substr(start, comma - start);
      const auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw Error(ErrorKind::InvalidArgument, "phantom parameter '" + item + "' is not key=value");
      }
      params[item.substr(0, eq)] = item.substr(eq + 1);
      start = comma + 1;
    }
  }
  Phantom p = [&] {
    if (name == "const1") return const1();
    if (name == "cos_nu") return cos_nu();
    if (name == "cos3_nu") return cos3_nu();
    if (name == "even_harm2") return even_harm2();
    if (name == "mixed") return mixed();
    if (name == "bandlimited_random") {
      const std::uint64_t L = param_uint(params, "L", 4);
      const std::uint64_t seed = param_uint(params, "seed", 1);
      if (L > 40) throw Error(ErrorKind::InvalidArgument, "band limit L must be <= 40");
      return bandlimited_random(static_cast<int>(L), seed);
    }
    if (name == "bump") {
      const double theta = param_double(params, "theta", 0.3);
      const double phi = param_double(params, "phi", 0.5);
      const double width = param_double(params, "width", 0.5);
      return bump(theta, phi, width);
    }
    throw Error(ErrorKind::UnknownPhantom, "no phantom named '" + name + "'");
  }();
  if (!params.empty()) {
    throw Error(ErrorKind::InvalidArgument, "unknown parameter '" + params.begin()->first + "' for " + name);
  }
  return p;
}

PhantomReport verify_phantom(const Phantom& p, int circle_nodes, int samples, std::uint64_t seed) {
  PhantomReport r;
  r.name = p.name;
  std::mt19937_64 gen(seed);
  const UnitVector pole = north_pole();
  const auto [even, odd] = even_odd_split(p.field);
  double ff_dev = 0.0;
  double cf_dev = 0.0;
  double high = 0.0;
  for (int i = 0; i < samples; ++i) {
    const UnitVector w = random_unit_vector(gen);
    r.max_truth_deviation = std::max(r.max_truth_deviation, std::abs(p.field(w) - p.truth(w)));
    if (std::abs(dot(w, pole)) >= kDegeneracyThreshold) continue;
    const TransformValues v = transform_values(p.field, w, pole, circle_nodes);
    if (p.known.ff) ff_dev = std::max(ff_dev, std::abs(v.ff - p.known.ff(w)));
    if (p.known.cf_sf) {
      const auto [cf, sf] = p.known.cf_sf(w, pole);
      cf_dev = std::max({cf_dev, std::abs(v.cf - cf), std::abs(v.sf - sf)});
    }
    r.max_odd_funk = std::max(r.max_odd_funk, std::abs(funk(odd, w, pole, circle_nodes)));
    if (p.band_limit) {
      const int d = *p.band_limit;
      const FourierProfile fp = fourier_coeffs(p.field, w, pole, d + 2, circle_nodes);
      for (int n = d + 1; n <= d + 2; ++n) {
        high = std::max({high, std::abs(fp.a[static_cast<std::size_t>(n)]), std::abs(fp.b[static_cast<std::size_t>(n)])});
      }
    }
  }
  if (p.known.ff) r.max_ff_deviation = ff_dev;
  if (p.known.cf_sf) r.max_cf_deviation = cf_dev;
  if (p.band_limit) r.max_high_harmonic = high;

  auto check = [&](const char* what, double value, double tol) {
    if (!(value <= tol)) r.failures.push_back(std::string(what) + " = " + format_double(value));
  };
  check("field vs truth", r.max_truth_deviation, 1e-14);
  if (r.max_ff_deviation) check("Ff deviation", *r.max_ff_deviation, 1e-11);
  if (r.max_cf_deviation) check("Cf/Sf deviation", *r.max_cf_deviation, 1e-11);
  check("F(odd part)", r.max_odd_funk, 1e-11);
  if (r.max_high_harmonic) check("harmonics above band limit", *r.max_high_harmonic, 1e-10);
  return r;
}

}  // namespace funk
