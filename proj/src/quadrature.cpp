#include "funk/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "funk/error.hpp"

namespace funk {

namespace {

constexpr int kIntervalOrder = 8;
constexpr double kHalfPi = std::numbers::pi / 2.0;

const GaussLegendreRule& interval_rule() {
  static const GaussLegendreRule rule(kIntervalOrder);
  return rule;
}

}  // namespace

PeriodicSamples::PeriodicSamples(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 4) {
    throw Error(ErrorKind::TooFewNodes,
                "periodic rule needs at least 4 nodes, got " + std::to_string(values_.size()));
  }
  if (values_.size() % 2 != 0) {
    throw Error(ErrorKind::InvalidArgument, "periodic node count must be even");
  }
}

double PeriodicSamples::node(std::size_t j, std::size_t m) {
  return -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m);
}

double periodic_trapezoid(const PeriodicSamples& samples) {
  double sum = 0.0;
  for (double v : samples.values()) sum += v;
  return 2.0 * std::numbers::pi * sum / static_cast<double>(samples.size());
}

GaussLegendreRule::GaussLegendreRule(int order) {
  if (order < 1) throw Error(ErrorKind::InvalidArgument, "Gauss-Legendre order must be >= 1");
  const auto n = static_cast<std::size_t>(order);
  nodes.resize(n);
  weights.resize(n);
  // Returns (P_n(x), P_n'(x)) by the three-term recurrence.
  auto legendre = [order](double x) {
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= order; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    return std::pair{p1, order * (x * p1 - p0) / (x * x - 1.0)};
  };
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (order + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

std::pair<std::vector<double>, std::vector<double>> GaussLegendreRule::mapped(double a, double b) const {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  std::vector<double> x(nodes.size());
  std::vector<double> w(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    x[i] = mid + half * nodes[i];
    w[i] = half * weights[i];
  }
  return {std::move(x), std::move(w)};
}

double integrate_profile(const std::function<double(double)>& f, double a, double b, int order) {
  if (!(a < b)) throw Error(ErrorKind::InvalidInterval, "integration needs a < b");
  if (order < 2) throw Error(ErrorKind::InvalidArgument, "Gauss-Legendre order must be >= 2");
  const auto [x, w] = GaussLegendreRule(order).mapped(a, b);
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += w[i] * f(x[i]);
  return sum;
}

void ProfileGrid::validate() const {
  if (nodes.size() != values.size()) {
    throw Error(ErrorKind::InvalidArgument, "profile nodes and values differ in length");
  }
  if (nodes.empty()) throw Error(ErrorKind::InvalidArgument, "empty profile");
  if (nodes.front() < 0.0 || nodes.back() > kHalfPi + 1e-12) {
    throw Error(ErrorKind::InvalidArgument, "profile nodes must lie in [0, pi/2]");
  }
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (!(nodes[i] > nodes[i - 1])) {
      throw Error(ErrorKind::InvalidArgument, "profile nodes must be strictly increasing");
    }
  }
}

CubicProfile::CubicProfile(const ProfileGrid& grid) : grid_(grid) {
  grid_.validate();
  if (grid_.nodes.size() < 4) {
    throw Error(ErrorKind::TooFewNodes, "cubic profile interpolation needs at least 4 nodes");
  }
}

std::size_t CubicProfile::window_for_interval(std::size_t interval) const {
  // interval i spans [node_i, node_{i+1}]; use nodes i-1..i+2 clipped to the grid
  const std::size_t last_start = grid_.nodes.size() - 4;
  return std::min(interval == 0 ? 0 : interval - 1, last_start);
}

double CubicProfile::eval_window(std::size_t first, double u) const {
  const double* x = grid_.nodes.data() + first;
  const double* y = grid_.values.data() + first;
  double result = 0.0;
  bool nonnegative = true;
  for (int q = 0; q < 4; ++q) {
    double basis = 1.0;
    for (int r = 0; r < 4; ++r) {
      if (r != q) basis *= (u - x[r]) / (x[q] - x[r]);
    }
    result += y[q] * basis;
    nonnegative = nonnegative && y[q] >= 0.0;
  }
  return nonnegative ? std::max(result, 0.0) : result;
}

double CubicProfile::operator()(double u) const {
  const auto& x = grid_.nodes;
  const auto it = std::upper_bound(x.begin(), x.end(), u);
  std::size_t interval = it == x.begin() ? 0 : static_cast<std::size_t>(it - x.begin()) - 1;
  interval = std::min(interval, x.size() - 2);
  return eval_window(window_for_interval(interval), u);
}

namespace {

// Visits (u, w) for every Gauss point of every interval, including the
// leading interval [0, nodes[0]] when nodes[0] > 0. `done(i)` fires after the
// Gauss points ending at node i have been emitted.
template <class Visit, class Done>
void for_each_gauss_point(const ProfileGrid& grid, Visit&& visit, Done&& done) {
  const auto& rule = interval_rule();
  const auto& x = grid.nodes;
  auto emit = [&](double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    for (std::size_t g = 0; g < rule.nodes.size(); ++g) {
      visit(mid + half * rule.nodes[g], half * rule.weights[g]);
    }
  };
  if (x.front() > 0.0) emit(0.0, x.front());
  done(0);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    emit(x[i], x[i + 1]);
    done(i + 1);
  }
}

}  // namespace

ProfileGrid cumulative_weighted_integral(const ProfileGrid& profile, int m) {
  if (m < 0) throw Error(ErrorKind::InvalidExponent, "weight exponent must be >= 0");
  const CubicProfile interp(profile);
  ProfileGrid out{profile.nodes, std::vector<double>(profile.nodes.size(), 0.0)};
  double running = 0.0;
  for_each_gauss_point(
      interp.grid(),
      [&](double u, double w) { running += w * std::pow(std::sin(u), m) * std::cos(u) * interp(u); },
      [&](std::size_t i) { out.values[i] = running; });
  return out;
}

double integrate_interpolated(const ProfileGrid& profile, const std::function<double(double)>& weight) {
  const CubicProfile interp(profile);
  double sum = 0.0;
  for_each_gauss_point(
      interp.grid(), [&](double u, double w) { sum += w * weight(u) * interp(u); }, [](std::size_t) {});
  return sum;
}

}  // namespace funk
