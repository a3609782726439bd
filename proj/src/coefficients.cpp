#include "funk/coefficients.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "funk/error.hpp"

namespace funk {

namespace {

struct DD {
  double hi = 0.0;
  double lo = 0.0;
};

DD two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

DD quick_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}

DD dd_add(DD x, DD y) {
  DD s = two_sum(x.hi, y.hi);
  s.lo += x.lo + y.lo;
  return quick_two_sum(s.hi, s.lo);
}

DD dd_mul(DD x, DD y) {
  const double p = x.hi * y.hi;
  double e = std::fma(x.hi, y.hi, -p);
  e += x.hi * y.lo + x.lo * y.hi;
  return quick_two_sum(p, e);
}

// sum_i c[i] t^i with t = s^2, all in double-double.
DD horner(const auto& coeffs, DD t) {
  DD acc{};
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc = dd_add(dd_mul(acc, t), DD{it->hi, it->lo});
  }
  return acc;
}

DD square(double s) { return {s * s, std::fma(s, s, -(s * s))}; }

}  // namespace

const std::vector<Rational>& CoeffTable::even_row(int k) const {
  check_k(k, 1);
  return even_[static_cast<std::size_t>(k)];
}

const std::vector<Rational>& CoeffTable::odd_row(int k) const {
  check_k(k, 1);
  return odd_[static_cast<std::size_t>(k)];
}

const Rational& CoeffTable::even(int k, int m) const {
  const auto& row = even_row(k);
  if (m < 1 || m > static_cast<int>(row.size())) {
    throw Error(ErrorKind::OutOfRange, "c_m(2k) needs 1 <= m <= k");
  }
  return row[static_cast<std::size_t>(m - 1)];
}

const Rational& CoeffTable::odd(int k, int m) const {
  const auto& row = odd_row(k);
  if (m < 1 || m > static_cast<int>(row.size())) {
    throw Error(ErrorKind::OutOfRange, "c_m(2k-1) needs 1 <= m <= k-1");
  }
  return row[static_cast<std::size_t>(m - 1)];
}

bool CoeffTable::even_identity_holds(int k) const {
  const auto& row = even_row(k);
  Rational sum = 0;
  for (std::size_t i = 0; i < row.size(); ++i) sum += row[i] / Rational(2 * (static_cast<int>(i) + 1));
  return sum == Rational(-2);
}

bool CoeffTable::odd_identity_holds(int k) const {
  const auto& row = odd_row(k);
  if (row.empty()) return true;
  Rational sum = 0;
  for (std::size_t i = 0; i < row.size(); ++i) sum += row[i] / Rational(2 * (static_cast<int>(i) + 1) + 2);
  return sum == Rational(-1);
}

void CoeffTable::check_k(int k, int min_k) const {
  if (k < min_k || k > kmax_) {
    throw Error(ErrorKind::OutOfRange,
                "k = " + std::to_string(k) + " outside [" + std::to_string(min_k) + ", " + std::to_string(kmax_) + "]");
  }
}

double CoeffTable::even_term(int k, double s) const {
  check_k(k, 1);
  const DD v = horner(even_split_[static_cast<std::size_t>(k)], square(s));
  return dd_mul(v, DD{s, 0.0}).hi;
}

double CoeffTable::odd_term(int k, double s) const {
  check_k(k, 1);
  const DD t = square(s);
  return dd_mul(horner(odd_split_[static_cast<std::size_t>(k)], t), t).hi;
}

double CoeffTable::p0(int n, double s) const {
  check_k(n, 1);
  const DD v = horner(p0_split_[static_cast<std::size_t>(n)], square(s));
  return dd_mul(v, DD{s, 0.0}).hi;
}

double CoeffTable::p1(int n, double s) const {
  check_k(n, 1);
  const DD t = square(s);
  return dd_mul(horner(p1_split_[static_cast<std::size_t>(n)], t), t).hi;
}

void CoeffTable::refresh_cache() {
  auto split = [](const Rational& r) {
    const double hi = static_cast<double>(r);
    const double lo = static_cast<double>(Rational(r - Rational(hi)));
    return Split{hi, lo};
  };
  auto split_row = [&](const std::vector<Rational>& row) {
    std::vector<Split> out;
    out.reserve(row.size());
    for (const auto& r : row) out.push_back(split(r));
    return out;
  };
  const auto size = static_cast<std::size_t>(kmax_) + 1;
  even_split_.assign(size, {});
  odd_split_.assign(size, {});
  p0_split_.assign(size, {});
  p1_split_.assign(size, {});
  std::vector<Rational> p0_sum;
  std::vector<Rational> p1_sum;
  for (std::size_t k = 1; k < size; ++k) {
    even_split_[k] = split_row(even_[k]);
    odd_split_[k] = split_row(odd_[k]);
    p0_sum.resize(even_[k].size(), Rational(0));
    p1_sum.resize(std::max(p1_sum.size(), odd_[k].size()), Rational(0));
    for (std::size_t i = 0; i < even_[k].size(); ++i) p0_sum[i] += even_[k][i];
    for (std::size_t i = 0; i < odd_[k].size(); ++i) p1_sum[i] += odd_[k][i];
    p0_split_[k] = split_row(p0_sum);
    p1_split_[k] = split_row(p1_sum);
  }
}

CoeffTable CoeffTable::with_perturbation(int parity, int k, int m, const Rational& delta) const {
  CoeffTable copy = *this;
  auto& rows = parity == 0 ? copy.even_ : copy.odd_;
  check_k(k, 1);
  auto& row = rows[static_cast<std::size_t>(k)];
  if (m < 1 || m > static_cast<int>(row.size())) throw Error(ErrorKind::OutOfRange, "no such coefficient");
  row[static_cast<std::size_t>(m - 1)] += delta;
  copy.refresh_cache();
  return copy;
}

CoeffTable build_coeff_table(int kmax, double magnitude_limit) {
  if (kmax < 1) throw Error(ErrorKind::InvalidArgument, "kmax must be >= 1");
  CoeffTable table;
  table.kmax_ = kmax;
  const auto size = static_cast<std::size_t>(kmax) + 1;
  table.even_.assign(size, {});
  table.odd_.assign(size, {});
  const Rational limit(magnitude_limit);
  auto check_row = [&](const std::vector<Rational>& row, int k) {
    for (const auto& c : row) {
      if (abs(c) > limit) {
        throw Error(ErrorKind::Overflow, "coefficient magnitude exceeds the limit at k = " + std::to_string(k) +
                                             " (table complete through k = " + std::to_string(k - 1) + ")");
      }
    }
  };

  table.even_[1] = {Rational(-4)};
  for (int k = 1; k < kmax; ++k) {
    const auto& prev = table.even_[static_cast<std::size_t>(k)];
    std::vector<Rational> next;
    next.reserve(prev.size() + 1);
    const Rational factor(4 * k + 2);
    Rational tail = -2 * factor;
    for (int m = 1; m <= k; ++m) {
      const Rational& c = prev[static_cast<std::size_t>(m - 1)];
      const Rational denom(2 * k - 2 * m + 2);
      next.push_back(c * (1 - factor / denom));
      tail += factor * c / denom;
    }
    next.push_back(tail);
    check_row(next, k + 1);
    table.even_[static_cast<std::size_t>(k + 1)] = std::move(next);
  }

  if (kmax >= 2) table.odd_[2] = {Rational(-4)};
  for (int k = 2; k < kmax; ++k) {
    const auto& prev = table.odd_[static_cast<std::size_t>(k)];
    std::vector<Rational> next;
    next.reserve(prev.size() + 1);
    const Rational factor(4 * k);
    Rational tail = -factor;
    for (int m = 1; m <= k - 1; ++m) {
      const Rational& c = prev[static_cast<std::size_t>(m - 1)];
      const Rational denom(2 * k - 2 * m);
      next.push_back(c * (1 - factor / denom));
      tail += factor * c / denom;
    }
    next.push_back(tail);
    check_row(next, k + 1);
    table.odd_[static_cast<std::size_t>(k + 1)] = std::move(next);
  }
  table.refresh_cache();
  return table;
}

double eval_P(const CoeffTable& table, int n, double u, int parity) {
  if (n < 1 || n > table.kmax()) {
    throw Error(ErrorKind::OutOfRange, "P_n needs 1 <= n <= kmax (n = " + std::to_string(n) + ")");
  }
  if (!(u >= 0.0 && u <= 0.5 * std::numbers::pi + 1e-12)) {
    throw Error(ErrorKind::OutOfRange, "P_n is evaluated on [0, pi/2]");
  }
  if (parity != 0 && parity != 1) throw Error(ErrorKind::OutOfRange, "parity must be 0 or 1");
  const double s = std::sin(u);
  return parity == 0 ? table.p0(n, s) : table.p1(n, s);
}

}  // namespace funk
