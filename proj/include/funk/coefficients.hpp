#pragma once

// Exact coefficient tables for the averaged Fourier-coefficient representations
//
//   abar_{2k}(nu)   = 2 abar_0(nu) + (1/sin nu) int_0^nu sum_{m=1}^{k}   c_m(2k)   (sin u/sin nu)^{2m-1} cos u abar_0(u) du
//   abar_{2k-1}(nu) =   abar_1(nu) + (1/sin nu) int_0^nu sum_{m=1}^{k-1} c_m(2k-1) (sin u/sin nu)^{2m}   cos u abar_1(u) du
//
// built by
//   c_1(2) = -4,
//   c_m(2k+2)     = c_m(2k) (1 - (4k+2)/(2k-2m+2)),                      m <= k
//   c_{k+1}(2k+2) = -2(4k+2) + (4k+2) sum_m c_m(2k)/(2k-2m+2)
//   c_1(3) = -4,
//   c_m(2k+1)     = c_m(2k-1) (1 - 4k/(2k-2m)),                          m <= k-1
//   c_k(2k+1)     = -4k + 4k sum_m c_m(2k-1)/(2k-2m)
//
// and the polynomials
//   P_n^0(u) = sum_{k=1}^{n} sum_{m=1}^{k}   c_m(2k)   sin^{2m-1} u
//   P_n^1(u) = sum_{k=1}^{n} sum_{m=1}^{k-1} c_m(2k-1) sin^{2m}   u.
//
// The coefficients are integers that alternate in sign and grow quickly
// (|c| ~ 1e15 at k = 20), so polynomial values are computed with a
// double-double Horner scheme from the exact values.

#include <boost/multiprecision/cpp_int.hpp>
#include <limits>
#include <vector>

namespace funk {

using Rational = boost::multiprecision::cpp_rational;

inline constexpr int kDefaultKmax = 20;

class CoeffTable {
 public:
  int kmax() const { return kmax_; }

  /// c_m(2k) for 1 <= m <= k <= kmax.
  const std::vector<Rational>& even_row(int k) const;
  /// c_m(2k-1) for 1 <= m <= k-1, 1 <= k <= kmax (empty for k = 1).
  const std::vector<Rational>& odd_row(int k) const;
  const Rational& even(int k, int m) const;
  const Rational& odd(int k, int m) const;

  /// sum_m c_m(2k)/(2m) == -2, exactly.
  bool even_identity_holds(int k) const;
  /// sum_m c_m(2k-1)/(2m+2) == -1, exactly (k >= 2).
  bool odd_identity_holds(int k) const;

  /// sum_m c_m(2k) s^{2m-1} at s = sin u.
  double even_term(int k, double s) const;
  /// sum_m c_m(2k-1) s^{2m} at s = sin u.
  double odd_term(int k, double s) const;
  /// P_n^0 and P_n^1 at s = sin u.
  double p0(int n, double s) const;
  double p1(int n, double s) const;

  /// Copy with c_m(2k) (parity 0) or c_m(2k-1) (parity 1) shifted by `delta`.
  /// Used to check that verification catches a corrupted table.
  CoeffTable with_perturbation(int parity, int k, int m, const Rational& delta) const;

 private:
  friend CoeffTable build_coeff_table(int kmax, double magnitude_limit);

  struct Split {
    double hi = 0.0;
    double lo = 0.0;
  };

  void check_k(int k, int min_k) const;
  void refresh_cache();

  int kmax_ = 0;
  std::vector<std::vector<Rational>> even_;  // index k
  std::vector<std::vector<Rational>> odd_;   // index k
  std::vector<std::vector<Split>> even_split_;
  std::vector<std::vector<Split>> odd_split_;
  std::vector<std::vector<Split>> p0_split_;  // index n, entry m-1: sum_{k=m}^{n} c_m(2k)
  std::vector<std::vector<Split>> p1_split_;  // index n, entry m-1: sum_{k=m+1}^{n} c_m(2k-1)
};

/// Throws InvalidArgument for kmax < 1 and Overflow (naming the k reached) when
/// a coefficient magnitude exceeds `magnitude_limit`.
CoeffTable build_coeff_table(int kmax = kDefaultKmax,
                             double magnitude_limit = std::numeric_limits<double>::max());

/// P_n^parity(u). Throws OutOfRange unless 1 <= n <= kmax and u in [0, pi/2].
double eval_P(const CoeffTable& table, int n, double u, int parity);

}  // namespace funk
