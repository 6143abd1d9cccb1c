#pragma once

/// @file
/// Exact-rational and floating-point machinery for exponential sums whose
/// phase is quadratic in the summation index: time/fraction reduction,
/// quadratic Gauss sums, curlicue sums and a phase-accurate weighted sum.

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace qfactor {

using Complex = std::complex<double>;

/// A time ell = (q/r)*N + epsilon split into its nearby fraction of N.
/// gcd(q, r) == 1 and r >= 1. epsilon is in units of the classical period.
struct ReducedFraction {
  std::int64_t q = 0;
  std::int64_t r = 1;
  double epsilon = 0.0;
};

struct RealTimeDecomposition {
  ReducedFraction fraction;
  double delta_t = 0.0;
};

/// Values W_m = (1/r) sum_p exp[-2 pi i (p^2 q + p m)/r] for m = 0..r-1.
struct GaussSumTable {
  std::int64_t r = 1;
  std::int64_t q = 0;
  std::vector<Complex> values;

  /// Periodic access; any integer m is reduced mod r.
  [[nodiscard]] const Complex& at(std::int64_t m) const;
};

/// s_N(n) = sum_{m=0}^{N-1} exp(-2 pi i m^2 n / N) for n = 0..N-1.
struct CurlicueSeries {
  std::int64_t N = 1;
  std::vector<Complex> values;
};

struct Term {
  std::int64_t m = 0;
  double weight = 0.0;
};

struct ComplexTerm {
  std::int64_t m = 0;
  Complex weight;
};

inline constexpr std::uint64_t kDefaultCurlicueTermBudget = 10'000'000;

// Non-negative residue of a mod n (n > 0).
[[nodiscard]] std::int64_t floor_mod(std::int64_t a, std::int64_t n);
[[nodiscard]] std::int64_t gcd(std::int64_t a, std::int64_t b);

/// exp(-2 pi i k / n) for k = 0..n-1, each entry evaluated from a reduced
/// argument in [-pi, pi].
[[nodiscard]] std::vector<Complex> unit_roots(std::int64_t n);

/// exp(-2 pi i * cycles) with cycles reduced to [-1/2, 1/2] first.
[[nodiscard]] Complex cycle_phase(double cycles);

/// ell/N in lowest terms; epsilon is always zero for integer ell.
/// Throws DomainError for N < 2 or ell < 1.
[[nodiscard]] ReducedFraction reduce_time(std::int64_t ell, std::int64_t N);

/// Splits t = (q/r)*N + epsilon + delta_t where ell = round(t),
/// delta_t = t - ell and q/r is the best rational approximation of ell/N with
/// r <= r_max. Throws DomainError for r_max < 1, N < 1 or non-finite t.
[[nodiscard]] RealTimeDecomposition decompose_real_time(double t, std::int64_t N,
                                                        std::int64_t r_max);

/// Best rational approximation p/q of num/den with 1 <= q <= max_den,
/// from continued-fraction convergents and semiconvergents; ties go to the
/// smaller denominator. den > 0.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;
};
[[nodiscard]] Fraction best_rational_approximation(std::int64_t num, std::int64_t den,
                                                   std::int64_t max_den);

/// O(r^2) direct summation with exact integer phase reduction.
/// Throws DomainError for r < 1.
[[nodiscard]] GaussSumTable gauss_sum_table(std::int64_t r, std::int64_t q);

/// O(N^2) direct summation with exact integer phase reduction. Throws
/// ResourceError when N*N exceeds max_terms, DomainError for N < 1.
[[nodiscard]] CurlicueSeries curlicue_series(
    std::int64_t N, std::uint64_t max_terms = kDefaultCurlicueTermBudget);

/// sum_m w_m exp[-2 pi i (linear*m + quadratic*m^2) * tau].
///
/// The cycle count (linear*tau)*m + (quadratic*tau)*m^2 is carried in
/// double-double arithmetic and only its fractional part reaches sin/cos, so
/// cycle counts up to 2^50 keep better than 1e-10 cycle accuracy. The terms
/// are accumulated with Neumaier compensation.
[[nodiscard]] Complex phase_sum(std::span<const Term> terms, double linear, double quadratic,
                                double tau);
[[nodiscard]] Complex phase_sum(std::span<const ComplexTerm> terms, double linear,
                                double quadratic, double tau);

/// Neumaier-compensated accumulator for complex values.
class CompensatedSum {
 public:
  void add(Complex z) {
    add_component(re_, re_carry_, z.real());
    add_component(im_, im_carry_, z.imag());
  }
  [[nodiscard]] Complex value() const { return {re_ + re_carry_, im_ + im_carry_}; }

 private:
  static void add_component(double& sum, double& carry, double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }

  double re_ = 0.0;
  double re_carry_ = 0.0;
  double im_ = 0.0;
  double im_carry_ = 0.0;
};

}  // namespace qfactor
