#include <cmath>
#include <string>

#include "qfactor/error.hpp"
#include "qfactor/quadratic_phase.hpp"
#include "int128.hpp"

namespace qfactor {

namespace {


std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

i128 abs128(i128 v) { return v < 0 ? -v : v; }

// True when a/b is strictly closer to x = num/den than c/d.
bool strictly_closer(Fraction ab, Fraction cd, std::int64_t num, std::int64_t den) {
  const i128 err_ab = abs128(static_cast<i128>(ab.num) * den - static_cast<i128>(num) * ab.den);
  const i128 err_cd = abs128(static_cast<i128>(cd.num) * den - static_cast<i128>(num) * cd.den);
  return err_ab * cd.den < err_cd * ab.den;
}

}  // namespace

Fraction best_rational_approximation(std::int64_t num, std::int64_t den, std::int64_t max_den) {
  if (den < 1) throw DomainError("best_rational_approximation: denominator must be positive");
  if (max_den < 1) throw DomainError("best_rational_approximation: max_den must be >= 1");

  // Convergent recurrences: (h1/k1) is the latest convergent, (h2/k2) the one before.
  std::int64_t h1 = 1, k1 = 0;
  std::int64_t h2 = 0, k2 = 1;
  std::int64_t p = num, q = den;
  while (true) {
    const std::int64_t a = floor_div(p, q);
    const std::int64_t h = a * h1 + h2;
    const std::int64_t k = a * k1 + k2;
    if (k > max_den) {
      const std::int64_t j = (max_den - k2) / k1;
      const Fraction semi{j * h1 + h2, j * k1 + k2};
      const Fraction conv{h1, k1};
      // Equal distances resolve to the smaller denominator.
      if (strictly_closer(semi, conv, num, den)) return semi;
      if (strictly_closer(conv, semi, num, den)) return conv;
      return semi.den < conv.den ? semi : conv;
    }
    h2 = h1;
    k2 = k1;
    h1 = h;
    k1 = k;
    const std::int64_t rem = p - a * q;
    if (rem == 0) return {h1, k1};
    p = q;
    q = rem;
  }
}

ReducedFraction reduce_time(std::int64_t ell, std::int64_t N) {
  if (N < 2) throw DomainError("reduce_time: N must be >= 2, got " + std::to_string(N));
  if (ell < 1) throw DomainError("reduce_time: ell must be >= 1, got " + std::to_string(ell));
  const std::int64_t g = gcd(ell, N);
  return {ell / g, N / g, 0.0};
}

RealTimeDecomposition decompose_real_time(double t, std::int64_t N, std::int64_t r_max) {
  if (r_max < 1) throw DomainError("decompose_real_time: r_max must be >= 1");
  if (N < 1) throw DomainError("decompose_real_time: N must be >= 1");
  if (!std::isfinite(t) || std::abs(t) > 0x1p52) {
    throw DomainError("decompose_real_time: t must be finite and below 2^52 in magnitude");
  }
  const auto ell = static_cast<std::int64_t>(std::llround(t));
  const Fraction f = best_rational_approximation(ell, N, r_max);
  // epsilon = ell - (q/r) N, with the numerator formed exactly.
  const i128 numer = static_cast<i128>(ell) * f.den - static_cast<i128>(f.num) * N;
  RealTimeDecomposition out;
  out.fraction = {f.num, f.den, static_cast<double>(numer) / static_cast<double>(f.den)};
  out.delta_t = t - static_cast<double>(ell);
  return out;
}

}  // namespace qfactor
