#include "qfactor/quadratic_phase.hpp"

#include <numbers>
#include <string>

#include "qfactor/double_double.hpp"
#include "int128.hpp"
#include "qfactor/error.hpp"

namespace qfactor {

namespace {

constexpr std::int64_t kMaxCurlicueModulus = 3'037'000'499;  // floor(sqrt(2^63 - 1))

template <typename TermT>
Complex phase_sum_impl(std::span<const TermT> terms, double linear, double quadratic,
                       double tau) {
  const dd::DoubleDouble lin = dd::two_prod(linear, tau);
  const dd::DoubleDouble quad = dd::two_prod(quadratic, tau);
  CompensatedSum acc;
  for (const auto& term : terms) {
    const double m = static_cast<double>(term.m);
    const dd::DoubleDouble m2 = dd::two_prod(m, m);
    const dd::DoubleDouble cycles = dd::add(dd::mul(lin, m), dd::mul(quad, m2));
    acc.add(term.weight * cycle_phase(dd::centered_fraction(cycles)));
  }
  return acc.value();
}

}  // namespace

const Complex& GaussSumTable::at(std::int64_t m) const {
  return values[static_cast<std::size_t>(floor_mod(m, r))];
}

std::int64_t floor_mod(std::int64_t a, std::int64_t n) {
  const std::int64_t v = a % n;
  return v < 0 ? v + n : v;
}

std::int64_t gcd(std::int64_t a, std::int64_t b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b != 0) {
    const std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Complex cycle_phase(double cycles) {
  const double frac = cycles - std::nearbyint(cycles);
  const double angle = -2.0 * std::numbers::pi * frac;
  return {std::cos(angle), std::sin(angle)};
}

std::vector<Complex> unit_roots(std::int64_t n) {
  if (n < 1) throw DomainError("unit_roots: n must be positive");
  std::vector<Complex> roots(static_cast<std::size_t>(n));
  const double dn = static_cast<double>(n);
  for (std::int64_t k = 0; k < n; ++k) {
    // Centre the residue so the angle stays in [-pi, pi].
    const std::int64_t centred = 2 * k <= n ? k : k - n;
    const double angle = -2.0 * std::numbers::pi * (static_cast<double>(centred) / dn);
    roots[static_cast<std::size_t>(k)] = {std::cos(angle), std::sin(angle)};
  }
  return roots;
}

GaussSumTable gauss_sum_table(std::int64_t r, std::int64_t q) {
  if (r < 1) throw DomainError("gauss_sum_table: r must be >= 1, got " + std::to_string(r));
  const std::int64_t q_mod = floor_mod(q, r);
  const auto roots = unit_roots(r);
  const auto ur = static_cast<std::size_t>(r);

  // quad[p] = p^2 q mod r, built without forming p^2 q.
  std::vector<std::int64_t> quad(ur);
  {
    std::int64_t sq = 0;  // p^2 mod r
    for (std::int64_t p = 0; p < r; ++p) {
      quad[static_cast<std::size_t>(p)] =
          static_cast<std::int64_t>((static_cast<i128>(sq) * q_mod) % r);
      sq = (sq + 2 * p + 1) % r;
    }
  }

  GaussSumTable table{r, q_mod, std::vector<Complex>(ur)};
  for (std::int64_t m = 0; m < r; ++m) {
    CompensatedSum acc;
    std::int64_t linear = 0;  // p*m mod r
    for (std::int64_t p = 0; p < r; ++p) {
      std::int64_t idx = quad[static_cast<std::size_t>(p)] + linear;
      if (idx >= r) idx -= r;
      acc.add(roots[static_cast<std::size_t>(idx)]);
      linear += m;
      if (linear >= r) linear -= r;
    }
    table.values[static_cast<std::size_t>(m)] = acc.value() / static_cast<double>(r);
  }
  return table;
}

CurlicueSeries curlicue_series(std::int64_t N, std::uint64_t max_terms) {
  if (N < 1) throw DomainError("curlicue_series: N must be >= 1, got " + std::to_string(N));
  const auto uN = static_cast<std::uint64_t>(N);
  if (N > kMaxCurlicueModulus || uN * uN > max_terms) {
    throw ResourceError("curlicue_series: N=" + std::to_string(N) + " needs N^2 terms, budget is " +
                        std::to_string(max_terms));
  }
  const auto roots = unit_roots(N);
  const auto un = static_cast<std::size_t>(N);

  std::vector<std::int64_t> squares(un);
  std::int64_t sq = 0;
  for (std::int64_t m = 0; m < N; ++m) {
    squares[static_cast<std::size_t>(m)] = sq;
    sq = (sq + 2 * m + 1) % N;
  }

  CurlicueSeries series{N, std::vector<Complex>(un)};
  // idx[m] tracks m^2 n mod N as n advances.
  std::vector<std::int64_t> idx(un, 0);
  for (std::int64_t n = 0; n < N; ++n) {
    CompensatedSum acc;
    for (std::size_t m = 0; m < un; ++m) {
      acc.add(roots[static_cast<std::size_t>(idx[m])]);
      idx[m] += squares[m];
      if (idx[m] >= N) idx[m] -= N;
    }
    series.values[static_cast<std::size_t>(n)] = acc.value();
  }
  return series;
}

Complex phase_sum(std::span<const Term> terms, double linear, double quadratic, double tau) {
  return phase_sum_impl(terms, linear, quadratic, tau);
}

Complex phase_sum(std::span<const ComplexTerm> terms, double linear, double quadratic,
                  double tau) {
  return phase_sum_impl(terms, linear, quadratic, tau);
}

}  // namespace qfactor
