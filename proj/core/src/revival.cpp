#include "qfactor/revival.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "int128.hpp"
#include "qfactor/error.hpp"
#include "qfactor/quadrature.hpp"

namespace qfactor {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

double WeightTable::density(double mu) const {
  const double z = mu / delta_n;
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * kPi * delta_n * delta_n);
}

double WeightTable::total() const {
  CompensatedSum acc;
  for (const auto& t : terms) acc.add(t.weight);
  return acc.value().real();
}

WeightTable gaussian_weights(double delta_n, std::int64_t cutoff) {
  if (!(delta_n > 0.0) || !std::isfinite(delta_n)) {
    throw DomainError("gaussian_weights: delta_n must be positive and finite");
  }
  if (cutoff < 0) throw DomainError("gaussian_weights: cutoff must be non-negative");
  WeightTable table;
  table.delta_n = delta_n;
  table.cutoff = cutoff > 0 ? cutoff : static_cast<std::int64_t>(std::ceil(8.0 * delta_n));
  table.terms.reserve(static_cast<std::size_t>(2 * table.cutoff + 1));
  for (std::int64_t m = -table.cutoff; m <= table.cutoff; ++m) {
    table.terms.push_back({m, table.density(static_cast<double>(m))});
  }
  return table;
}

RevivalParams RevivalParams::gaussian(std::int64_t N, double delta_n) {
  RevivalParams p{N, gaussian_weights(delta_n)};
  p.validate();
  return p;
}

void RevivalParams::validate() const {
  if (N < 2) throw DomainError("RevivalParams: N must be >= 2, got " + std::to_string(N));
  if (weight.terms.empty()) throw DomainError("RevivalParams: empty weight table");
}

std::vector<Complex> autocorrelation_window(const RevivalParams& params, std::int64_t ell,
                                            std::span<const double> offsets) {
  params.validate();
  const std::int64_t N = params.N;
  const std::int64_t ell_mod = floor_mod(ell, N);

  // exp(-2 pi i (m ell + m^2 ell / N)) with m ell an integer: only
  // (m^2 ell mod N) / N survives.
  std::vector<ComplexTerm> terms;
  terms.reserve(params.weight.terms.size());
  for (const auto& t : params.weight.terms) {
    const auto m_mod = static_cast<i128>(floor_mod(t.m, N));
    const auto residue = static_cast<std::int64_t>((m_mod * m_mod % N) * ell_mod % N);
    const double cycles = static_cast<double>(residue) / static_cast<double>(N);
    terms.push_back({t.m, t.weight * cycle_phase(cycles)});
  }

  const double quadratic = 1.0 / static_cast<double>(N);
  std::vector<Complex> out;
  out.reserve(offsets.size());
  for (double offset : offsets) out.push_back(phase_sum(terms, 1.0, quadratic, offset));
  return out;
}

Complex autocorrelation(const RevivalParams& params, double tau) {
  if (!std::isfinite(tau) || std::abs(tau) > 0x1p52) {
    throw DomainError("autocorrelation: tau must be finite and below 2^52 in magnitude");
  }
  const double ell = std::nearbyint(tau);
  const double offset = tau - ell;
  return autocorrelation_window(params, static_cast<std::int64_t>(ell), {&offset, 1}).front();
}

Complex shape_function_quadrature(std::int64_t m, const ReducedFraction& fraction,
                                  double delta_t, const RevivalParams& params) {
  params.validate();
  if (fraction.r < 1) throw DomainError("shape_function_quadrature: r must be >= 1");
  const double linear = delta_t - static_cast<double>(m) / static_cast<double>(fraction.r);
  const double quadratic = (fraction.epsilon + delta_t) / static_cast<double>(params.N);
  const WeightTable& w = params.weight;
  auto integrand = [&](double mu) {
    return w.density(mu) * cycle_phase(linear * mu + quadratic * mu * mu);
  };
  const double bound = 8.0 * w.delta_n;
  return integrate_adaptive(integrand, -bound, bound, 1e-9, 20000).value;
}

ShapeEval shape_function_closed(std::int64_t m, const ReducedFraction& fraction, double delta_t,
                                const RevivalParams& params) {
  params.validate();
  if (fraction.r < 1) throw DomainError("shape_function_closed: r must be >= 1");
  const double dn = params.weight.delta_n;
  const double dn2 = dn * dn;
  const double offset = delta_t - static_cast<double>(m) / static_cast<double>(fraction.r);
  const double b = (fraction.epsilon + delta_t) / static_cast<double>(params.N);

  ShapeEval out;
  out.m = m;
  out.fraction = fraction;
  out.delta_t = delta_t;
  out.prefactor = 1.0 / std::sqrt(Complex{1.0, 4.0 * kPi * dn2 * b});
  const double sigma_r2 = 1.0 / (4.0 * kPi * kPi * dn2) + 4.0 * dn2 * b * b;
  out.sigma_r = std::sqrt(sigma_r2);

  const double real_gauss = std::exp(-offset * offset / (2.0 * sigma_r2));
  if (b == 0.0) {
    out.sigma_i = std::numeric_limits<double>::infinity();
    out.amplitude = out.prefactor * real_gauss;
    return out;
  }
  const double abs_b = std::abs(b);
  const double sigma_i2 = 1.0 / (16.0 * kPi * kPi * kPi * dn2 * dn2 * abs_b) + abs_b / kPi;
  out.sigma_i = std::copysign(std::sqrt(sigma_i2), b);
  const double phase = std::copysign(offset * offset / (2.0 * sigma_i2), b);
  out.amplitude = out.prefactor * real_gauss * std::polar(1.0, phase);
  return out;
}

MRange significant_m_range(const ReducedFraction& fraction, double delta_t,
                           const RevivalParams& params, double tail_tolerance) {
  const ShapeEval centre = shape_function_closed(0, fraction, delta_t, params);
  const double reach = centre.sigma_r * std::sqrt(2.0 * std::log(1.0 / tail_tolerance));
  const auto r = static_cast<double>(fraction.r);
  return {static_cast<std::int64_t>(std::floor(r * (delta_t - reach))) - 1,
          static_cast<std::int64_t>(std::ceil(r * (delta_t + reach))) + 1};
}

Complex decomposition_sum(const RevivalParams& params, const ReducedFraction& fraction,
                          double delta_t, MRange m_range) {
  const GaussSumTable table = gauss_sum_table(fraction.r, fraction.q);
  CompensatedSum acc;
  for (std::int64_t m = m_range.lo; m <= m_range.hi; ++m) {
    acc.add(table.at(m) * shape_function_closed(m, fraction, delta_t, params).amplitude);
  }
  return acc.value();
}

Complex decomposition_sum(const RevivalParams& params, const ReducedFraction& fraction,
                          double delta_t) {
  return decomposition_sum(params, fraction, delta_t,
                           significant_m_range(fraction, delta_t, params));
}

double minimal_width(double delta_n) { return 1.0 / (2.0 * kPi * delta_n); }

}  // namespace qfactor
