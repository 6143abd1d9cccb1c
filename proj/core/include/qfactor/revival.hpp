#pragma once

/// @file
/// Autocorrelation of a Gaussian-weighted quadratic spectrum and its exact
/// rewriting as a sum of Gauss-sum weighted shape functions near a fraction
/// q/r of the revival time. Time is measured in classical periods (T_cl = 1)
/// and N = T / T_cl.

#include <cstdint>
#include <span>
#include <vector>

#include "qfactor/quadratic_phase.hpp"

namespace qfactor {

/// Gaussian occupation weights W(m) = (2 pi dn^2)^(-1/2) exp(-(m/dn)^2 / 2)
/// for |m| <= cutoff, indexed relative to the central quantum number.
struct WeightTable {
  double delta_n = 1.0;
  std::int64_t center = 0;
  std::int64_t cutoff = 8;
  std::vector<Term> terms;

  /// Continuous extension of W at a real index.
  [[nodiscard]] double density(double mu) const;
  [[nodiscard]] double total() const;
};

/// Cutoff defaults to ceil(8 dn). Throws DomainError for dn <= 0.
[[nodiscard]] WeightTable gaussian_weights(double delta_n, std::int64_t cutoff = 0);

struct RevivalParams {
  std::int64_t N = 2;
  WeightTable weight;

  static RevivalParams gaussian(std::int64_t N, double delta_n);
  void validate() const;
};

/// Closed-form shape function and the quantities it is built from. sigma_i
/// carries the sign of (epsilon + delta_t) and is +infinity when that
/// combination vanishes (the imaginary Gaussian is then identically 1).
struct ShapeEval {
  std::int64_t m = 0;
  ReducedFraction fraction;
  double delta_t = 0.0;
  Complex amplitude;
  double sigma_r = 0.0;
  double sigma_i = 0.0;
  Complex prefactor;
};

struct MRange {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
};

/// S_N(tau) = sum_m W(m) exp[-2 pi i (m + m^2/N) tau].
///
/// tau is split into its nearest integer ell and a remainder; the ell part of
/// the phase, m^2 ell / N, is reduced with exact integer arithmetic.
[[nodiscard]] Complex autocorrelation(const RevivalParams& params, double tau);

/// S_N(ell + offset) for each offset, sharing the exact ell phases.
[[nodiscard]] std::vector<Complex> autocorrelation_window(const RevivalParams& params,
                                                          std::int64_t ell,
                                                          std::span<const double> offsets);

/// Shape function by adaptive Gauss-Kronrod quadrature of
///   integral over |mu| <= 8 dn of W(mu) exp{-2 pi i [(dt - m/r) mu + (eps + dt) mu^2 / N]}
/// to absolute tolerance 1e-9. Throws ConvergenceError on failure.
[[nodiscard]] Complex shape_function_quadrature(std::int64_t m, const ReducedFraction& fraction,
                                                double delta_t, const RevivalParams& params);

/// Analytic value of the same integral taken over the whole real line:
///   prefactor = (1 + 4 pi i dn^2 b)^(-1/2),  b = (eps + dt)/N
///   sigma_r^2 = 1/(4 pi^2 dn^2) + 4 dn^2 b^2
///   sigma_i^2 = 1/(16 pi^3 dn^4 b) + b/pi
///   amplitude = prefactor exp[-a^2 / (2 sigma_r^2)] exp[+i a^2 / (2 sigma_i^2)],
/// with a = dt - m/r.
[[nodiscard]] ShapeEval shape_function_closed(std::int64_t m, const ReducedFraction& fraction,
                                              double delta_t, const RevivalParams& params);

/// Indices m whose shape functions can exceed tail_tolerance in magnitude.
[[nodiscard]] MRange significant_m_range(const ReducedFraction& fraction, double delta_t,
                                         const RevivalParams& params,
                                         double tail_tolerance = 1e-12);

/// sum over m in range of W_m^(r) I_m^(r)(dt), using gauss_sum_table and
/// shape_function_closed.
[[nodiscard]] Complex decomposition_sum(const RevivalParams& params,
                                        const ReducedFraction& fraction, double delta_t,
                                        MRange m_range);

/// Same, over significant_m_range.
[[nodiscard]] Complex decomposition_sum(const RevivalParams& params,
                                        const ReducedFraction& fraction, double delta_t);

/// Width of the m = 0 Gaussian at its narrowest point: 1/(2 pi dn).
[[nodiscard]] double minimal_width(double delta_n);

}  // namespace qfactor
