#pragma once

/// @file
/// Talbot (periodic free space) and particle-in-a-box propagation in units
/// hbar = M = 1. Times are passed as fractions t/T of the Talbot (revival)
/// time, so every dynamical phase reads 2 pi n^2 t/T.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qfactor/quadratic_phase.hpp"

namespace qfactor {

enum class Geometry { talbot, box };

enum class TalbotForm { direct, spectral };

struct PropagatorConfig {
  Geometry geometry = Geometry::box;
  /// Grating period d (talbot) or box length L (box).
  double size = 1.0;
  /// Largest |m| in the spectral Talbot sum, largest n for the box, largest
  /// image index |n| for the direct Talbot form.
  int mode_cutoff = 256;

  static PropagatorConfig talbot(double period, int mode_cutoff = 64);
  static PropagatorConfig box(double length, int mode_cutoff = 256);

  /// T = d^2/pi (talbot) or T = 4 L^2/pi (box).
  [[nodiscard]] double talbot_time() const;
  void validate() const;
};

/// Complex samples on a uniform grid.
struct WavePacket {
  std::vector<double> x;
  std::vector<Complex> amplitude;
  double grid_step = 0.0;

  /// Trapezoid estimate of the integral of |amplitude|^2.
  [[nodiscard]] double norm() const;
  [[nodiscard]] std::vector<double> density() const;
};

/// Coefficients psi_n, stored at index n - 1 for n = 1..mode_cutoff.
struct BoxCoefficients {
  std::vector<Complex> psi_n;

  [[nodiscard]] double total_weight() const;
};

/// Row-major |psi(x,t)|^2; density[i * x_grid.size() + j] is t_grid[i], x_grid[j].
struct WavePacketGrid {
  std::vector<double> x_grid;
  std::vector<double> t_grid;
  std::vector<double> density;

  [[nodiscard]] double at(std::size_t row, std::size_t col) const {
    return density[row * x_grid.size() + col];
  }
};

/// n points from a to b; b included only when inclusive is set (step is
/// (b - a)/(n - 1) then, (b - a)/n otherwise).
[[nodiscard]] std::vector<double> uniform_grid(double a, double b, std::size_t n, bool inclusive);

/// Normalized Gaussian amplitude whose density has standard deviation width.
[[nodiscard]] WavePacket gaussian_packet(std::span<const double> x_grid, double centre,
                                         double width, double momentum = 0.0);

/// u_n(x) = sqrt(2/L) sin(n pi x / L).
[[nodiscard]] double box_eigenfunction(int n, double x, double length);

/// psi_n = integral of phi(y) u_n(y) by trapezoid quadrature. Throws
/// DomainError for a non-box config or a packet with amplitude above 1e-12
/// outside [0, L].
[[nodiscard]] BoxCoefficients box_expand(const WavePacket& packet, const PropagatorConfig& config);

/// psi(x,t) = sum_n psi_n u_n(x) exp(-2 pi i n^2 t/T).
[[nodiscard]] WavePacket propagate_box(const BoxCoefficients& coeffs, double t_over_T,
                                       const PropagatorConfig& config,
                                       std::span<const double> x_grid);

/// One period of the field produced by the infinite array of copies of
/// partial_wave spaced by d.
///
/// spectral: sum_m c_m exp(-i 2 pi m x/d) exp(-2 pi i m^2 t/T) with
/// c_m = (1/d) * integral of phi(y) exp(i 2 pi m y/d), |m| <= mode_cutoff.
///
/// direct: sum over images n of the free Fresnel integral
/// N(t) * integral of exp[i alpha (x - y - n d)^2] phi(y), alpha = 1/(2t),
/// evaluated by the midpoint rule on the partial-wave samples. Images are
/// added outward from n = 0 until two consecutive images contribute less
/// than 1e-15 of the peak (or |n| reaches mode_cutoff). t = 0 returns the
/// periodized partial wave. Throws DomainError for t < 0.
[[nodiscard]] WavePacket propagate_talbot(const WavePacket& partial_wave, double t_over_T,
                                          const PropagatorConfig& config, TalbotForm form,
                                          std::span<const double> x_grid);

/// G_T(x,t|y,0) - G_T(x,t|-y,0), with
/// G_T(x,t|y,0) = 1/(2L) sum_{|n| <= cutoff} exp[-i n pi (x-y)/L] exp(-2 pi i n^2 t/T).
[[nodiscard]] Complex box_via_talbot(double y, double x, double t_over_T,
                                     const PropagatorConfig& config);

/// (2/L) sum_{n=1}^{cutoff} sin(k_n x) sin(k_n y) exp(-2 pi i n^2 t/T).
[[nodiscard]] Complex box_green_function(double y, double x, double t_over_T,
                                         const PropagatorConfig& config);

inline constexpr std::uint64_t kDefaultGridBudget = 1'000'000'000;

/// Density rows for each requested t/T. The box geometry samples [0, L]
/// inclusively; the talbot geometry samples one period [0, d) and treats
/// packet as the partial wave (spectral form). Throws DomainError for
/// nx < 16 or an empty time list, ResourceError when nx * nt * modes
/// exceeds budget.
[[nodiscard]] WavePacketGrid carpet_grid(const WavePacket& packet, const PropagatorConfig& config,
                                         std::span<const double> t_over_T, std::size_t nx,
                                         std::uint64_t budget = kDefaultGridBudget);

/// Smallest cutoff whose last retained coefficient is below rel_tol of the
/// largest, searched up to max_cutoff.
[[nodiscard]] int suggest_mode_cutoff(const WavePacket& packet, const PropagatorConfig& config,
                                      double rel_tol = 1e-12, int max_cutoff = 4096);

}  // namespace qfactor
