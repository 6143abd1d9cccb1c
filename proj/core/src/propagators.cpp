#include "qfactor/propagators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qfactor/double_double.hpp"
#include "qfactor/error.hpp"

namespace qfactor {

namespace {

constexpr double kPi = std::numbers::pi;

// exp(-2 pi i n^2 t/T); n^2 * t/T is reduced mod 1 in double-double, so
// integer and half-integer t/T give exact signs.
Complex quadratic_phase(std::int64_t n, double t_over_T) {
  const double n2 = static_cast<double>(n) * static_cast<double>(n);
  return cycle_phase(dd::centered_fraction(dd::two_prod(n2, t_over_T)));
}

void require_uniform(const WavePacket& packet, const char* who) {
  if (packet.x.size() != packet.amplitude.size() || packet.x.size() < 2) {
    throw DomainError(std::string(who) + ": packet needs at least two matching samples");
  }
  if (!(packet.grid_step > 0.0)) {
    throw DomainError(std::string(who) + ": packet grid_step must be positive");
  }
}

// Linear interpolation of a sampled partial wave; zero outside its support.
Complex sample_partial_wave(const WavePacket& wave, double x) {
  const double pos = (x - wave.x.front()) / wave.grid_step;
  if (pos < 0.0 || pos > static_cast<double>(wave.x.size() - 1)) return {};
  const auto i = static_cast<std::size_t>(pos);
  if (i + 1 >= wave.x.size()) return wave.amplitude.back();
  const double frac = pos - static_cast<double>(i);
  return (1.0 - frac) * wave.amplitude[i] + frac * wave.amplitude[i + 1];
}

std::vector<Complex> talbot_fourier_coefficients(const WavePacket& wave, double period,
                                                 int cutoff) {
  const double kappa = 2.0 * kPi / period;
  std::vector<Complex> c(static_cast<std::size_t>(2 * cutoff + 1));
  for (int m = -cutoff; m <= cutoff; ++m) {
    CompensatedSum acc;
    for (std::size_t j = 0; j < wave.x.size(); ++j) {
      const double angle = kappa * m * wave.x[j];
      acc.add(wave.amplitude[j] * Complex{std::cos(angle), std::sin(angle)});
    }
    c[static_cast<std::size_t>(m + cutoff)] = acc.value() * (wave.grid_step / period);
  }
  return c;
}

WavePacket make_output(std::span<const double> x_grid) {
  WavePacket out;
  out.x.assign(x_grid.begin(), x_grid.end());
  out.amplitude.assign(x_grid.size(), Complex{});
  out.grid_step = x_grid.size() > 1 ? x_grid[1] - x_grid[0] : 0.0;
  return out;
}

WavePacket talbot_spectral(const WavePacket& wave, double t_over_T,
                           const PropagatorConfig& config, std::span<const double> x_grid) {
  const int cutoff = config.mode_cutoff;
  const auto c = talbot_fourier_coefficients(wave, config.size, cutoff);
  std::vector<Complex> evolved(c.size());
  for (int m = -cutoff; m <= cutoff; ++m) {
    const auto i = static_cast<std::size_t>(m + cutoff);
    evolved[i] = c[i] * quadratic_phase(m, t_over_T);
  }
  WavePacket out = make_output(x_grid);
  const double kappa = 2.0 * kPi / config.size;
  for (std::size_t j = 0; j < x_grid.size(); ++j) {
    CompensatedSum acc;
    for (int m = -cutoff; m <= cutoff; ++m) {
      const double angle = -kappa * m * x_grid[j];
      acc.add(evolved[static_cast<std::size_t>(m + cutoff)] *
              Complex{std::cos(angle), std::sin(angle)});
    }
    out.amplitude[j] = acc.value();
  }
  return out;
}

WavePacket talbot_identity(const WavePacket& wave, const PropagatorConfig& config,
                           std::span<const double> x_grid) {
  WavePacket out = make_output(x_grid);
  const double d = config.size;
  for (std::size_t j = 0; j < x_grid.size(); ++j) {
    const double x = x_grid[j];
    // Images whose support can reach x.
    const auto n_lo = static_cast<int>(std::floor((x - wave.x.back()) / d));
    const auto n_hi = static_cast<int>(std::ceil((x - wave.x.front()) / d));
    Complex v;
    for (int n = n_lo; n <= n_hi; ++n) v += sample_partial_wave(wave, x - n * d);
    out.amplitude[j] = v;
  }
  return out;
}

WavePacket talbot_direct(const WavePacket& wave, double t_over_T, const PropagatorConfig& config,
                         std::span<const double> x_grid) {
  if (t_over_T < 0.0) throw DomainError("propagate_talbot: direct form needs t >= 0");
  if (t_over_T == 0.0) return talbot_identity(wave, config, x_grid);

  const double d = config.size;
  const double t = t_over_T * config.talbot_time();
  const double alpha = 1.0 / (2.0 * t);
  // N(t) = sqrt(alpha / (pi i)) = sqrt(alpha/pi) exp(-i pi/4)
  const Complex norm = std::sqrt(alpha / kPi) * std::polar(1.0, -kPi / 4.0) * wave.grid_step;

  WavePacket out = make_output(x_grid);
  std::vector<Complex> image(x_grid.size());

  auto add_image = [&](int n) {
    double peak = 0.0;
    for (std::size_t j = 0; j < x_grid.size(); ++j) {
      CompensatedSum acc;
      const double shifted = x_grid[j] - n * d;
      for (std::size_t k = 0; k < wave.x.size(); ++k) {
        const double u = shifted - wave.x[k];
        const double angle = alpha * u * u;
        acc.add(wave.amplitude[k] * Complex{std::cos(angle), std::sin(angle)});
      }
      image[j] = norm * acc.value();
      peak = std::max(peak, std::abs(image[j]));
    }
    for (std::size_t j = 0; j < x_grid.size(); ++j) out.amplitude[j] += image[j];
    return peak;
  };

  double overall = add_image(0);
  for (int direction : {1, -1}) {
    int quiet = 0;
    for (int k = 1; k <= config.mode_cutoff && quiet < 2; ++k) {
      const double peak = add_image(direction * k);
      overall = std::max(overall, peak);
      quiet = peak < 1e-15 * overall ? quiet + 1 : 0;
    }
  }
  return out;
}

}  // namespace

PropagatorConfig PropagatorConfig::talbot(double period, int mode_cutoff) {
  PropagatorConfig c{Geometry::talbot, period, mode_cutoff};
  c.validate();
  return c;
}

PropagatorConfig PropagatorConfig::box(double length, int mode_cutoff) {
  PropagatorConfig c{Geometry::box, length, mode_cutoff};
  c.validate();
  return c;
}

double PropagatorConfig::talbot_time() const {
  return geometry == Geometry::talbot ? size * size / kPi : 4.0 * size * size / kPi;
}

void PropagatorConfig::validate() const {
  if (!(size > 0.0) || !std::isfinite(size)) {
    throw DomainError("PropagatorConfig: size must be positive and finite");
  }
  if (mode_cutoff < 1) throw DomainError("PropagatorConfig: mode_cutoff must be >= 1");
}

double WavePacket::norm() const {
  if (amplitude.size() < 2) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < amplitude.size(); ++i) {
    const double w = (i == 0 || i + 1 == amplitude.size()) ? 0.5 : 1.0;
    sum += w * std::norm(amplitude[i]);
  }
  return sum * grid_step;
}

std::vector<double> WavePacket::density() const {
  std::vector<double> rho(amplitude.size());
  std::transform(amplitude.begin(), amplitude.end(), rho.begin(),
                 [](const Complex& z) { return std::norm(z); });
  return rho;
}

double BoxCoefficients::total_weight() const {
  double sum = 0.0;
  for (const auto& c : psi_n) sum += std::norm(c);
  return sum;
}

std::vector<double> uniform_grid(double a, double b, std::size_t n, bool inclusive) {
  if (n < 2) throw DomainError("uniform_grid: need at least two points");
  const double step = (b - a) / static_cast<double>(inclusive ? n - 1 : n);
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = a + step * static_cast<double>(i);
  if (inclusive) grid.back() = b;
  return grid;
}

WavePacket gaussian_packet(std::span<const double> x_grid, double centre, double width,
                           double momentum) {
  if (!(width > 0.0)) throw DomainError("gaussian_packet: width must be positive");
  WavePacket packet = make_output(x_grid);
  const double scale = std::pow(2.0 * kPi * width * width, -0.25);
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    const double u = x_grid[i] - centre;
    packet.amplitude[i] =
        scale * std::exp(-u * u / (4.0 * width * width)) * std::polar(1.0, momentum * x_grid[i]);
  }
  return packet;
}

double box_eigenfunction(int n, double x, double length) {
  return std::sqrt(2.0 / length) * std::sin(n * kPi * x / length);
}

BoxCoefficients box_expand(const WavePacket& packet, const PropagatorConfig& config) {
  config.validate();
  if (config.geometry != Geometry::box) throw DomainError("box_expand: config is not a box");
  require_uniform(packet, "box_expand");
  const double L = config.size;
  const double slack = 1e-12 * L;
  for (std::size_t i = 0; i < packet.x.size(); ++i) {
    const bool outside = packet.x[i] < -slack || packet.x[i] > L + slack;
    if (outside && std::abs(packet.amplitude[i]) > 1e-12) {
      throw DomainError("box_expand: packet extends outside [0, L] at x = " +
                        std::to_string(packet.x[i]));
    }
  }

  BoxCoefficients coeffs;
  coeffs.psi_n.resize(static_cast<std::size_t>(config.mode_cutoff));
  const std::size_t last = packet.x.size() - 1;
  for (int n = 1; n <= config.mode_cutoff; ++n) {
    CompensatedSum acc;
    for (std::size_t i = 0; i <= last; ++i) {
      const double x = packet.x[i];
      if (x < 0.0 || x > L) continue;
      const double w = (i == 0 || i == last) ? 0.5 : 1.0;
      acc.add(w * box_eigenfunction(n, x, L) * packet.amplitude[i]);
    }
    coeffs.psi_n[static_cast<std::size_t>(n - 1)] = acc.value() * packet.grid_step;
  }
  return coeffs;
}

WavePacket propagate_box(const BoxCoefficients& coeffs, double t_over_T,
                         const PropagatorConfig& config, std::span<const double> x_grid) {
  config.validate();
  const double L = config.size;
  const auto modes = std::min(coeffs.psi_n.size(), static_cast<std::size_t>(config.mode_cutoff));
  std::vector<Complex> evolved(modes);
  for (std::size_t i = 0; i < modes; ++i) {
    evolved[i] = coeffs.psi_n[i] * quadratic_phase(static_cast<std::int64_t>(i + 1), t_over_T);
  }
  WavePacket out = make_output(x_grid);
  for (std::size_t j = 0; j < x_grid.size(); ++j) {
    CompensatedSum acc;
    for (std::size_t i = 0; i < modes; ++i) {
      acc.add(evolved[i] * box_eigenfunction(static_cast<int>(i + 1), x_grid[j], L));
    }
    out.amplitude[j] = acc.value();
  }
  return out;
}

WavePacket propagate_talbot(const WavePacket& partial_wave, double t_over_T,
                            const PropagatorConfig& config, TalbotForm form,
                            std::span<const double> x_grid) {
  config.validate();
  if (config.geometry != Geometry::talbot) {
    throw DomainError("propagate_talbot: config is not a talbot geometry");
  }
  require_uniform(partial_wave, "propagate_talbot");
  return form == TalbotForm::spectral ? talbot_spectral(partial_wave, t_over_T, config, x_grid)
                                      : talbot_direct(partial_wave, t_over_T, config, x_grid);
}

Complex box_via_talbot(double y, double x, double t_over_T, const PropagatorConfig& config) {
  config.validate();
  const double L = config.size;
  const int K = config.mode_cutoff;
  auto green_t = [&](double source) {
    CompensatedSum acc;
    for (int n = -K; n <= K; ++n) {
      const double angle = -n * kPi * (x - source) / L;
      acc.add(Complex{std::cos(angle), std::sin(angle)} * quadratic_phase(n, t_over_T));
    }
    return acc.value() / (2.0 * L);
  };
  return green_t(y) - green_t(-y);
}

Complex box_green_function(double y, double x, double t_over_T, const PropagatorConfig& config) {
  config.validate();
  const double L = config.size;
  CompensatedSum acc;
  for (int n = 1; n <= config.mode_cutoff; ++n) {
    const double k = n * kPi / L;
    acc.add(std::sin(k * x) * std::sin(k * y) * quadratic_phase(n, t_over_T));
  }
  return acc.value() * (2.0 / L);
}

WavePacketGrid carpet_grid(const WavePacket& packet, const PropagatorConfig& config,
                           std::span<const double> t_over_T, std::size_t nx,
                           std::uint64_t budget) {
  config.validate();
  if (nx < 16) throw DomainError("carpet_grid: nx must be >= 16");
  if (t_over_T.empty()) throw DomainError("carpet_grid: need at least one time");
  const std::uint64_t modes = config.geometry == Geometry::box
                                  ? static_cast<std::uint64_t>(config.mode_cutoff)
                                  : static_cast<std::uint64_t>(2 * config.mode_cutoff + 1);
  const long double work = static_cast<long double>(nx) * t_over_T.size() * modes;
  if (work > static_cast<long double>(budget)) {
    throw ResourceError("carpet_grid: " + std::to_string(static_cast<double>(work)) +
                        " term evaluations exceed budget " + std::to_string(budget));
  }

  WavePacketGrid grid;
  grid.t_grid.assign(t_over_T.begin(), t_over_T.end());
  grid.density.reserve(nx * t_over_T.size());

  if (config.geometry == Geometry::box) {
    grid.x_grid = uniform_grid(0.0, config.size, nx, true);
    const auto coeffs = box_expand(packet, config);
    for (double t : t_over_T) {
      const auto rho = propagate_box(coeffs, t, config, grid.x_grid).density();
      grid.density.insert(grid.density.end(), rho.begin(), rho.end());
    }
  } else {
    grid.x_grid = uniform_grid(0.0, config.size, nx, false);
    for (double t : t_over_T) {
      const auto rho =
          propagate_talbot(packet, t, config, TalbotForm::spectral, grid.x_grid).density();
      grid.density.insert(grid.density.end(), rho.begin(), rho.end());
    }
  }
  return grid;
}

int suggest_mode_cutoff(const WavePacket& packet, const PropagatorConfig& config, double rel_tol,
                        int max_cutoff) {
  PropagatorConfig wide = config;
  wide.mode_cutoff = max_cutoff;
  std::vector<double> magnitude;  // indexed by mode number (box) or |m| (talbot)
  if (config.geometry == Geometry::box) {
    const auto coeffs = box_expand(packet, wide);
    for (const auto& c : coeffs.psi_n) magnitude.push_back(std::abs(c));
  } else {
    require_uniform(packet, "suggest_mode_cutoff");
    // Sampled coefficients alias with period equal to the sample count, so
    // only |m| below the Nyquist index carries information.
    const int nyquist = static_cast<int>(std::min<std::size_t>(
        packet.x.size() / 2, static_cast<std::size_t>(max_cutoff)));
    const auto c = talbot_fourier_coefficients(packet, config.size, nyquist);
    for (int m = 0; m <= nyquist; ++m) {
      magnitude.push_back(std::max(std::abs(c[static_cast<std::size_t>(nyquist + m)]),
                                   std::abs(c[static_cast<std::size_t>(nyquist - m)])));
    }
  }
  const double peak = *std::max_element(magnitude.begin(), magnitude.end());
  std::size_t last = 0;
  for (std::size_t i = 0; i < magnitude.size(); ++i) {
    if (magnitude[i] >= rel_tol * peak) last = i;
  }
  // Box entries start at n = 1; talbot entries start at |m| = 0.
  const int cutoff = static_cast<int>(config.geometry == Geometry::box ? last + 2 : last + 1);
  return std::clamp(cutoff, 1, max_cutoff);
}

}  // namespace qfactor
