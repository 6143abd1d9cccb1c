#pragma once

#include <complex>
#include <functional>

namespace qfactor {

struct QuadratureResult {
  std::complex<double> value;
  double error_estimate = 0.0;
  int intervals = 0;
};

/// Globally adaptive Gauss-Kronrod (7/15) integration of a complex integrand
/// over [a, b]. Bisects the interval with the largest error estimate until
/// the summed estimate drops below abs_tol. Throws ConvergenceError when
/// max_intervals is reached first.
[[nodiscard]] QuadratureResult integrate_adaptive(
    const std::function<std::complex<double>(double)>& f, double a, double b, double abs_tol,
    int max_intervals = 4000);

}  // namespace qfactor
