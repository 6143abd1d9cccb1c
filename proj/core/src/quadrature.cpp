#include "qfactor/quadrature.hpp"

#include <array>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "qfactor/error.hpp"

namespace qfactor {

namespace {

// Kronrod 15-point abscissae (positive half, descending) and weights;
// every odd index is also a 7-point Gauss node.
constexpr std::array<double, 8> kXk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  std::complex<double> value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment kronrod15(const std::function<std::complex<double>(double)>& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const std::complex<double> fc = f(centre);
  std::complex<double> kronrod = fc * kWk[7];
  std::complex<double> gauss = fc * kWg[3];
  for (std::size_t i = 0; i < 7; ++i) {
    const double dx = half * kXk[i];
    const std::complex<double> pair = f(centre - dx) + f(centre + dx);
    kronrod += kWk[i] * pair;
    if (i % 2 == 1) gauss += kWg[i / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<std::complex<double>(double)>& f,
                                    double a, double b, double abs_tol, int max_intervals) {
  std::priority_queue<Segment> heap;
  heap.push(kronrod15(f, a, b));
  std::complex<double> total = heap.top().value;
  double error = heap.top().error;

  while (error > abs_tol) {
    if (static_cast<int>(heap.size()) >= max_intervals) {
      throw ConvergenceError("integrate_adaptive: error estimate " + std::to_string(error) +
                             " above tolerance after " + std::to_string(heap.size()) +
                             " intervals");
    }
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Segment left = kronrod15(f, worst.a, mid);
    const Segment right = kronrod15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum to shed the drift of the incremental updates.
  QuadratureResult result;
  result.intervals = static_cast<int>(heap.size());
  result.error_estimate = 0.0;
  while (!heap.empty()) {
    result.value += heap.top().value;
    result.error_estimate += heap.top().error;
    heap.pop();
  }
  return result;
}

}  // namespace qfactor
