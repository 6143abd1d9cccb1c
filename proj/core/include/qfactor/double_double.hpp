#pragma once

// Error-free transformations and a minimal double-double type, used to split
// large phase arguments into whole cycles and a fractional remainder without
// losing the low-order bits.

#include <cmath>

#ifdef __FAST_MATH__
#error "-ffast-math breaks the error-free transformations in double_double.hpp"
#endif

namespace qfactor::dd {

struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;
};

inline DoubleDouble two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  const double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

inline DoubleDouble quick_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}

inline DoubleDouble two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline DoubleDouble add(DoubleDouble a, DoubleDouble b) {
  DoubleDouble s = two_sum(a.hi, b.hi);
  DoubleDouble t = two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return quick_two_sum(s.hi, s.lo);
}

inline DoubleDouble mul(DoubleDouble a, double b) {
  DoubleDouble p = two_prod(a.hi, b);
  p.lo = std::fma(a.lo, b, p.lo);
  return quick_two_sum(p.hi, p.lo);
}

inline DoubleDouble mul(DoubleDouble a, DoubleDouble b) {
  DoubleDouble p = two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p.hi, p.lo);
}

// Fractional part in [-0.5, 0.5]; whole cycles are discarded exactly.
inline double centered_fraction(DoubleDouble x) {
  const double whole = std::nearbyint(x.hi);
  // x.hi - whole is exact (Sterbenz) once |x.hi| >= 1, and trivially so below.
  DoubleDouble r = two_sum(x.hi - whole, x.lo);
  const double again = std::nearbyint(r.hi);
  return (r.hi - again) + r.lo;
}

}  // namespace qfactor::dd
