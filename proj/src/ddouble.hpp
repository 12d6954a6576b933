#pragma once

// Double-double arithmetic (unevaluated sum hi + lo, ~32 significant digits).
// Only what the RK4 kernel needs.

#include <cmath>

namespace blochsim::detail {

struct DD {
  double hi = 0.0;
  double lo = 0.0;

  DD() = default;
  DD(double x) : hi(x) {}  // NOLINT(google-explicit-constructor)
  DD(double h, double l) : hi(h), lo(l) {}
};

inline DD quick_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}

inline DD two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

inline DD operator+(DD a, DD b) {
  DD s = two_sum(a.hi, b.hi);
  const DD t = two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return quick_two_sum(s.hi, s.lo);
}

inline DD operator-(DD a) { return {-a.hi, -a.lo}; }
inline DD operator-(DD a, DD b) { return a + (-b); }

inline DD operator*(DD a, double b) {
  const double p = a.hi * b;
  const double e = std::fma(a.hi, b, -p) + a.lo * b;
  return quick_two_sum(p, e);
}

inline DD operator*(DD a, DD b) {
  const double p = a.hi * b.hi;
  const double e = std::fma(a.hi, b.hi, -p) + (a.hi * b.lo + a.lo * b.hi);
  return quick_two_sum(p, e);
}

// x / d rounded to double-double.
inline DD divide(double x, double d) {
  const double q = x / d;
  return {q, std::fma(-q, d, x) / d};
}

}  // namespace blochsim::detail
