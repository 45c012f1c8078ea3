#pragma once

#include <cmath>

namespace anharmonic::detail {

// Compensated double-double arithmetic (~31 significant digits). Used where
// plain double loses digits to cancellation: the Airy Maclaurin series at
// moderate |x| and the oscillatory phase 2|x|^{3/2}/3 before reduction mod 2π.
// Classic error-free transformations (Dekker/Knuth); products rely on fma.
struct dd {
  double hi = 0.0;
  double lo = 0.0;

  constexpr dd() = default;
  constexpr dd(double h) : hi(h), lo(0.0) {}
  constexpr dd(double h, double l) : hi(h), lo(l) {}

  double value() const { return hi + lo; }
};

inline dd two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

inline dd quick_two_sum(double a, double b) {  // requires |a| >= |b|
  double s = a + b;
  return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
  double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline dd operator+(dd a, dd b) {
  dd s = two_sum(a.hi, b.hi);
  double lo = s.lo + a.lo + b.lo;
  return quick_two_sum(s.hi, lo);
}

inline dd operator-(dd a) { return {-a.hi, -a.lo}; }
inline dd operator-(dd a, dd b) { return a + (-b); }

inline dd operator*(dd a, dd b) {
  dd p = two_prod(a.hi, b.hi);
  double lo = p.lo + a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p.hi, lo);
}

inline dd operator*(dd a, double b) {
  dd p = two_prod(a.hi, b);
  double lo = p.lo + a.lo * b;
  return quick_two_sum(p.hi, lo);
}

inline dd operator/(dd a, double b) {
  double q1 = a.hi / b;
  dd r = a - two_prod(q1, b);
  double q2 = (r.hi + r.lo) / b;
  return quick_two_sum(q1, q2);
}

inline dd operator/(dd a, dd b) {
  double q1 = a.hi / b.hi;
  dd r = a - b * q1;
  double q2 = (r.hi + r.lo) / b.hi;
  return quick_two_sum(q1, q2);
}

// sqrt of a nonnegative double, refined to double-double accuracy.
inline dd dd_sqrt(double x) {
  if (x == 0.0) return {0.0, 0.0};
  double r = std::sqrt(x);
  dd rr = two_prod(r, r);
  double corr = ((x - rr.hi) - rr.lo) / (2.0 * r);
  return quick_two_sum(r, corr);
}

inline constexpr dd dd_two_pi{6.283185307179586232e+00, 2.449293598294706414e-16};
inline constexpr dd dd_pi_quarter{7.853981633974482790e-01, 3.061616997868383018e-17};

// Reduces a (positive, possibly large) phase mod 2π into [0, 2π).
inline dd reduce_two_pi(dd phase) {
  double k = std::floor(phase.value() / dd_two_pi.value());
  dd r = phase - dd_two_pi * k;
  while (r.value() < 0.0) r = r + dd_two_pi;
  while (r.value() >= dd_two_pi.value()) r = r - dd_two_pi;
  return r;
}

}  // namespace anharmonic::detail
