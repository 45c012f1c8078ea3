#pragma once

#include <anharmonic/detail/double_double.hpp>
#include <anharmonic/error.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

// Airy function evaluation on the real line, the oscillatory amplitude/phase
// decomposition for x < -1, and negative-axis zeros of Ai and Ai'.
//
// Two regimes: a Maclaurin series summed in double-double for |x| <= 9, and
// the standard asymptotic expansions beyond. Error estimates are relative to
// max(|value|, 1e-300); near a negative-axis zero the absolute error is of
// order 1e-16 times the local envelope |x|^{-1/4}, as for any fixed-precision
// evaluator.

namespace anharmonic {

struct AiryEval {
  double x = 0.0;
  double ai = 0.0;
  double ai_prime = 0.0;
  double est_rel_err = 0.0;
};

struct AsymptoticPieces {
  double x = 0.0;              // argument, x < -1
  double zeta = 0.0;           // 2|x|^{3/2}/3
  std::complex<double> theta;  // slowly varying amplitude
  // Reconstruction: Ai(x) = exp(i zeta) theta + exp(-i zeta) conj(theta).
};

enum class ZeroKind { ai, ai_prime };

struct ZeroList {
  ZeroKind kind = ZeroKind::ai;
  std::vector<double> zeros;  // negative, strictly decreasing
};

namespace detail {

inline constexpr double airy_series_split = 9.0;
inline constexpr double airy_domain_limit = 1.0e4;

// Ai(0) = 3^{-2/3}/Gamma(2/3) and Ai'(0) = -3^{-1/3}/Gamma(1/3) as
// double-double pairs (hi + lo reproduces ~32 correct digits).
inline constexpr dd airy_ai0{3.55028053887817219e-01, 2.05233632436211994e-17};
inline constexpr dd airy_aip0{-2.58819403792806824e-01, 2.52224311161083207e-17};

// Asymptotic coefficients u_k (and v_k = -(6k+1)/(6k-1) u_k):
// u_0 = 1, u_{k+1} = u_k (6k+1)(6k+5) / (72(k+1)).
inline constexpr std::size_t airy_asym_terms = 40;

inline constexpr std::array<double, airy_asym_terms> airy_u = [] {
  std::array<double, airy_asym_terms> u{};
  u[0] = 1.0;
  for (std::size_t k = 0; k + 1 < airy_asym_terms; ++k)
    u[k + 1] = u[k] * (6.0 * k + 1.0) * (6.0 * k + 5.0) / (72.0 * (k + 1.0));
  return u;
}();

inline constexpr std::array<double, airy_asym_terms> airy_v = [] {
  std::array<double, airy_asym_terms> v{};
  v[0] = 1.0;
  for (std::size_t k = 1; k < airy_asym_terms; ++k)
    v[k] = -(6.0 * k + 1.0) / (6.0 * k - 1.0) * airy_u[k];
  return v;
}();

// Maclaurin series of y'' = xy about 0, summed in double-double. The terms
// reach ~3e6 at x = -9 while the sum is ~2e-2, so plain double would lose
// eight digits here; double-double keeps the result full precision.
inline AiryEval airy_series(double x) {
  AiryEval out;
  out.x = x;
  out.est_rel_err = 5e-14;
  if (x == 0.0) {
    out.ai = airy_ai0.value();
    out.ai_prime = airy_aip0.value();
    return out;
  }
  const dd xd{x};
  const dd x3 = xd * xd * xd;
  dd a{1.0};    // f-series term x^{3k}/((2*3)(5*6)...((3k-1)(3k)))
  dd b = xd;    // g-series term x^{3k+1}/((3*4)(6*7)...((3k)(3k+1)))
  dd f = a;
  dd g = b;
  dd sf{0.0};   // sum of 3k a_k      (f' = sf / x)
  dd sg = b;    // sum of (3k+1) b_k  (g' = sg / x)
  for (int k = 1; k <= 96; ++k) {
    a = a * x3 / ((3.0 * k - 1.0) * (3.0 * k));
    b = b * x3 / ((3.0 * k) * (3.0 * k + 1.0));
    f = f + a;
    g = g + b;
    sf = sf + a * (3.0 * k);
    sg = sg + b * (3.0 * k + 1.0);
    if (std::abs(a.hi) < 1e-50 * (std::abs(f.hi) + 1.0) &&
        std::abs(b.hi) < 1e-50 * (std::abs(g.hi) + 1.0))
      break;
  }
  const dd fp = sf / xd;
  const dd gp = sg / xd;
  out.ai = (airy_ai0 * f + airy_aip0 * g).value();
  out.ai_prime = (airy_ai0 * fp + airy_aip0 * gp).value();
  return out;
}

struct ReducedPhase {
  double sin_chi = 0.0;
  double cos_chi = 0.0;
};

// sin/cos of (zeta - pi/4) with zeta carried in double-double, so the phase
// survives reduction mod 2π even at zeta ~ 7e5 (x near the domain limit).
inline ReducedPhase airy_phase(dd zeta) {
  dd chi = reduce_two_pi(zeta - dd_pi_quarter);
  double s = std::sin(chi.hi);
  double c = std::cos(chi.hi);
  return {s + chi.lo * c, c - chi.lo * s};
}

inline dd airy_zeta(double z) {  // 2 z^{3/2} / 3, z = |x|
  return dd_sqrt(z) * z * 2.0 / 3.0;
}

inline AiryEval airy_asymptotic(double x) {
  AiryEval out;
  out.x = x;
  out.est_rel_err = (std::abs(x) <= 200.0) ? 1e-12 : 1e-9;
  const double z = std::abs(x);
  const dd zeta_dd = airy_zeta(z);
  const double zeta = zeta_dd.value();
  const double w = 1.0 / zeta;
  const double z4 = std::sqrt(std::sqrt(z));
  const double inv_sqrt_pi = std::numbers::inv_sqrtpi;
  if (x > 0.0) {
    double su = 0.0, sv = 0.0, pw = 1.0;
    for (std::size_t k = 0; k < 24; ++k) {
      const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
      su += sgn * airy_u[k] * pw;
      sv += sgn * airy_v[k] * pw;
      pw *= w;
    }
    const double e = std::exp(-zeta_dd.hi) * (1.0 - zeta_dd.lo);
    out.ai = 0.5 * inv_sqrt_pi * e / z4 * su;
    out.ai_prime = -0.5 * inv_sqrt_pi * z4 * e * sv;
  } else {
    double p = 0.0, q = 0.0, r = 0.0, s = 0.0;
    double pw_even = 1.0, pw_odd = w;
    for (std::size_t k = 0; k < 18; ++k) {
      const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
      p += sgn * airy_u[2 * k] * pw_even;
      q += sgn * airy_u[2 * k + 1] * pw_odd;
      r += sgn * airy_v[2 * k] * pw_even;
      s += sgn * airy_v[2 * k + 1] * pw_odd;
      pw_even *= w * w;
      pw_odd *= w * w;
    }
    const ReducedPhase ph = airy_phase(zeta_dd);
    out.ai = inv_sqrt_pi / z4 * (ph.cos_chi * p + ph.sin_chi * q);
    out.ai_prime = inv_sqrt_pi * z4 * (ph.sin_chi * r - ph.cos_chi * s);
  }
  return out;
}

}  // namespace detail

// Ai(x) and Ai'(x) for |x| <= 1e4.
inline AiryEval ai(double x) {
  require(std::isfinite(x) && std::abs(x) <= detail::airy_domain_limit,
          "argument out of range",
          "ai requires finite |x| <= 1e4, got x = " + std::to_string(x));
  if (std::abs(x) <= detail::airy_series_split) return detail::airy_series(x);
  return detail::airy_asymptotic(x);
}

// Oscillatory decomposition Ai(x) = e^{i zeta} theta + e^{-i zeta} conj(theta)
// for x < -1, with theta slowly varying: |theta| <= 0.35 (1+|x|)^{-1/4}.
inline AsymptoticPieces asymptotic_pieces(double x) {
  require(std::isfinite(x) && x < -1.0, "decomposition domain",
          "asymptotic_pieces requires x < -1, got x = " + std::to_string(x));
  require(x >= -detail::airy_domain_limit, "argument out of range",
          "asymptotic_pieces requires |x| <= 1e4, got x = " +
              std::to_string(x));
  const double z = -x;
  const AiryEval e = ai(x);
  const detail::dd zeta_dd = detail::airy_zeta(z);
  AsymptoticPieces out;
  out.x = x;
  out.zeta = zeta_dd.value();
  // theta = e^{-i zeta} (Ai + i Ai'/sqrt(z)) / 2 makes the reconstruction an
  // identity while |theta| tracks the envelope (2 sqrt(pi))^{-1} z^{-1/4}.
  const detail::dd red = detail::reduce_two_pi(zeta_dd);
  const double sz = std::sin(red.hi) + red.lo * std::cos(red.hi);
  const double cz = std::cos(red.hi) - red.lo * std::sin(red.hi);
  const std::complex<double> amp(e.ai, e.ai_prime / std::sqrt(z));
  out.theta = 0.5 * std::complex<double>(cz, -sz) * amp;
  return out;
}

namespace detail {

// Safeguarded Newton refinement of a bracketed simple zero. f_and_df must
// return {f, f'} at the query point; [a, b] must bracket a sign change.
template <class F>
inline double refine_zero(F&& f_and_df, double a, double b, double fa) {
  double x = 0.5 * (a + b);
  for (int it = 0; it < 100; ++it) {
    const auto [fx, dfx] = f_and_df(x);
    if (std::abs(fx) <= 1e-14) return x;
    if ((fx > 0.0) == (fa > 0.0)) {
      a = x;
      fa = fx;
    } else {
      b = x;
    }
    double step = fx / dfx;
    double next = x - step;
    if (!(next > std::min(a, b) && next < std::max(a, b)) ||
        !std::isfinite(next))
      next = 0.5 * (a + b);
    if (std::abs(next - x) <= 1e-16 * std::abs(x)) {
      const auto [fn, dfn] = f_and_df(next);
      (void)dfn;
      if (std::abs(fn) <= 1e-12) return next;
    }
    x = next;
  }
  const auto [fx, dfx] = f_and_df(x);
  (void)dfx;
  if (std::abs(fx) <= 1e-12) return x;
  fail("zero refinement failed",
       "no convergence after 100 iterations near x = " + std::to_string(x));
}

template <class F>
inline double bracketed_zero(F&& f_and_df, double guess) {
  const double half = 0.4 * std::numbers::pi / std::sqrt(-guess);
  double a = guess - half;
  double b = guess + half;
  auto f_of = [&](double t) { return f_and_df(t).first; };
  double fa = f_of(a);
  double fb = f_of(b);
  for (int grow = 0; grow < 6 && (fa > 0.0) == (fb > 0.0); ++grow) {
    a -= half;
    b += half;
    fa = f_of(a);
    fb = f_of(b);
  }
  require((fa > 0.0) != (fb > 0.0), "zero refinement failed",
          "could not bracket a sign change near x = " + std::to_string(guess));
  return refine_zero(f_and_df, a, b, fa);
}

// k-th negative zero of Ai (k >= 1).
inline double nth_ai_zero(std::size_t k) {
  auto f = [](double t) {
    const AiryEval e = ai(t);
    return std::pair<double, double>(e.ai, e.ai_prime);
  };
  const double t = 3.0 * std::numbers::pi * (4.0 * k - 1.0) / 8.0;
  return bracketed_zero(f, -std::cbrt(t * t));
}

// k-th negative zero of Ai' (k >= 1).
inline double nth_ai_prime_zero(std::size_t k) {
  auto f = [](double t) {
    const AiryEval e = ai(t);
    return std::pair<double, double>(e.ai_prime, t * e.ai);  // Ai'' = x Ai
  };
  const double t = 3.0 * std::numbers::pi * (4.0 * k - 3.0) / 8.0;
  return bracketed_zero(f, -std::cbrt(t * t));
}

}  // namespace detail

// First `count` negative zeros of Ai, strictly decreasing.
inline ZeroList ai_zeros(std::size_t count) {
  require(count >= 1, "zero refinement failed", "count must be >= 1");
  ZeroList out;
  out.kind = ZeroKind::ai;
  out.zeros.reserve(count);
  for (std::size_t k = 1; k <= count; ++k)
    out.zeros.push_back(detail::nth_ai_zero(k));
  return out;
}

// First `count` negative zeros of Ai', strictly decreasing.
inline ZeroList ai_prime_zeros(std::size_t count) {
  require(count >= 1, "zero refinement failed", "count must be >= 1");
  ZeroList out;
  out.kind = ZeroKind::ai_prime;
  out.zeros.reserve(count);
  for (std::size_t k = 1; k <= count; ++k)
    out.zeros.push_back(detail::nth_ai_prime_zero(k));
  return out;
}

}  // namespace anharmonic
