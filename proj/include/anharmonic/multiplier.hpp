#pragma once

#include <anharmonic/error.hpp>
#include <anharmonic/grid.hpp>
#include <anharmonic/parallel.hpp>
#include <anharmonic/quadrature.hpp>
#include <anharmonic/spectrum.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

// Spectral multipliers of L: profiles F(lambda), Bochner-Riesz means,
// mode-sum application and kernel rows, the cellwise sup-sum norm, and the
// band-limited/remainder split G + H built by mollifying in the
// square-root-of-the-spectral-parameter variable.

namespace anharmonic {

struct MultiplierProfile {
  enum class Smoothness { closed_form, tabulated, band_limited };

  std::function<double(double)> eval;  // scalar function of lambda
  bool unbounded = false;              // true: no declared support interval
  double support_lo = 0.0;
  double support_hi = 0.0;
  Smoothness smoothness = Smoothness::closed_form;
  // Tabulated profiles carry their sample grid (theta ascending).
  std::vector<double> table_theta;
  std::vector<double> table_value;
};

struct RieszParams {
  double alpha = 0.0;
  double R = 1.0;

  RieszParams() = default;
  RieszParams(double a, double r) : alpha(a), R(r) {
    require(std::isfinite(a) && a >= 0.0, "invalid exponent",
            "Riesz order alpha must be >= 0");
    require(std::isfinite(r) && r > 0.0, "invalid exponent",
            "Riesz threshold R must be > 0");
  }
};

// Profile factory running the declared-support vanishing check.
inline MultiplierProfile make_profile(std::function<double(double)> eval,
                                      double lo, double hi,
                                      MultiplierProfile::Smoothness sm) {
  require(lo < hi, "profile support", "support interval must be nonempty");
  MultiplierProfile p;
  p.eval = std::move(eval);
  p.support_lo = lo;
  p.support_hi = hi;
  p.smoothness = sm;
  const double w = (hi - lo) / 7.0;
  for (int k = 1; k <= 8; ++k) {
    require(p.eval(lo - k * w) == 0.0 && p.eval(hi + k * w) == 0.0,
            "profile support", "eval must vanish outside declared support");
  }
  return p;
}

// sigma^alpha_R: (1 - lambda/R)^alpha on [0, R], zero elsewhere.
inline MultiplierProfile riesz_profile(const RieszParams& params) {
  const double alpha = params.alpha;
  const double R = params.R;
  MultiplierProfile p;
  p.eval = [alpha, R](double lam) {
    if (lam < 0.0 || lam > R) return 0.0;
    return std::pow(1.0 - lam / R, alpha);
  };
  p.support_lo = 0.0;
  p.support_hi = R;
  p.smoothness = MultiplierProfile::Smoothness::closed_form;
  return p;
}

// C^infinity bump: value 1 at s = 0, support |s| < 1.
inline double smooth_bump(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

// Bump profile on [lo, hi], peak 1 at the midpoint.
inline MultiplierProfile bump_profile(double lo, double hi) {
  require(lo < hi, "profile support", "bump support must be nonempty");
  const double c = 0.5 * (lo + hi);
  const double r = 0.5 * (hi - lo);
  MultiplierProfile p;
  p.eval = [c, r](double lam) { return smooth_bump((lam - c) / r); };
  p.support_lo = lo;
  p.support_hi = hi;
  p.smoothness = MultiplierProfile::Smoothness::closed_form;
  return p;
}

namespace detail {

inline void check_cutoff(const SpectralBasis& basis,
                         const MultiplierProfile& F) {
  require(!F.unbounded && F.support_hi <= basis.cutoff * (1.0 + 1e-12),
          "basis cutoff too small",
          "profile support must lie inside [0, cutoff]");
}

// out[i] = sum_n w[n] phi_n(x_i). Modes with w == 0 are skipped; sampling is
// parallel in blocks, the accumulation runs in fixed mode order so results
// are byte-identical for any worker count.
inline std::vector<complex> expansion_sum(const SpectralBasis& basis,
                                          const std::vector<complex>& w,
                                          const Grid& g) {
  const std::size_t count = basis.modes.size();
  const int np = g.n_points;
  std::vector<complex> out(np, complex(0.0));
  constexpr std::size_t block = 64;
  std::vector<double> buf(block * static_cast<std::size_t>(np));
  std::vector<std::size_t> active;
  active.reserve(block);
  for (std::size_t start = 0; start < count; start += block) {
    const std::size_t stop = std::min(count, start + block);
    active.clear();
    for (std::size_t n = start; n < stop; ++n)
      if (w[n] != complex(0.0)) active.push_back(n);
    if (active.empty()) continue;
    parallel_for(active.size(), [&](std::size_t m) {
      const EigenMode& mode = basis.modes[active[m]];
      double* row = buf.data() + m * np;
      for (int i = 0; i < np; ++i) row[i] = eigenfunction_eval(mode, g.x(i));
    });
    for (std::size_t m = 0; m < active.size(); ++m) {
      const complex c = w[active[m]];
      const double* row = buf.data() + m * np;
      for (int i = 0; i < np; ++i) out[i] += c * row[i];
    }
  }
  return out;
}

}  // namespace detail

// F(L) f = sum_n F(lambda_n) <f, phi_n> phi_n on f's grid.
inline GridFunction apply_multiplier(const SpectralBasis& basis,
                                     const MultiplierProfile& F,
                                     const GridFunction& f) {
  detail::check_cutoff(basis, F);
  const std::size_t count = basis.modes.size();
  const Grid& g = f.grid;
  const int np = g.n_points;
  std::vector<complex> w(count, complex(0.0));
  constexpr std::size_t block = 64;
  std::vector<double> buf(block * static_cast<std::size_t>(np));
  std::vector<std::pair<std::size_t, double>> active;  // (mode, F(lambda))
  active.reserve(block);
  for (std::size_t start = 0; start < count; start += block) {
    const std::size_t stop = std::min(count, start + block);
    active.clear();
    for (std::size_t n = start; n < stop; ++n) {
      const double Fn = F.eval(basis.modes[n].lambda);
      if (Fn != 0.0) active.emplace_back(n, Fn);
    }
    if (active.empty()) continue;
    parallel_for(active.size(), [&](std::size_t m) {
      const EigenMode& mode = basis.modes[active[m].first];
      double* row = buf.data() + m * np;
      for (int i = 0; i < np; ++i) row[i] = eigenfunction_eval(mode, g.x(i));
    });
    for (std::size_t m = 0; m < active.size(); ++m) {
      const double* row = buf.data() + m * np;
      complex dot = 0.0;
      for (int i = 0; i < np; ++i)
        dot += detail::trapezoid_weight(g, i) * f.values[i] * row[i];
      w[active[m].first] = active[m].second * dot;
    }
  }
  return GridFunction(g, detail::expansion_sum(basis, w, g));
}

// Kernel row K_F(x, y) = sum_n F(lambda_n) phi_n(x) phi_n(y), sampled in x.
inline GridFunction multiplier_kernel_row(const SpectralBasis& basis,
                                          const MultiplierProfile& F, double y,
                                          const Grid& grid) {
  detail::check_cutoff(basis, F);
  const std::size_t count = basis.modes.size();
  std::vector<complex> w(count);
  for (std::size_t n = 0; n < count; ++n) {
    const double Fn = F.eval(basis.modes[n].lambda);
    w[n] = (Fn == 0.0)
               ? complex(0.0)
               : complex(Fn * eigenfunction_eval(basis.modes[n], y));
  }
  return GridFunction(grid, detail::expansion_sum(basis, w, grid));
}

// ||F||_{M,q} = ((1/M) sum_l sup over [(l-1)/M, l/M) of |F|^q)^{1/q}.
// Cell sups by dense sampling: 64 uniform points plus both endpoint limits.
inline double sup_sum_norm(const MultiplierProfile& F, double M, double q,
                           int samples_per_cell = 64) {
  require(!F.unbounded, "requires compact support",
          "sup_sum_norm needs a bounded support interval");
  require(std::isfinite(q) && q >= 1.0, "invalid exponent",
          "sup_sum_norm requires q >= 1");
  require(std::isfinite(M) && M > 1.0, "invalid exponent",
          "sup_sum_norm requires M > 1");
  const long l_first = static_cast<long>(std::floor(F.support_lo * M)) + 1;
  const long l_last = static_cast<long>(std::floor(F.support_hi * M)) + 1;
  double acc = 0.0;
  for (long l = l_first; l <= l_last; ++l) {
    const double cell_lo = (l - 1) / M;
    const double width = 1.0 / M;
    double sup = std::abs(F.eval(cell_lo));
    for (int j = 1; j < samples_per_cell; ++j) {
      const double t = cell_lo + width * j / samples_per_cell;
      sup = std::max(sup, std::abs(F.eval(t)));
    }
    sup = std::max(sup, std::abs(F.eval(cell_lo + width * (1.0 - 1e-9))));
    acc += std::pow(sup, q);
  }
  return std::pow(acc / M, 1.0 / q);
}

namespace detail {

// Iterative radix-2 FFT; size must be a power of two. Twiddles are computed
// directly per index so repeated runs are bit-identical and accurate.
inline void fft_inplace(std::vector<complex>& a, bool inverse) {
  const std::size_t n = a.size();
  require(n >= 2 && (n & (n - 1)) == 0, "invalid grid",
          "fft size must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double sgn = inverse ? 1.0 : -1.0;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t j = 0; j < len / 2; ++j) {
        const double ang = sgn * 2.0 * std::numbers::pi * j / len;
        const complex w(std::cos(ang), std::sin(ang));
        const complex u = a[i + j];
        const complex v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
      }
    }
  }
  if (inverse)
    for (complex& z : a) z /= static_cast<double>(n);
}

// CDF of the C^infinity bump of radius 1/4 with unit mass, clamped to [0,1].
inline double mollifier_cdf(double u) {
  if (u <= -0.25) return 0.0;
  if (u >= 0.25) return 1.0;
  static const double mass = [] {
    const QuadratureRule r(QuadratureRule::Kind::composite_gauss_legendre, 8,
                           32);
    return integrate_real(
        [](double t) { return std::exp(-1.0 / (1.0 - 16.0 * t * t)); },
        -0.25 + 1e-300, 0.25 - 1e-300, r);
  }();
  const QuadratureRule r(QuadratureRule::Kind::composite_gauss_legendre, 8, 32);
  const double part = integrate_real(
      [](double t) {
        const double s = 1.0 - 16.0 * t * t;
        return s > 0.0 ? std::exp(-1.0 / s) : 0.0;
      },
      -0.25, u, r);
  return std::min(1.0, std::max(0.0, part / mass));
}

// psi_hat: indicator of [-3/4, 3/4] convolved with the radius-1/4 bump.
// Smooth, supported in [-1, 1], identically 1 on [-1/2, 1/2].
inline double mollifier_hat(double xi) {
  return mollifier_cdf(xi + 0.75) - mollifier_cdf(xi - 0.75);
}

}  // namespace detail

// Band-limited + remainder split of a profile supported in [1/2, 1].
struct GHSplit {
  double lambda_scale = 0.0;
  MultiplierProfile g_part;  // band-limited
  MultiplierProfile h_part;  // tabulated remainder, h = F - g
  double mollifier_bandwidth = 0.0;  // lambda_scale^{3/2}/6 unless overridden
};

// Lifts F to the even function F(x^2) on the period-4 torus, convolves with
// the mollifier of bandwidth lambda_scale^{3/2}/6 via a 2^14-point discrete
// Fourier transform, and maps back through x = sqrt(theta). The g_part is
// evaluated as the exact trigonometric series over the surviving
// frequencies, so its band-limit is structural, not sampled.
inline GHSplit gh_split(const MultiplierProfile& F, double lambda_scale,
                        double bandwidth_override = 0.0) {
  require(!F.unbounded && F.support_lo >= 0.5 - 1e-12 &&
              F.support_hi <= 1.0 + 1e-12,
          "profile support", "gh_split needs support inside [1/2, 1]");
  require(std::isfinite(lambda_scale) && lambda_scale > 1.0, "profile support",
          "gh_split requires lambda_scale > 1");
  const double h = bandwidth_override > 0.0
                       ? bandwidth_override
                       : std::pow(lambda_scale, 1.5) / 6.0;

  constexpr std::size_t N = 1 << 14;
  std::vector<complex> c(N);
  for (std::size_t j = 0; j < N; ++j) {
    const double x = -2.0 + 4.0 * static_cast<double>(j) / N;
    c[j] = complex(F.eval(x * x), 0.0);
  }
  detail::fft_inplace(c, false);

  // Surviving frequencies omega_k = pi k / 2 with |omega_k| <= h.
  const std::size_t kmax = std::min(
      N / 2 - 1, static_cast<std::size_t>(std::floor(h / (0.5 * std::numbers::pi))));
  const double dc =
      c[0].real() / static_cast<double>(N) * detail::mollifier_hat(0.0);
  std::vector<double> omega(kmax);
  std::vector<complex> coef(kmax);
  for (std::size_t k = 1; k <= kmax; ++k) {
    const double om = 0.5 * std::numbers::pi * static_cast<double>(k);
    const double mask = detail::mollifier_hat(om / h);
    omega[k - 1] = om;
    coef[k - 1] = c[k] * (2.0 * mask / static_cast<double>(N));
  }

  auto g_eval = [dc, omega, coef](double theta) {
    if (theta < 0.0 || theta > 4.0) return 0.0;
    const double x = std::sqrt(theta);
    double acc = dc;
    for (std::size_t k = 0; k < omega.size(); ++k) {
      const double ph = omega[k] * (x + 2.0);
      acc += coef[k].real() * std::cos(ph) - coef[k].imag() * std::sin(ph);
    }
    return acc;
  };

  GHSplit out;
  out.lambda_scale = lambda_scale;
  out.mollifier_bandwidth = h;
  out.g_part.eval = g_eval;
  out.g_part.support_lo = 0.0;
  out.g_part.support_hi = 4.0;
  out.g_part.smoothness = MultiplierProfile::Smoothness::band_limited;

  auto f_eval = F.eval;
  out.h_part.eval = [f_eval, g_eval](double theta) {
    if (theta < 0.0 || theta > 4.0) return 0.0;
    return f_eval(theta) - g_eval(theta);
  };
  out.h_part.support_lo = 0.0;
  out.h_part.support_hi = 4.0;
  out.h_part.smoothness = MultiplierProfile::Smoothness::tabulated;
  out.h_part.table_theta.resize(N / 2 + 1);
  out.h_part.table_value.resize(N / 2 + 1);
  for (std::size_t i = 0; i <= N / 2; ++i) {
    const double x = 4.0 * static_cast<double>(i) / N;
    out.h_part.table_theta[i] = x * x;
    out.h_part.table_value[i] = out.h_part.eval(x * x);
  }
  return out;
}

// L^2(0, infinity) norm of the remainder via its table: int_0^4 H(theta)^2
// dtheta = int_0^2 H(x^2)^2 2x dx, trapezoid in x.
inline double gh_h_l2(const GHSplit& split) {
  const std::size_t n = split.h_part.table_value.size();
  const double dx = 2.0 / static_cast<double>(n - 1);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = dx * static_cast<double>(i);
    const double v = split.h_part.table_value[i];
    const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    acc += w * v * v * 2.0 * x;
  }
  return std::sqrt(acc * dx);
}

inline double gh_h_sup(const GHSplit& split) {
  double m = 0.0;
  for (double v : split.h_part.table_value) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace anharmonic
