#pragma once

#include <anharmonic/airy.hpp>
#include <anharmonic/error.hpp>
#include <anharmonic/grid.hpp>
#include <anharmonic/parallel.hpp>
#include <anharmonic/quadrature.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

// Discrete spectral resolution of L = -d^2/dx^2 + |x|. Eigenvalues are the
// magnitudes of the negative zeros of Ai' (even modes, Neumann at 0) and Ai
// (odd modes, Dirichlet at 0), interlaced; eigenfunctions are shifted Airy
// functions normalized in closed form.

namespace anharmonic {

enum class Parity { even, odd };

struct EigenMode {
  std::size_t n = 1;        // 1-based index
  double lambda = 0.0;      // eigenvalue, > 1
  Parity parity = Parity::even;
  double norm_const = 0.0;  // A_n > 0
};

struct SpectralBasis {
  std::vector<EigenMode> modes;  // ascending lambda, alternating parity
  double cutoff = 0.0;           // largest lambda included
};

namespace detail {

// ||phi_n||_2 = 1 via the primitive int_x^inf Ai^2 = Ai'(x)^2 - x Ai(x)^2
// (differentiate and use Ai'' = x Ai to check), evaluated at x = -lambda:
// 1 = 2 A^2 (Ai'(-lambda)^2 + lambda Ai(-lambda)^2).
inline double mode_norm_const(double lambda) {
  const AiryEval e = ai(-lambda);
  const double mass = e.ai_prime * e.ai_prime + lambda * e.ai * e.ai;
  return 1.0 / std::sqrt(2.0 * mass);
}

inline EigenMode make_mode(std::size_t n) {
  EigenMode m;
  m.n = n;
  if (n % 2 == 1) {
    m.parity = Parity::even;
    m.lambda = -nth_ai_prime_zero((n + 1) / 2);
  } else {
    m.parity = Parity::odd;
    m.lambda = -nth_ai_zero(n / 2);
  }
  m.norm_const = mode_norm_const(m.lambda);
  return m;
}

}  // namespace detail

// First `count` eigenpairs of L, ascending.
inline SpectralBasis build_basis(std::size_t count) {
  require(count >= 1, "basis too small", "build_basis requires count >= 1");
  SpectralBasis b;
  b.modes.resize(count);
  parallel_for(count,
               [&](std::size_t i) { b.modes[i] = detail::make_mode(i + 1); });
  for (std::size_t i = 0; i + 1 < count; ++i)
    require(b.modes[i].lambda < b.modes[i + 1].lambda, "zero refinement failed",
            "eigenvalues not strictly increasing at n = " +
                std::to_string(i + 1));
  b.cutoff = b.modes.back().lambda;
  return b;
}

// Smallest basis whose cutoff reaches lam. The count estimate inverts the
// counting asymptotic n ~ (4/(3pi)) lambda^{3/2}; individual eigenvalues sit
// slightly below (3pi n/4)^{2/3}, so grow until the cutoff clears lam.
inline SpectralBasis build_basis_to_cutoff(double lam) {
  require(std::isfinite(lam) && lam > 0.0, "basis too small",
          "build_basis_to_cutoff requires a positive finite cutoff");
  std::size_t count = static_cast<std::size_t>(
                          std::ceil(4.0 / (3.0 * std::numbers::pi) *
                                    std::pow(lam, 1.5))) +
                      4;
  SpectralBasis b = build_basis(count);
  while (b.cutoff < lam) b = build_basis(count += 32);
  return b;
}

// phi_n(u) = A_n Ai(|u| - lambda_n), odd modes flipped in sign for u < 0.
inline double eigenfunction_eval(const EigenMode& mode, double u) {
  double v = mode.norm_const * ai(std::abs(u) - mode.lambda).ai;
  if (u < 0.0 && mode.parity == Parity::odd) v = -v;
  return v;
}

// L^p norm of phi_n over the full line. The domain is truncated at
// |u| = lambda_n + 16, where the tail envelope e^{-(2/3)(|u|-lambda)^{3/2}}
// is below 1e-12 of the peak. grid_hint only refines sampling: panel widths
// never exceed its step.
inline double mode_lp_norm(const EigenMode& mode, double p,
                           const Grid& grid_hint) {
  require(is_infinite_p(p) || p >= 1.0, "invalid exponent",
          "mode_lp_norm requires p >= 1 or the infinity sentinel");
  const double lambda = mode.lambda;
  const double hint_step = std::max(grid_hint.step(), 1e-4);

  if (is_infinite_p(p)) {
    // max |Ai| over t >= -lambda: scan, then polish the critical point with
    // Newton on Ai' (derivative Ai'' = t Ai).
    double best_t = -lambda;
    double best = std::abs(ai(-lambda).ai);
    const double scan_hi = std::min(2.0, lambda);
    for (double t = -lambda; t <= scan_hi; t += std::min(0.05, hint_step)) {
      const double v = std::abs(ai(t).ai);
      if (v > best) {
        best = v;
        best_t = t;
      }
    }
    double t = best_t;
    for (int it = 0; it < 8; ++it) {
      const AiryEval e = ai(t);
      const double d2 = t * e.ai;
      if (d2 == 0.0) break;
      double next = t - e.ai_prime / d2;
      next = std::clamp(next, -lambda, scan_hi);
      if (next == t) break;
      t = next;
    }
    return mode.norm_const * std::max(best, std::abs(ai(t).ai));
  }

  // int |phi|^p = 2 int_0^{lambda+16} |A Ai(u-lambda)|^p du, composite
  // Gauss-Legendre with panels no wider than 1/8 of the local oscillation
  // wavelength 2 pi / sqrt(|u - lambda|).
  const double hi = lambda + 16.0;
  std::vector<double> edges{0.0};
  while (edges.back() < hi) {
    const double t = edges.back() - lambda;
    const double quarter_wave =
        0.5 * std::numbers::pi / std::sqrt(std::abs(t) + 1.0);
    const double w = std::min({0.5, 0.5 * quarter_wave, hint_step});
    edges.push_back(std::min(hi, edges.back() + w));
  }
  const QuadratureRule panel{QuadratureRule::Kind::composite_gauss_legendre, 1,
                             16};
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    total += integrate_real(
        [&](double u) {
          return std::pow(std::abs(mode.norm_const * ai(u - lambda).ai), p);
        },
        edges[i], edges[i + 1], panel);
  }
  return std::pow(2.0 * total, 1.0 / p);
}

// #{ n : lambda_n <= lam }.
inline std::size_t counting_function(const SpectralBasis& basis, double lam) {
  require(lam <= basis.cutoff, "basis too small",
          "counting_function needs lam <= cutoff = " +
              std::to_string(basis.cutoff));
  auto it = std::upper_bound(
      basis.modes.begin(), basis.modes.end(), lam,
      [](double v, const EigenMode& m) { return v < m.lambda; });
  return static_cast<std::size_t>(it - basis.modes.begin());
}

}  // namespace anharmonic
