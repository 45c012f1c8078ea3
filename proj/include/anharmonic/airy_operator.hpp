#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "anharmonic/airy.hpp"
#include "anharmonic/error.hpp"
#include "anharmonic/grid.hpp"
#include "anharmonic/multiplier.hpp"
#include "anharmonic/parallel.hpp"
#include "anharmonic/quadrature.hpp"
#include "anharmonic/spectrum.hpp"

// The continuous operator A = -d^2/dx^2 + x on the line. Its generalized
// eigenfunctions are the shifted rows phi_lambda(x) = Ai(x - lambda), the
// transform T f(lambda) = (f * reversed-Ai)(lambda) is an L^2 isometry, and
// multipliers of A have explicit integral kernels
//   K_F(x, y) = int F(lambda) Ai(x - lambda) Ai(y - lambda) dlambda.

namespace anharmonic {

struct AiryTransformPlan {
  Grid grid;           // physical window; inputs must live here
  Grid spectral_grid;  // lambda window; transforms land here
  QuadratureRule quadrature;

  AiryTransformPlan(const Grid& g, const Grid& sg, const QuadratureRule& q)
      : grid(g), spectral_grid(sg), quadrature(q) {
    // Inputs are known only at grid nodes, so the transform quadrature is
    // the grids' own trapezoid sum. Its accuracy is spectral (Poisson
    // summation) once the step resolves the local Airy frequency, because
    // admissible inputs vanish at the window edges.
    require(q.kind == QuadratureRule::Kind::trapezoid, "invalid rule",
            "transform plans integrate sampled data: trapezoid only");
  }
};

inline AiryTransformPlan make_transform_plan(const Grid& grid,
                                             const Grid& spectral_grid) {
  return AiryTransformPlan(
      grid, spectral_grid,
      QuadratureRule(QuadratureRule::Kind::trapezoid, 1, 2));
}

namespace detail {

// A sampled input "supported well inside" its window must be negligible at
// the outer two nodes of each edge; otherwise the convolution sees mass the
// window has cut off.
inline void require_contained(const GridFunction& f, const char* what) {
  double peak = 0.0;
  for (const complex& v : f.values) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return;
  const int n = f.grid.n_points;
  double edge = std::max(std::abs(f.values[0]), std::abs(f.values[n - 1]));
  if (n >= 4)
    edge = std::max(
        {edge, std::abs(f.values[1]), std::abs(f.values[n - 2])});
  require(edge <= 1e-8 * peak, "domain too small",
          std::string(what) + " does not vanish at the window edge");
}

}  // namespace detail

// T f(lambda) = int f(x) Ai(x - lambda) dx on the plan's spectral grid.
inline GridFunction airy_transform(const AiryTransformPlan& plan,
                                   const GridFunction& f) {
  require(f.grid == plan.grid, "incompatible grids",
          "input must be sampled on the plan's physical grid");
  detail::require_contained(f, "transform input");
  GridFunction out;
  out.grid = plan.spectral_grid;
  out.values.assign(plan.spectral_grid.n_points, complex(0.0, 0.0));
  parallel_for(plan.spectral_grid.n_points, [&](std::size_t k) {
    const double lambda = plan.spectral_grid.x(static_cast<int>(k));
    complex acc = 0.0;
    for (int i = 0; i < f.grid.n_points; ++i)
      acc += detail::trapezoid_weight(f.grid, i) * f.values[i] *
             ai(f.grid.x(i) - lambda).ai;
    out.values[k] = acc;
  });
  return out;
}

// T^{-1} g(x) = int g(lambda) Ai(x - lambda) dlambda on the physical grid.
inline GridFunction airy_inverse_transform(const AiryTransformPlan& plan,
                                           const GridFunction& g) {
  require(g.grid == plan.spectral_grid, "incompatible grids",
          "input must be sampled on the plan's spectral grid");
  detail::require_contained(g, "inverse transform input");
  GridFunction out;
  out.grid = plan.grid;
  out.values.assign(plan.grid.n_points, complex(0.0, 0.0));
  parallel_for(plan.grid.n_points, [&](std::size_t k) {
    const double x = plan.grid.x(static_cast<int>(k));
    complex acc = 0.0;
    for (int i = 0; i < g.grid.n_points; ++i)
      acc += detail::trapezoid_weight(g.grid, i) * g.values[i] *
             ai(x - g.grid.x(i)).ai;
    out.values[k] = acc;
  });
  return out;
}

namespace detail {

// Panels one wavelength wide: 16-node GL holds a phase span of 2*pi plus
// the slowly varying Airy envelope to ~1e-12 relative.
inline QuadratureRule band_rule(double lo, double hi, double freq) {
  const double f = std::max(freq, 1.0);
  const int panels = std::max(
      1, static_cast<int>(std::ceil((hi - lo) * f / (2.0 * std::numbers::pi))));
  return QuadratureRule(QuadratureRule::Kind::composite_gauss_legendre, panels,
                        16);
}

// Quadrature nodes for int F(lambda) Ai(* - lambda) Ai(y - lambda) dlambda,
// chunked so panel widths track the local Airy frequency
// sqrt(lambda - x) + sqrt(lambda - y) instead of its global worst case.
// x_floor is the smallest x the row will be evaluated at.
inline std::vector<WeightedNode> row_nodes(double lo, double hi, double x_floor,
                                           double y) {
  std::vector<WeightedNode> nodes;
  const int n_chunks =
      std::max(1, static_cast<int>(std::ceil((hi - lo) / 10.0)));
  for (int c = 0; c < n_chunks; ++c) {
    const double clo = lo + (hi - lo) * c / n_chunks;
    const double chi = lo + (hi - lo) * (c + 1) / n_chunks;
    const double freq = std::sqrt(std::max(chi - x_floor, 1.0)) +
                        std::sqrt(std::max(chi - y, 1.0));
    const QuadratureRule rule = band_rule(clo, chi, freq);
    std::vector<WeightedNode> part = materialize_nodes(rule, clo, chi);
    nodes.insert(nodes.end(), part.begin(), part.end());
  }
  return nodes;
}

}  // namespace detail

// Row K_F(x, y) = int F(lambda) Ai(x - lambda) Ai(y - lambda) dlambda,
// sampled in x over the grid at fixed y. The profile must have a bounded
// support: Airy rows only decay like |lambda|^{-1/4} on the oscillatory
// side, so an unbounded profile has no usable integrability.
inline GridFunction airy_multiplier_kernel_row(const MultiplierProfile& F,
                                               double y, const Grid& grid) {
  require(std::isfinite(F.support_lo) && std::isfinite(F.support_hi),
          "profile decay",
          "kernel rows require a compactly supported profile");
  require(std::isfinite(y), "argument out of range", "y must be finite");
  GridFunction out;
  out.grid = grid;
  out.values.assign(grid.n_points, complex(0.0, 0.0));
  if (!(F.support_hi > F.support_lo)) return out;

  std::vector<detail::WeightedNode> nodes =
      detail::row_nodes(F.support_lo, F.support_hi, grid.lo, y);
  // The y-side factor is shared by every x.
  std::vector<double> coef(nodes.size());
  for (std::size_t j = 0; j < nodes.size(); ++j)
    coef[j] = nodes[j].w * F.eval(nodes[j].x) * ai(y - nodes[j].x).ai;

  parallel_for(grid.n_points, [&](std::size_t k) {
    const double x = grid.x(static_cast<int>(k));
    double acc = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j)
      if (coef[j] != 0.0) acc += coef[j] * ai(x - nodes[j].x).ai;
    require(std::isfinite(acc), "non-finite integrand",
            "kernel row quadrature produced a non-finite value");
    out.values[k] = complex(acc, 0.0);
  });
  return out;
}

// Both sides of the row Plancherel identity
//   int |K_F(x, y)|^2 dy = int |F(lambda) Ai(x - lambda)|^2 dlambda,
// each by its own quadrature. row_side integrates the row brute-force in y;
// profile_side never forms the row at all.
struct PlancherelRowResult {
  double row_side = 0.0;
  double profile_side = 0.0;
  double y_lo = 0.0;  // lower edge the y integration actually reached
};

inline PlancherelRowResult kernel_row_plancherel(const MultiplierProfile& F,
                                                 double x) {
  require(std::isfinite(F.support_lo) && std::isfinite(F.support_hi),
          "profile decay",
          "kernel rows require a compactly supported profile");
  const double lo = F.support_lo, hi = F.support_hi;
  require(hi > lo, "profile support", "empty profile support");

  PlancherelRowResult r;
  {
    const double freq = 2.0 * std::sqrt(std::max(hi - x, 1.0));
    r.profile_side = integrate_real(
        [&](double lam) {
          const double v = F.eval(lam) * ai(x - lam).ai;
          return v * v;
        },
        lo, hi, oscillatory_rule(lo, hi, freq));
  }

  // y integral: exponential decay above the support, superpolynomial decay
  // (smooth profile, non-stationary phase) below. March 40-wide blocks
  // downward until a block stops mattering.
  const double y_hi = hi + 25.0;
  double block_hi = y_hi;
  double acc = 0.0;
  const double floor_y = std::min(x, lo) - 2100.0;
  while (true) {
    const double block_lo = std::max(block_hi - 40.0, floor_y);
    std::vector<detail::WeightedNode> lam_nodes =
        detail::row_nodes(lo, hi, x, block_lo);
    std::vector<double> coef(lam_nodes.size());
    for (std::size_t j = 0; j < lam_nodes.size(); ++j)
      coef[j] = lam_nodes[j].w * F.eval(lam_nodes[j].x) *
                ai(x - lam_nodes[j].x).ai;
    const double freq_y = 2.0 * std::sqrt(std::max(hi - block_lo, 1.0));
    const QuadratureRule yrule = detail::band_rule(block_lo, block_hi, freq_y);
    std::vector<detail::WeightedNode> y_nodes =
        detail::materialize_nodes(yrule, block_lo, block_hi);
    std::vector<double> partials(y_nodes.size());
    parallel_for(y_nodes.size(), [&](std::size_t q) {
      double row = 0.0;
      for (std::size_t j = 0; j < lam_nodes.size(); ++j)
        row += coef[j] * ai(y_nodes[q].x - lam_nodes[j].x).ai;
      partials[q] = y_nodes[q].w * row * row;
    });
    double block = 0.0;
    for (double v : partials) block += v;
    require(std::isfinite(block), "non-finite integrand",
            "Plancherel y quadrature produced a non-finite value");
    acc += block;
    r.y_lo = block_lo;
    if (block_lo <= floor_y) {
      require(block <= 1e-9 * std::max(acc, 1e-300), "domain too small",
              "Plancherel y integral did not converge before the window cap");
      break;
    }
    if (acc > 0.0 && block <= 1e-8 * acc && block_hi < y_hi) break;
    block_hi = block_lo;
  }
  r.row_side = acc;
  return r;
}

// Relative sup-norm gap between the band-limited multiplier kernel of L
// (eigenfunction expansion) and of A (continuous kernel row) at one y.
// Finite propagation speed makes the two rows equal when the profile's
// lifted bandwidth lambda_scale^{3/2}/6 cannot carry the wave from y to the
// potential's kink, which is what y >= lambda_scale/4 guarantees.
// bandwidth_override (see gh_split) tightens the mollifier; the gap shrinks
// with it, since the surviving wave reaches distance bandwidth/sqrt(lambda).
inline double verify_finite_propagation(const MultiplierProfile& F,
                                        double lambda_scale, double y,
                                        const Grid& grid,
                                        double bandwidth_override = 0.0) {
  require(std::isfinite(lambda_scale) && lambda_scale > 0.0 &&
              std::isfinite(y) && y >= lambda_scale / 4.0,
          "propagation precondition", "requires 0 < lambda_scale/4 <= y");
  const GHSplit split = gh_split(F, lambda_scale, bandwidth_override);

  MultiplierProfile banded;
  banded.eval = [g = split.g_part, s = lambda_scale](double lam) {
    return g.eval(lam / s);
  };
  banded.support_lo = 0.0;
  banded.support_hi = 4.0 * lambda_scale;
  banded.unbounded = false;
  banded.smoothness = MultiplierProfile::Smoothness::band_limited;

  const SpectralBasis basis = build_basis_to_cutoff(4.0 * lambda_scale);
  const GridFunction discrete = multiplier_kernel_row(basis, banded, y, grid);
  const GridFunction continuous = airy_multiplier_kernel_row(banded, y, grid);

  double gap = 0.0, scale = 0.0;
  for (int i = 0; i < grid.n_points; ++i) {
    gap = std::max(gap, std::abs(discrete.values[i] - continuous.values[i]));
    scale = std::max(scale, std::abs(continuous.values[i]));
  }
  if (scale == 0.0) return gap == 0.0 ? 0.0 : infinite_p;
  return gap / scale;
}

struct KernelBoundReport {
  double a = 0.0;  // support half-width of the profile
  double y = 0.0;
  double d = 0.0;  // max(a^{-1/2}, |y|^{1/2}/a)
  int l = 0;
  double fitted_C = 0.0;
  double max_violation_ratio = 0.0;  // <= 1 once C is fitted
};

enum class KernelRegime { automatic, envelope_a, envelope_b };

// Fits the smallest constant C making the regime's decay envelope dominate
// |K_w(x, y)| across the grid, by exhaustive ratio maximization. Regime A
// (a >= min(1, |y|^{-1/2})): C d^{-1} (1 + |x-y|/d)^{-l} (1 + |y|/(1+|x|))^{1/4}.
// Regime B (a <= min(1, |y|^{-1/2})): C a (1 + a^2 |x|)^{-l} (1+|y|)^{-1/4}
// (1+|x|)^{-1/4}.
inline KernelBoundReport verify_kernel_bound(
    const MultiplierProfile& w, double y, int l, const Grid& grid,
    KernelRegime regime = KernelRegime::automatic) {
  require(l >= 1, "invalid exponent", "envelope order l must be >= 1");
  require(std::isfinite(w.support_lo) && std::isfinite(w.support_hi),
          "profile decay",
          "kernel rows require a compactly supported profile");
  const double a =
      std::max(std::abs(w.support_lo), std::abs(w.support_hi));
  require(a > 0.0, "profile support", "profile support has zero width");
  const double threshold = std::min(1.0, 1.0 / std::sqrt(std::abs(y)));
  bool use_a;
  switch (regime) {
    case KernelRegime::automatic:
      use_a = a >= threshold;
      break;
    case KernelRegime::envelope_a:
      require(a >= threshold, "regime",
              "envelope A needs a >= min(1, |y|^{-1/2})");
      use_a = true;
      break;
    default:
      require(a <= threshold, "regime",
              "envelope B needs a <= min(1, |y|^{-1/2})");
      use_a = false;
      break;
  }

  KernelBoundReport rep;
  rep.a = a;
  rep.y = y;
  rep.l = l;
  rep.d = std::max(1.0 / std::sqrt(a), std::sqrt(std::abs(y)) / a);

  const GridFunction row = airy_multiplier_kernel_row(w, y, grid);
  auto envelope = [&](double x) {
    if (use_a)
      return (1.0 / rep.d) * std::pow(1.0 + std::abs(x - y) / rep.d, -l) *
             std::pow(1.0 + std::abs(y) / (1.0 + std::abs(x)), 0.25);
    return a * std::pow(1.0 + a * a * std::abs(x), -l) *
           std::pow(1.0 + std::abs(y), -0.25) *
           std::pow(1.0 + std::abs(x), -0.25);
  };

  double c = 0.0;
  for (int i = 0; i < grid.n_points; ++i)
    c = std::max(c, std::abs(row.values[i]) / envelope(grid.x(i)));
  rep.fitted_C = c;
  double worst = 0.0;
  if (c > 0.0)
    for (int i = 0; i < grid.n_points; ++i)
      worst = std::max(worst,
                       std::abs(row.values[i]) / (c * envelope(grid.x(i))));
  rep.max_violation_ratio = worst;
  return rep;
}

}  // namespace anharmonic
