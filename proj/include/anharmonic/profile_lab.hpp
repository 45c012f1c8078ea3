#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "anharmonic/error.hpp"
#include "anharmonic/grid.hpp"
#include "anharmonic/multiplier.hpp"
#include "anharmonic/quadrature.hpp"
#include "anharmonic/spectrum.hpp"

// Empirical Bochner-Riesz profile for L: exact rank-one operator norms,
// the isolation profiles that force divergence below the critical line,
// restricted kernel L^2 bounds, and the convergence/divergence scan over
// the (1/p, alpha) plane.

namespace anharmonic {

// Critical smoothing order max{0, (2/3)|1/2 - 1/p| - 1/6}: zero on
// 1/p in [1/4, 3/4], rising linearly to 1/6 at both endpoints.
inline double alpha_critical(double p) {
  require(is_infinite_p(p) || p >= 1.0, "invalid exponent",
          "alpha_critical requires p >= 1 or the infinity sentinel");
  const double inv_p = is_infinite_p(p) ? 0.0 : 1.0 / p;
  return std::max(0.0, (2.0 / 3.0) * std::abs(0.5 - inv_p) - 1.0 / 6.0);
}

// Hoelder dual exponent; fixed point is 2.
inline double dual_exponent(double p) {
  require(is_infinite_p(p) || p >= 1.0, "invalid exponent",
          "dual_exponent requires p >= 1 or the infinity sentinel");
  if (is_infinite_p(p)) return 1.0;
  if (p == 1.0) return infinite_p;
  return p / (p - 1.0);
}

struct NormEstimate {
  enum class Kind { exact_rank_one, lower, empirical_upper };
  std::string op_tag;
  double p = 2.0;
  double q = 2.0;
  Kind kind = Kind::lower;
  double value = 0.0;
  std::string method;
};

struct ProfilePoint {
  enum class Classification { convergent, divergent, boundary_unknown };
  double inv_p = 0.5;
  double alpha = 0.0;
  Classification classification = Classification::boundary_unknown;
  double fitted_slope = 0.0;
};

struct RestrictionProjector {
  enum class Side { inside, outside, halfline };
  double radius = 1.0;
  Side side = Side::inside;

  RestrictionProjector(double r, Side s) : radius(r), side(s) {
    require(std::isfinite(r) && r > 0.0, "argument out of range",
            "projector radius must be positive");
  }
};

namespace detail {
inline Grid default_norm_hint() { return Grid(0.0, 1.0, 101); }
}  // namespace detail

// Exact p -> p norm of the projector f |-> <phi_n, f> phi_n, which is
// ||phi_n||_p ||phi_n||_{p'}. Holds with p and p' exchanged, so the
// estimate is duality-symmetric.
inline NormEstimate rank_one_norm(
    const EigenMode& mode, double p,
    const Grid& norm_hint = detail::default_norm_hint()) {
  require(is_infinite_p(p) || p >= 1.0, "invalid exponent",
          "rank_one_norm requires p >= 1 or the infinity sentinel");
  const double q = dual_exponent(p);
  NormEstimate e;
  e.op_tag = "rank-one projector n=" + std::to_string(mode.n);
  e.p = p;
  e.q = p;
  e.kind = NormEstimate::Kind::exact_rank_one;
  e.value = mode_lp_norm(mode, p, norm_hint) * mode_lp_norm(mode, q, norm_hint);
  e.method = "product of L^p and dual L^p' mode norms";
  return e;
}

// F_n(lambda) = eta(sqrt(lambda_{n+1}) (lambda - lambda_n)) with eta a
// bump of radius pi/2 and eta(0) = 1. The gap bound
// lambda_{n+1} - lambda_n >= (pi/2) lambda_{n+1}^{-1/2} makes F_n vanish
// at every eigenvalue except lambda_n, so F_n(L) is exactly the rank-one
// projector onto phi_n.
inline MultiplierProfile isolation_profile(const SpectralBasis& basis,
                                           std::size_t n) {
  require(n >= 1 && n + 1 <= basis.modes.size(), "basis too small",
          "isolation profile needs modes n and n+1");
  const double center = basis.modes[n - 1].lambda;
  const double scale = std::sqrt(basis.modes[n].lambda);
  const double radius = 0.5 * std::numbers::pi / scale;
  MultiplierProfile f;
  f.eval = [center, scale](double lam) {
    const double t = scale * (lam - center);
    return smooth_bump(t / (0.5 * std::numbers::pi));
  };
  f.support_lo = center - radius;
  f.support_hi = center + radius;
  f.unbounded = false;
  f.smoothness = MultiplierProfile::Smoothness::closed_form;
  return f;
}

// Series n -> ||F_n(L)||_{p->p} = ||phi_n||_p ||phi_n||_{p'} over a mode
// range; the divergence witnesses of the necessary condition.
inline std::vector<NormEstimate> necessary_condition_series(
    const SpectralBasis& basis, double p, std::size_t n_lo, std::size_t n_hi,
    const Grid& norm_hint = detail::default_norm_hint()) {
  require(n_lo >= 1 && n_lo <= n_hi && n_hi <= basis.modes.size(),
          "basis too small", "mode range outside the basis");
  std::vector<NormEstimate> out;
  out.reserve(n_hi - n_lo + 1);
  for (std::size_t n = n_lo; n <= n_hi; ++n)
    out.push_back(rank_one_norm(basis.modes[n - 1], p, norm_hint));
  return out;
}

// Restricted squared 1 -> 2 row bound: sup over |y| <= lambda_scale / 4 of
// int |K_{F(L/lambda)}(x, y)|^2 dx, which collapses by orthonormality to
// sum_n F(lambda_n/lambda)^2 phi_n(y)^2, measured against the scale
// lambda^{1/2} ||F||^2_{lambda^{3/2}, 2} in the sup-sum norm. value is the
// ratio; the lemma being probed says it stays bounded in lambda.
inline NormEstimate kernel_row_L2_bound(const SpectralBasis& basis,
                                        const MultiplierProfile& F,
                                        double lambda_scale,
                                        const std::vector<double>& y_samples) {
  require(std::isfinite(lambda_scale) && lambda_scale > 0.0, "profile support",
          "lambda_scale must be positive");
  require(F.support_lo >= 3.0 / 8.0 - 1e-12 &&
              F.support_hi <= 9.0 / 8.0 + 1e-12,
          "profile support", "profile must be supported in [3/8, 9/8]");
  require(!y_samples.empty(), "propagation precondition",
          "needs at least one y sample");
  for (double y : y_samples)
    require(std::isfinite(y) && std::abs(y) <= lambda_scale / 4.0,
            "propagation precondition",
            "y samples must satisfy |y| <= lambda_scale / 4");
  MultiplierProfile scaled;
  scaled.eval = [&F, lambda_scale](double lam) {
    return F.eval(lam / lambda_scale);
  };
  scaled.support_lo = F.support_lo * lambda_scale;
  scaled.support_hi = F.support_hi * lambda_scale;
  detail::check_cutoff(basis, scaled);

  double sup = 0.0;
  for (double y : y_samples) {
    double mass = 0.0;
    for (const EigenMode& m : basis.modes) {
      if (m.lambda < scaled.support_lo || m.lambda > scaled.support_hi)
        continue;
      const double w = scaled.eval(m.lambda);
      if (w == 0.0) continue;
      const double ph = eigenfunction_eval(m, y);
      mass += w * w * ph * ph;
    }
    sup = std::max(sup, mass);
  }
  const double fnorm = sup_sum_norm(F, std::pow(lambda_scale, 1.5), 2.0);
  const double denom = std::sqrt(lambda_scale) * fnorm * fnorm;

  NormEstimate e;
  e.op_tag = "restricted row L2 mass, lambda=" + std::to_string(lambda_scale);
  e.p = 1.0;
  e.q = 2.0;
  e.kind = NormEstimate::Kind::empirical_upper;
  e.value = denom > 0.0 ? sup / denom : 0.0;
  e.method = "eigenfunction expansion against sup-sum scale";
  return e;
}

namespace detail {

// Least-squares slope of log(v) against log(r).
inline double log_log_slope(const std::vector<double>& r,
                            const std::vector<double>& v) {
  const std::size_t n = r.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(r[i]), y = std::log(v[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double det = n * sxx - sx * sx;
  return (n * sxy - sx * sy) / det;
}

}  // namespace detail

// Empirical convergence/divergence profile. For each (1/p, alpha) the
// dyadic R ladder drives a divergence witness: the mode with the largest
// lambda_n <= (3/4) R contributes the lower bound
//   sigma^alpha_R(lambda_n) * ||phi_n||_p ||phi_n||_{p'} * lambda_n^{-3 alpha / 2},
// the last factor being the multiplier-norm cost of the isolation bump
// (width lambda_n^{-3/2} after rescaling to lambda/lambda_n). Its log-log
// slope over R is (3/2)(alpha_cr(p) - alpha) up to finite-size drift:
// growth means sup_R ||sigma^alpha_R||_{p->p} diverges, decay means the
// witness family has stopped obstructing convergence.
inline std::vector<ProfilePoint> profile_scan(
    const SpectralBasis& basis, const std::vector<double>& inv_p_grid,
    const std::vector<double>& alpha_grid, const std::vector<double>& r_ladder,
    double divergent_slope = 0.02, double convergent_slope = 0.01,
    const Grid& norm_hint = detail::default_norm_hint()) {
  require(!inv_p_grid.empty() && !alpha_grid.empty() && r_ladder.size() >= 2,
          "invalid exponent", "scan needs grids and a ladder of >= 2 rungs");
  require(convergent_slope <= divergent_slope, "invalid exponent",
          "classification thresholds out of order");
  for (double ip : inv_p_grid)
    require(std::isfinite(ip) && ip >= 0.0 && ip <= 1.0, "invalid exponent",
            "1/p grid entries must lie in [0, 1]");
  for (double a : alpha_grid)
    require(std::isfinite(a) && a >= 0.0, "invalid exponent",
            "alpha grid entries must be >= 0");
  for (std::size_t i = 0; i < r_ladder.size(); ++i) {
    require(std::isfinite(r_ladder[i]) && r_ladder[i] > 0.0,
            "basis cutoff too small", "ladder rungs must be positive");
    require(r_ladder[i] <= basis.cutoff, "basis cutoff too small",
            "R ladder exceeds the basis cutoff");
    if (i > 0)
      require(r_ladder[i] > r_ladder[i - 1], "basis cutoff too small",
              "R ladder must be strictly increasing");
  }

  // Witness mode per rung: largest lambda_n <= (3/4) R.
  std::vector<std::size_t> witness(r_ladder.size());
  for (std::size_t i = 0; i < r_ladder.size(); ++i) {
    const double target = 0.75 * r_ladder[i];
    require(basis.modes.front().lambda <= target, "basis too small",
            "no eigenvalue at or below (3/4) R");
    std::size_t lo = 0;
    while (lo + 1 < basis.modes.size() &&
           basis.modes[lo + 1].lambda <= target)
      ++lo;
    witness[i] = lo;
  }

  // Rank-one norms depend on (mode, p) only; share them across alphas.
  std::map<std::pair<std::size_t, double>, double> rank_one;
  for (double ip : inv_p_grid) {
    const double p = ip == 0.0 ? infinite_p : 1.0 / ip;
    for (std::size_t w : witness) {
      const auto key = std::make_pair(w, ip);
      if (rank_one.count(key)) continue;
      rank_one[key] = rank_one_norm(basis.modes[w], p, norm_hint).value;
    }
  }

  std::vector<ProfilePoint> out;
  out.reserve(inv_p_grid.size() * alpha_grid.size());
  for (double ip : inv_p_grid)
    for (double a : alpha_grid) {
      std::vector<double> lower(r_ladder.size());
      for (std::size_t i = 0; i < r_ladder.size(); ++i) {
        const EigenMode& m = basis.modes[witness[i]];
        const double riesz = std::pow(1.0 - m.lambda / r_ladder[i], a);
        lower[i] = riesz * rank_one.at({witness[i], ip}) *
                   std::pow(m.lambda, -1.5 * a);
      }
      ProfilePoint pt;
      pt.inv_p = ip;
      pt.alpha = a;
      pt.fitted_slope = detail::log_log_slope(r_ladder, lower);
      if (pt.fitted_slope >= divergent_slope)
        pt.classification = ProfilePoint::Classification::divergent;
      else if (pt.fitted_slope <= convergent_slope)
        pt.classification = ProfilePoint::Classification::convergent;
      else
        pt.classification = ProfilePoint::Classification::boundary_unknown;
      out.push_back(pt);
    }
  return out;
}

// Pointwise multiplication by the projector's indicator.
inline GridFunction apply_projector(const RestrictionProjector& proj,
                                    const GridFunction& f) {
  GridFunction out = f;
  for (int i = 0; i < f.grid.n_points; ++i) {
    const double x = f.grid.x(i);
    bool keep;
    switch (proj.side) {
      case RestrictionProjector::Side::inside:
        keep = std::abs(x) <= proj.radius;
        break;
      case RestrictionProjector::Side::outside:
        keep = std::abs(x) > proj.radius;
        break;
      default:
        keep = x >= proj.radius;
        break;
    }
    if (!keep) out.values[i] = complex(0.0, 0.0);
  }
  return out;
}

}  // namespace anharmonic
