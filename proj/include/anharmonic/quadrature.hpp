#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

#include "anharmonic/error.hpp"
#include "anharmonic/grid.hpp"

namespace anharmonic {

// Sentinel for p = infinity in L^p interfaces.
inline constexpr double infinite_p = std::numeric_limits<double>::infinity();
inline bool is_infinite_p(double p) { return std::isinf(p) && p > 0; }

struct QuadratureRule {
  enum class Kind { composite_gauss_legendre, trapezoid };
  Kind kind = Kind::composite_gauss_legendre;
  int panel_count = 1;
  int nodes_per_panel = 16;

  QuadratureRule() = default;
  QuadratureRule(Kind k, int panels, int nodes)
      : kind(k), panel_count(panels), nodes_per_panel(nodes) {
    require(panel_count >= 1, "invalid rule", "panel_count must be positive");
    if (kind == Kind::composite_gauss_legendre)
      require(nodes_per_panel >= 2, "invalid rule",
              "gauss-legendre needs at least 2 nodes per panel");
    else
      require(nodes_per_panel >= 2, "invalid rule",
              "trapezoid needs at least 2 nodes per panel");
  }
};

namespace detail {

struct GlPoints {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;  // sum to 2
};

// Gauss-Legendre points by Newton iteration on the Legendre recurrence.
inline GlPoints compute_gauss_legendre(int n) {
  GlPoints r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    // one clean-up pass for the weight
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = r.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

inline const GlPoints& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GlPoints> cache;
  std::scoped_lock lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
  return it->second;
}

}  // namespace detail

// Integrates f over [lo, hi] with the given rule. Every sample is checked;
// a NaN/Inf sample raises "non-finite integrand". Summation order is fixed.
template <class F>
complex integrate(F&& f, double lo, double hi, const QuadratureRule& rule) {
  require(std::isfinite(lo) && std::isfinite(hi) && lo < hi,
          "invalid interval", "requires lo < hi");
  const double width = (hi - lo) / rule.panel_count;
  complex total = 0.0;
  if (rule.kind == QuadratureRule::Kind::trapezoid) {
    const int n = rule.nodes_per_panel;
    for (int p = 0; p < rule.panel_count; ++p) {
      const double a = lo + p * width;
      const double h = width / (n - 1);
      complex acc = 0.0;
      for (int j = 0; j < n; ++j) {
        complex v = complex(f(a + h * j));
        require(std::isfinite(v.real()) && std::isfinite(v.imag()),
                "non-finite integrand");
        acc += (j == 0 || j == n - 1) ? 0.5 * v : v;
      }
      total += acc * h;
    }
    return total;
  }
  const auto& gl = detail::gauss_legendre(rule.nodes_per_panel);
  for (int p = 0; p < rule.panel_count; ++p) {
    const double a = lo + p * width;
    const double c = a + 0.5 * width;
    const double s = 0.5 * width;
    complex acc = 0.0;
    for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
      complex v = complex(f(c + s * gl.nodes[j]));
      require(std::isfinite(v.real()) && std::isfinite(v.imag()),
              "non-finite integrand");
      acc += gl.weights[j] * v;
    }
    total += acc * s;
  }
  return total;
}

template <class F>
double integrate_real(F&& f, double lo, double hi, const QuadratureRule& rule) {
  return integrate([&](double x) { return complex(f(x), 0.0); }, lo, hi, rule)
      .real();
}

// Panel layout resolving an oscillation of angular frequency max_freq:
// panel width <= one quarter of the wavelength 2π/max_freq.
inline QuadratureRule oscillatory_rule(double lo, double hi, double max_freq,
                                       int nodes_per_panel = 16) {
  require(std::isfinite(lo) && std::isfinite(hi) && lo < hi, "invalid interval");
  const double freq = std::max(max_freq, 1.0);
  const double quarter_wavelength = 0.5 * std::numbers::pi / freq;
  int panels = static_cast<int>(std::ceil((hi - lo) / quarter_wavelength));
  panels = std::max(panels, 1);
  return QuadratureRule(QuadratureRule::Kind::composite_gauss_legendre, panels,
                        nodes_per_panel);
}

namespace detail {
// Trapezoid weight of node i on grid g.
inline double trapezoid_weight(const Grid& g, int i) {
  const double h = g.step();
  return (i == 0 || i == g.n_points - 1) ? 0.5 * h : h;
}

struct WeightedNode {
  double x = 0.0;
  double w = 0.0;
};

// Flattens a GL rule on [lo, hi] into explicit (node, weight) pairs, for
// integrands whose per-node factors are worth caching across many sweeps.
inline std::vector<WeightedNode> materialize_nodes(const QuadratureRule& rule,
                                                   double lo, double hi) {
  require(std::isfinite(lo) && std::isfinite(hi) && lo < hi, "invalid interval");
  require(rule.kind == QuadratureRule::Kind::composite_gauss_legendre,
          "invalid rule", "materialize_nodes expects a gauss-legendre rule");
  const GlPoints& gl = gauss_legendre(rule.nodes_per_panel);
  const double width = (hi - lo) / rule.panel_count;
  std::vector<WeightedNode> out;
  out.reserve(static_cast<std::size_t>(rule.panel_count) * gl.nodes.size());
  for (int p = 0; p < rule.panel_count; ++p) {
    const double c = lo + p * width + 0.5 * width;
    const double s = 0.5 * width;
    for (std::size_t j = 0; j < gl.nodes.size(); ++j)
      out.push_back({c + s * gl.nodes[j], s * gl.weights[j]});
  }
  return out;
}
}  // namespace detail

// (∫ |g|^p)^{1/p} with the grid's trapezoid weights; max |g| for p = ∞.
inline double lp_norm(const GridFunction& g, double p) {
  require(!std::isnan(p) && p >= 1.0, "invalid exponent", "requires p >= 1");
  if (is_infinite_p(p)) {
    double m = 0.0;
    for (const complex& z : g.values) m = std::max(m, std::abs(z));
    return m;
  }
  double acc = 0.0;
  for (int i = 0; i < g.size(); ++i)
    acc += detail::trapezoid_weight(g.grid, i) * std::pow(std::abs(g.values[i]), p);
  return std::pow(acc, 1.0 / p);
}

// ∫ f conj(g) with shared-grid trapezoid weights.
inline complex inner_product(const GridFunction& f, const GridFunction& g) {
  require(f.grid == g.grid, "incompatible grids");
  complex acc = 0.0;
  for (int i = 0; i < f.size(); ++i)
    acc += detail::trapezoid_weight(f.grid, i) * f.values[i] * std::conj(g.values[i]);
  return acc;
}

}  // namespace anharmonic
