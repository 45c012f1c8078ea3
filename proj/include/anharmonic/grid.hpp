#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "anharmonic/error.hpp"

namespace anharmonic {

using complex = std::complex<double>;

// Uniform 1-D grid, both endpoints included.
struct Grid {
  double lo = 0.0;
  double hi = 1.0;
  int n_points = 2;

  Grid() = default;
  Grid(double lo_, double hi_, int n) : lo(lo_), hi(hi_), n_points(n) {
    require(std::isfinite(lo) && std::isfinite(hi) && lo < hi,
            "invalid grid", "requires lo < hi");
    require(n_points >= 2, "invalid grid", "requires n_points >= 2");
  }

  double step() const { return (hi - lo) / (n_points - 1); }
  double x(int i) const { return lo + step() * i; }

  bool operator==(const Grid& o) const {
    return lo == o.lo && hi == o.hi && n_points == o.n_points;
  }
};

// Complex samples on a Grid. Immutable by convention once built.
struct GridFunction {
  Grid grid;
  std::vector<complex> values;

  GridFunction() = default;
  GridFunction(Grid g, std::vector<complex> v)
      : grid(g), values(std::move(v)) {
    require(static_cast<int>(values.size()) == grid.n_points,
            "invalid grid function", "values length must match n_points");
    for (const complex& z : values)
      require(std::isfinite(z.real()) && std::isfinite(z.imag()),
              "invalid grid function", "non-finite sample");
  }

  int size() const { return grid.n_points; }
};

// Samples a scalar function on a grid.
template <class F>
GridFunction sample(const Grid& g, F&& f) {
  std::vector<complex> v(g.n_points);
  for (int i = 0; i < g.n_points; ++i) v[i] = complex(f(g.x(i)));
  return GridFunction(g, std::move(v));
}

}  // namespace anharmonic
