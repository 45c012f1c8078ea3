#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "anharmonic/grid.hpp"
#include "anharmonic/quadrature.hpp"

using namespace anharmonic;

TEST_CASE("gauss-legendre is exact on polynomials up to degree 2n-1") {
  const QuadratureRule rule(QuadratureRule::Kind::composite_gauss_legendre, 1,
                            16);
  for (int k = 0; k <= 31; ++k) {
    CAPTURE(k);
    const double got =
        integrate_real([k](double x) { return std::pow(x, k); }, 0.0, 1.0, rule);
    CHECK(std::abs(got - 1.0 / (k + 1)) < 1e-14);
  }
}

TEST_CASE("trapezoid rule is spectrally accurate on a periodic integrand") {
  // One period of exp(sin x); exact value is 2 pi I_0(1) with the Bessel
  // constant frozen from standard tables.
  const double exact = 2.0 * std::numbers::pi * 1.2660658777520083356;
  const QuadratureRule rule(QuadratureRule::Kind::trapezoid, 1, 129);
  const double got = integrate_real([](double x) { return std::exp(std::sin(x)); },
                                    0.0, 2.0 * std::numbers::pi, rule);
  CHECK(std::abs(got - exact) < 1e-12);
}

TEST_CASE("oscillatory rule resolves a fast cosine") {
  const double w = 50.0;
  const QuadratureRule rule = oscillatory_rule(0.0, 10.0, w);
  const double got =
      integrate_real([w](double x) { return std::cos(w * x); }, 0.0, 10.0, rule);
  const double exact = std::sin(w * 10.0) / w;
  CHECK(std::abs(got - exact) < 1e-13);
}

TEST_CASE("materialized nodes reproduce the rule's integral and total weight") {
  const QuadratureRule rule(QuadratureRule::Kind::composite_gauss_legendre, 7,
                            16);
  auto f = [](double x) { return std::exp(-x) * std::cos(3.0 * x); };
  const double direct = integrate_real(f, -1.0, 2.5, rule);
  auto nodes = detail::materialize_nodes(rule, -1.0, 2.5);
  CHECK(nodes.size() == 7 * 16);
  double acc = 0.0, wsum = 0.0;
  for (const auto& n : nodes) {
    acc += n.w * f(n.x);
    wsum += n.w;
  }
  CHECK(std::abs(acc - direct) < 1e-15);
  CHECK(std::abs(wsum - 3.5) < 1e-13);
}

TEST_CASE("materialize_nodes rejects trapezoid rules and bad intervals") {
  const QuadratureRule tr(QuadratureRule::Kind::trapezoid, 1, 8);
  CHECK_THROWS_WITH_AS(detail::materialize_nodes(tr, 0.0, 1.0),
                       doctest::Contains("invalid rule"), contract_error);
  const QuadratureRule gl(QuadratureRule::Kind::composite_gauss_legendre, 1, 8);
  CHECK_THROWS_WITH_AS(detail::materialize_nodes(gl, 1.0, 1.0),
                       doctest::Contains("invalid interval"), contract_error);
}

TEST_CASE("integration rejects non-finite integrands and empty intervals") {
  const QuadratureRule rule(QuadratureRule::Kind::composite_gauss_legendre, 2,
                            8);
  CHECK_THROWS_WITH_AS(
      integrate_real([](double x) { return 1.0 / (x - x); }, 0.0, 1.0, rule),
      doctest::Contains("non-finite integrand"), contract_error);
  CHECK_THROWS_WITH_AS(integrate_real([](double) { return 1.0; }, 2.0, 1.0, rule),
                       doctest::Contains("invalid interval"), contract_error);
}

TEST_CASE("grid function norms: trapezoid weights and the sup norm") {
  const Grid g(0.0, 2.0, 41);
  GridFunction f = sample(g, [](double) { return complex(3.0, 0.0); });
  // Constant: trapezoid is exact for every p.
  CHECK(lp_norm(f, 1.0) == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(lp_norm(f, 2.0) == doctest::Approx(3.0 * std::sqrt(2.0)).epsilon(1e-14));
  CHECK(lp_norm(f, infinite_p) == 3.0);
  CHECK(is_infinite_p(infinite_p));
  CHECK(!is_infinite_p(2.0));
  CHECK_THROWS_WITH_AS(lp_norm(f, 0.5), doctest::Contains("invalid exponent"),
                       contract_error);
}

TEST_CASE("trapezoid endpoint weights are halved") {
  const Grid g(0.0, 1.0, 5);
  CHECK(detail::trapezoid_weight(g, 0) == doctest::Approx(0.125));
  CHECK(detail::trapezoid_weight(g, 2) == doctest::Approx(0.25));
  CHECK(detail::trapezoid_weight(g, 4) == doctest::Approx(0.125));
}

TEST_CASE("grids validate their bounds and reject mismatched samples") {
  CHECK_THROWS_WITH_AS(Grid(1.0, 1.0, 5), doctest::Contains("invalid grid"),
                       contract_error);
  CHECK_THROWS_WITH_AS(Grid(0.0, 1.0, 1), doctest::Contains("invalid grid"),
                       contract_error);
  CHECK_THROWS_WITH_AS(GridFunction(Grid(0.0, 1.0, 3), {complex(0.0)}),
                       doctest::Contains("invalid grid function"),
                       contract_error);
  const Grid g(0.0, 1.0, 3);
  CHECK(g.step() == doctest::Approx(0.5));
  CHECK(g.x(2) == doctest::Approx(1.0));
  CHECK(g == Grid(0.0, 1.0, 3));
  CHECK(!(g == Grid(0.0, 1.0, 4)));
}
