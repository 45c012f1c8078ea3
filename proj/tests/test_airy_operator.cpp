#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "anharmonic/airy_operator.hpp"

using namespace anharmonic;

namespace {

// Shared grids: physical window wide enough that Gaussian test functions
// vanish at the edges, spectral window covering their Airy content.
const Grid space_grid(-9.0, 9.0, 901);
const Grid spectral_grid(-14.0, 60.0, 3701);

double l2(const GridFunction& f) { return lp_norm(f, 2.0); }

double max_diff(const GridFunction& a, const GridFunction& b) {
  double worst = 0.0;
  for (int i = 0; i < a.grid.n_points; ++i)
    worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
  return worst;
}

}  // namespace

TEST_CASE("airy transform is an isometry and inverts on smooth inputs") {
  AiryTransformPlan plan = make_transform_plan(space_grid, spectral_grid);
  int idx = 0;
  for (auto f0 : {
           +[](double x) { return std::exp(-0.5 * x * x); },
           +[](double x) { return x * std::exp(-0.5 * x * x); },
       }) {
    CAPTURE(idx++);
    GridFunction f = sample(space_grid, f0);
    GridFunction fhat = airy_transform(plan, f);
    CHECK(std::abs(l2(fhat) / l2(f) - 1.0) < 1e-6);
    GridFunction back = airy_inverse_transform(plan, fhat);
    CHECK(max_diff(back, f) < 1e-5);
  }
}

TEST_CASE("transforming zero gives zero") {
  AiryTransformPlan plan = make_transform_plan(space_grid, spectral_grid);
  GridFunction zero = sample(space_grid, [](double) { return 0.0; });
  GridFunction out = airy_transform(plan, zero);
  CHECK(l2(out) == 0.0);
}

TEST_CASE("transform rejects mismatched grids and leaking inputs") {
  AiryTransformPlan plan = make_transform_plan(space_grid, spectral_grid);
  GridFunction wrong =
      sample(Grid(-9.0, 9.0, 899), [](double x) { return std::exp(-x * x); });
  CHECK_THROWS_WITH_AS(airy_transform(plan, wrong),
                       doctest::Contains("incompatible grids"), contract_error);
  // A function that has not decayed at the window edge is rejected.
  GridFunction leaking = sample(space_grid, [](double) { return 1.0; });
  CHECK_THROWS_WITH_AS(airy_transform(plan, leaking),
                       doctest::Contains("domain too small"), contract_error);
  CHECK_THROWS_AS(
      AiryTransformPlan(space_grid, spectral_grid,
                        QuadratureRule(
                            QuadratureRule::Kind::composite_gauss_legendre, 4,
                            16)),
      contract_error);
}

TEST_CASE("continuous kernel rows are symmetric") {
  MultiplierProfile F = bump_profile(10.0, 20.0);
  const Grid g(-12.0, 12.0, 241);
  const double x = g.x(157), y = g.x(68);  // 3.7 and -5.2
  GridFunction row_x = airy_multiplier_kernel_row(F, x, g);
  GridFunction row_y = airy_multiplier_kernel_row(F, y, g);
  CHECK(std::abs(row_x.values[68] - row_y.values[157]) < 1e-9);
  CHECK(std::abs(row_x.values[68].real() - 1.8332984623e-2) < 1e-9);
}

TEST_CASE("kernel rows reject profiles without compact support") {
  MultiplierProfile F = riesz_profile({1.0, 10.0});
  F.support_lo = -infinite_p;
  const Grid g(-2.0, 2.0, 5);
  CHECK_THROWS_WITH_AS(airy_multiplier_kernel_row(F, 0.0, g),
                       doctest::Contains("profile decay"), contract_error);
}

TEST_CASE("row L2 mass equals the profile L2 mass (Plancherel)") {
  MultiplierProfile F = bump_profile(10.0, 20.0);
  PlancherelRowResult r = kernel_row_plancherel(F, 3.7);
  CHECK(r.profile_side > 0.0);
  CHECK(std::abs(r.row_side - r.profile_side) < 1e-6 * r.profile_side);
  CHECK(r.y_lo < 0.0);
}

TEST_CASE("banded multiplier rows satisfy the eigenrelation of A") {
  // K_F(., y) for a narrow indicator around lambda0 is an approximate
  // eigenvector: (-D^2 + x) K = lambda0 K up to the band width. Checked with
  // second differences, L2-relative.
  const double lam0 = 10.0;
  MultiplierProfile F = make_profile(
      [lam0](double t) { return std::abs(t - lam0) <= 0.05 ? 1.0 : 0.0; },
      lam0 - 0.05, lam0 + 0.05, MultiplierProfile::Smoothness::closed_form);
  const Grid g(-8.0, 13.0, 21001);
  GridFunction row = airy_multiplier_kernel_row(F, 0.3, g);
  const double h = g.step();
  double num = 0.0, den = 0.0;
  for (int i = 1; i + 1 < g.n_points; ++i) {
    const double second = (row.values[i - 1].real() - 2.0 * row.values[i].real() +
                           row.values[i + 1].real()) /
                          (h * h);
    const double resid = -second + (g.x(i) - lam0) * row.values[i].real();
    num += resid * resid;
    den += std::pow(lam0 * row.values[i].real(), 2);
  }
  CHECK(std::sqrt(num / den) < 5e-3);
}

TEST_CASE("finite propagation: the default bandwidth pins the kernel down") {
  MultiplierProfile F = bump_profile(0.5, 1.0);
  const Grid g(-20.0, 40.0, 241);
  const double gap = verify_finite_propagation(F, 40.0, 15.0, g);
  CHECK(gap <= 1e-3);
  CHECK_THROWS_WITH_AS(verify_finite_propagation(F, 40.0, 5.0, g),
                       doctest::Contains("propagation precondition"),
                       contract_error);
}

TEST_CASE("kernel bound reports: regimes, envelope distance, violations") {
  const Grid g(-40.0, 40.0, 401);
  MultiplierProfile w = bump_profile(-4.0, 4.0);
  KernelBoundReport r = verify_kernel_bound(w, 30.0, 4, g);
  // Regime A: a = 4 >= min(1, 30^{-1/2}); d = max(1/2, sqrt(30)/4).
  CHECK(r.a == 4.0);
  CHECK(r.y == 30.0);
  CHECK(r.l == 4);
  CHECK(r.d == doctest::Approx(std::sqrt(30.0) / 4.0).epsilon(1e-12));
  CHECK(r.fitted_C > 0.0);
  CHECK(r.max_violation_ratio <= 1.0);
  CHECK(r.max_violation_ratio == doctest::Approx(1.0).epsilon(1e-9));

  // Narrow profile at the same y lands in regime B.
  MultiplierProfile wn = bump_profile(-0.1, 0.1);
  KernelBoundReport rb = verify_kernel_bound(wn, 30.0, 4, g);
  CHECK(rb.d == doctest::Approx(std::max(std::pow(0.1, -0.5),
                                         std::sqrt(30.0) / 0.1))
                    .epsilon(1e-12));
  CHECK(rb.max_violation_ratio <= 1.0);

  // Forcing the regime that does not match the widths is rejected.
  CHECK_THROWS_WITH_AS(
      verify_kernel_bound(w, 30.0, 4, g, KernelRegime::envelope_b),
      doctest::Contains("regime"), contract_error);
  CHECK_THROWS_WITH_AS(verify_kernel_bound(w, 30.0, 0, g),
                       doctest::Contains("invalid exponent"), contract_error);
}

TEST_CASE("zero profile yields a zero constant") {
  const Grid g(-10.0, 10.0, 101);
  MultiplierProfile w = make_profile([](double) { return 0.0; }, -1.0, 1.0,
                                     MultiplierProfile::Smoothness::closed_form);
  KernelBoundReport r = verify_kernel_bound(w, 30.0, 4, g);
  CHECK(r.fitted_C == 0.0);
}
