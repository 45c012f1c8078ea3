#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "anharmonic/multiplier.hpp"

using namespace anharmonic;

TEST_CASE("riesz profile values and support") {
  MultiplierProfile F = riesz_profile({0.5, 8.0});
  CHECK(F.eval(0.0) == 1.0);
  CHECK(F.eval(8.0) == 0.0);
  CHECK(F.eval(9.0) == 0.0);
  CHECK(F.eval(-1.0) == 0.0);
  CHECK(F.eval(4.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(F.support_lo == 0.0);
  CHECK(F.support_hi == 8.0);
  CHECK(!F.unbounded);
  CHECK_THROWS_WITH_AS(riesz_profile({-0.1, 1.0}),
                       doctest::Contains("invalid exponent"), contract_error);
  CHECK_THROWS_WITH_AS(riesz_profile({0.5, 0.0}),
                       doctest::Contains("invalid exponent"), contract_error);
}

TEST_CASE("smooth bump is a normalized bump") {
  CHECK(smooth_bump(0.0) == 1.0);
  CHECK(smooth_bump(1.0) == 0.0);
  CHECK(smooth_bump(-1.0) == 0.0);
  CHECK(smooth_bump(0.5) > smooth_bump(0.9));
  MultiplierProfile B = bump_profile(2.0, 6.0);
  CHECK(B.eval(4.0) == 1.0);
  CHECK(B.eval(2.0) == 0.0);
  CHECK(B.eval(7.0) == 0.0);
}

TEST_CASE("profile factory verifies the declared support") {
  CHECK_NOTHROW(make_profile([](double t) { return t > 0.0 && t < 1.0 ? 1.0 : 0.0; },
                             0.0, 1.0, MultiplierProfile::Smoothness::closed_form));
  CHECK_THROWS_WITH_AS(
      make_profile([](double) { return 1.0; }, 0.0, 1.0,
                   MultiplierProfile::Smoothness::closed_form),
      doctest::Contains("profile support"), contract_error);
}

TEST_CASE("sup-sum norm of the unit indicator has a closed form") {
  // Eleven cells meet [0, 1] at M = 10 (the l = 11 cell only at its left
  // endpoint), each with sup 1: norm = sqrt(11/10).
  MultiplierProfile ind = make_profile(
      [](double t) { return t >= 0.0 && t <= 1.0 ? 1.0 : 0.0; }, 0.0, 1.0,
      MultiplierProfile::Smoothness::closed_form);
  const double got = sup_sum_norm(ind, 10.0, 2.0);
  CHECK(got == doctest::Approx(std::sqrt(1.1)).epsilon(1e-12));
}

TEST_CASE("sup-sum norm is stable in the sample count and zero on zero") {
  MultiplierProfile F = riesz_profile({1.0, 1.0});
  const double a = sup_sum_norm(F, 4.0, 2.0, 64);
  const double b = sup_sum_norm(F, 4.0, 2.0, 256);
  CHECK(std::abs(a - b) < 1e-3 * std::max(a, 1.0));
  MultiplierProfile zero = make_profile([](double) { return 0.0; }, 0.0, 1.0,
                                        MultiplierProfile::Smoothness::closed_form);
  CHECK(sup_sum_norm(zero, 10.0, 2.0) == 0.0);
  MultiplierProfile ub;
  ub.eval = [](double) { return 1.0; };
  ub.unbounded = true;
  CHECK_THROWS_WITH_AS(sup_sum_norm(ub, 10.0, 2.0),
                       doctest::Contains("requires compact support"),
                       contract_error);
  CHECK_THROWS_WITH_AS(sup_sum_norm(F, 0.5, 2.0),
                       doctest::Contains("invalid exponent"), contract_error);
}

TEST_CASE("a full-band multiplier acts as the identity on a bandlimited input") {
  SpectralBasis basis = build_basis(20);
  const Grid g(-14.0, 14.0, 1401);
  const EigenMode& m = basis.modes[2];
  GridFunction f = sample(g, [&](double x) { return eigenfunction_eval(m, x); });
  MultiplierProfile one = make_profile(
      [&](double t) { return t > 0.0 && t <= basis.cutoff ? 1.0 : 0.0; }, 0.0,
      basis.cutoff, MultiplierProfile::Smoothness::closed_form);
  GridFunction out = apply_multiplier(basis, one, f);
  double worst = 0.0;
  for (int i = 0; i < g.n_points; ++i)
    worst = std::max(worst, std::abs(out.values[i] - f.values[i]));
  CHECK(worst < 5e-9);
}

TEST_CASE("multipliers act on eigenfunctions by scalar multiplication") {
  SpectralBasis basis = build_basis(20);
  const Grid g(-14.0, 14.0, 1401);
  const EigenMode& m = basis.modes[2];
  GridFunction f = sample(g, [&](double x) { return eigenfunction_eval(m, x); });
  MultiplierProfile F = riesz_profile({1.0, basis.cutoff});
  GridFunction out = apply_multiplier(basis, F, f);
  const double scalar = F.eval(m.lambda);
  double worst = 0.0;
  for (int i = 0; i < g.n_points; ++i)
    worst = std::max(worst, std::abs(out.values[i] - scalar * f.values[i]));
  CHECK(worst < 1e-9);
}

TEST_CASE("indicator multipliers are idempotent") {
  SpectralBasis basis = build_basis(24);
  const Grid g(-12.0, 12.0, 1201);
  GridFunction f =
      sample(g, [](double x) { return std::exp(-0.5 * x * x) * (1.0 + 0.3 * x); });
  MultiplierProfile ind = make_profile(
      [](double t) { return t > 0.0 && t <= 5.0 ? 1.0 : 0.0; }, 0.0, 5.0,
      MultiplierProfile::Smoothness::closed_form);
  GridFunction once = apply_multiplier(basis, ind, f);
  GridFunction twice = apply_multiplier(basis, ind, once);
  double worst = 0.0;
  for (int i = 0; i < g.n_points; ++i)
    worst = std::max(worst, std::abs(twice.values[i] - once.values[i]));
  CHECK(worst < 3e-9);
}

TEST_CASE("kernel rows are symmetric and satisfy the discrete Parseval identity") {
  SpectralBasis basis = build_basis(30);
  MultiplierProfile ind = make_profile(
      [](double t) { return t > 0.0 && t <= 9.0 ? 1.0 : 0.0; }, 0.0, 9.0,
      MultiplierProfile::Smoothness::closed_form);
  const Grid g(-12.0, 12.0, 2401);
  const double x = g.x(1700), y = g.x(900);
  GridFunction row_x = multiplier_kernel_row(basis, ind, x, g);
  GridFunction row_y = multiplier_kernel_row(basis, ind, y, g);
  // Symmetry: K(x, y) = K(y, x), both available on the shared grid.
  CHECK(std::abs(row_x.values[900] - row_y.values[1700]) < 1e-11);
  // Parseval: for an indicator, int K(x,.) K(y,.) = K(x, y); trapezoid route.
  complex dot = 0.0;
  for (int i = 0; i < g.n_points; ++i)
    dot += detail::trapezoid_weight(g, i) * row_x.values[i] * row_y.values[i];
  CHECK(std::abs(dot - row_x.values[900]) < 2e-8);
}

TEST_CASE("cutoff guard rejects profiles wider than the basis") {
  SpectralBasis basis = build_basis(5);
  const Grid g(-5.0, 5.0, 11);
  GridFunction f = sample(g, [](double) { return 1.0; });
  MultiplierProfile F = riesz_profile({1.0, basis.cutoff + 10.0});
  CHECK_THROWS_WITH_AS(apply_multiplier(basis, F, f),
                       doctest::Contains("basis cutoff too small"),
                       contract_error);
  CHECK_THROWS_WITH_AS(multiplier_kernel_row(basis, F, 0.0, g),
                       doctest::Contains("basis cutoff too small"),
                       contract_error);
}

TEST_CASE("band/remainder split reconstructs the profile exactly") {
  MultiplierProfile F = bump_profile(0.5, 1.0);
  GHSplit split = gh_split(F, 32.0);
  CHECK(split.mollifier_bandwidth ==
        doctest::Approx(std::pow(32.0, 1.5) / 6.0).epsilon(1e-15));
  CHECK(split.g_part.support_lo == 0.0);
  CHECK(split.g_part.support_hi == 4.0);
  CHECK(split.g_part.smoothness == MultiplierProfile::Smoothness::band_limited);
  CHECK(split.h_part.smoothness == MultiplierProfile::Smoothness::tabulated);
  CHECK(split.h_part.table_theta.size() == split.h_part.table_value.size());
  double worst = 0.0;
  for (double t = 0.0; t <= 4.0; t += 0.0137) {
    const double rebuilt = split.g_part.eval(t) + split.h_part.eval(t);
    worst = std::max(worst, std::abs(rebuilt - F.eval(t)));
  }
  CHECK(worst < 1e-14);
}

TEST_CASE("remainder mass decays as the scale grows") {
  MultiplierProfile F = bump_profile(0.5, 1.0);
  double prev_l2 = 1e300, prev_sup = 1e300;
  for (double ls : {16.0, 32.0, 64.0}) {
    CAPTURE(ls);
    GHSplit split = gh_split(F, ls);
    const double l2 = gh_h_l2(split);
    const double sup = gh_h_sup(split);
    // Each doubling of the scale must shed most of the remainder: the
    // smooth bump loses at least half its mass per octave.
    CHECK(l2 < 0.5 * prev_l2);
    CHECK(sup < 0.75 * prev_sup);
    prev_l2 = l2;
    prev_sup = sup;
  }
  CHECK(prev_l2 < 0.05);
}

TEST_CASE("wider mollifier bandwidth shrinks the remainder") {
  MultiplierProfile F = bump_profile(0.5, 1.0);
  const double h0 = std::pow(16.0, 1.5) / 6.0;
  const double tight = gh_h_l2(gh_split(F, 16.0, h0));
  const double wide = gh_h_l2(gh_split(F, 16.0, 4.0 * h0));
  CHECK(wide < tight);
}

TEST_CASE("split rejects profiles outside [1/2, 1] and tiny scales") {
  CHECK_THROWS_WITH_AS(gh_split(bump_profile(0.3, 1.0), 16.0),
                       doctest::Contains("profile support"), contract_error);
  CHECK_THROWS_WITH_AS(gh_split(bump_profile(0.5, 1.0), 0.5),
                       doctest::Contains("profile support"), contract_error);
}
