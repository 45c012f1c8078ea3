#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "anharmonic/spectrum.hpp"

using namespace anharmonic;

namespace {
const Grid norm_hint(0.0, 1.0, 101);
}

TEST_CASE("leading eigenvalues are the interlaced Airy zero magnitudes") {
  // Frozen from the independent extended-precision evaluator: odd-indexed
  // modes take Ai' zeros (even parity), even-indexed take Ai zeros (odd).
  const double ref[] = {1.0187929716474710890173247834,
                        2.33810741045976703848919725244674,
                        3.2481975821798365378754237708,
                        4.08794944413097061663698870145739,
                        4.8200992111787356394006162604,
                        5.52055982809555105912985551293129,
                        6.1633073556394865476378435331,
                        6.78670809007175899878024638449618};
  SpectralBasis b = build_basis(8);
  for (int i = 0; i < 8; ++i) {
    CAPTURE(i);
    CHECK(std::abs(b.modes[i].lambda - ref[i]) < 1e-12);
    CHECK(b.modes[i].n == static_cast<std::size_t>(i + 1));
    CHECK(b.modes[i].parity == (i % 2 == 0 ? Parity::even : Parity::odd));
  }
  CHECK(b.cutoff == b.modes.back().lambda);
}

TEST_CASE("boundary identity lambda phi(0)^2 + phi'(0)^2 = 1/2") {
  SpectralBasis b = build_basis(40);
  for (std::size_t n : {1u, 2u, 7u, 20u, 39u}) {
    CAPTURE(n);
    const EigenMode& m = b.modes[n - 1];
    // phi(0) = A Ai(-lambda), phi'(0) = A Ai'(-lambda); one factor vanishes
    // per parity since lambda is a zero of Ai' (even) or Ai (odd).
    const AiryEval e = ai(-m.lambda);
    const double phi0 = m.norm_const * e.ai;
    const double dphi0 = m.norm_const * e.ai_prime;
    CHECK(std::abs(m.lambda * phi0 * phi0 + dphi0 * dphi0 - 0.5) < 1e-13);
    if (m.parity == Parity::even)
      CHECK(std::abs(dphi0) < 1e-13);
    else
      CHECK(std::abs(m.lambda * phi0 * phi0) < 1e-12);
  }
}

TEST_CASE("eigenfunctions have exact parity and unit L2 norm") {
  SpectralBasis b = build_basis(12);
  for (const EigenMode& m : b.modes) {
    CAPTURE(m.n);
    const double sign = m.parity == Parity::even ? 1.0 : -1.0;
    CHECK(eigenfunction_eval(m, -1.37) == sign * eigenfunction_eval(m, 1.37));
    CHECK(eigenfunction_eval(m, -0.4) == sign * eigenfunction_eval(m, 0.4));
    // Quadrature route against the closed-form normalization.
    CHECK(std::abs(mode_lp_norm(m, 2.0, norm_hint) - 1.0) < 1e-9);
  }
}

TEST_CASE("consecutive gaps obey the two-sided square-root bounds") {
  SpectralBasis b = build_basis(101);
  for (int n = 0; n < 100; ++n) {
    CAPTURE(n);
    const double a = b.modes[n].lambda, c = b.modes[n + 1].lambda;
    const double gap = c - a;
    CHECK(gap >= 0.5 * std::numbers::pi / std::sqrt(c) - 1e-12);
    CHECK(gap <= 0.5 * std::numbers::pi / std::sqrt(a) + 1e-12);
  }
}

TEST_CASE("eigenvalue asymptote holds to a tight margin at n = 100") {
  SpectralBasis b = build_basis(100);
  const double ref = std::pow(0.75 * std::numbers::pi * 100.0, 2.0 / 3.0);
  // The zero parameter sits at (2n - 1)/(2n) of 3 pi n / 4 for either
  // parity, so the eigenvalue lies below the asymptote by 1/(3n) + O(n^-2).
  CHECK(b.modes[99].lambda < ref);
  CHECK(1.0 - b.modes[99].lambda / ref ==
        doctest::Approx(1.0 / 300.0).epsilon(0.05));
}

TEST_CASE("counting function steps exactly at eigenvalues") {
  SpectralBasis b = build_basis(30);
  CHECK(counting_function(b, b.modes[0].lambda - 1e-9) == 0);
  CHECK(counting_function(b, b.modes[0].lambda + 1e-9) == 1);
  for (std::size_t n : {5u, 12u, 29u}) {
    const double lam = b.modes[n].lambda;
    CHECK(counting_function(b, lam - 1e-9) == n);
    // The cutoff is the last eigenvalue itself, so the step above it is
    // only observable for interior modes.
    if (n + 1 < b.modes.size()) CHECK(counting_function(b, lam + 1e-9) == n + 1);
  }
  CHECK(counting_function(b, 0.5) == 0);
  CHECK_THROWS_WITH_AS(counting_function(b, b.cutoff + 1.0),
                       doctest::Contains("basis too small"), contract_error);
}

TEST_CASE("L1 norm scales like the square root of the eigenvalue") {
  SpectralBasis b = build_basis(100);
  const double n50 = mode_lp_norm(b.modes[49], 1.0, norm_hint);
  const double n100 = mode_lp_norm(b.modes[99], 1.0, norm_hint);
  const double predicted =
      std::sqrt(b.modes[99].lambda / b.modes[49].lambda);
  CHECK(n100 / n50 == doctest::Approx(predicted).epsilon(0.15));
}

TEST_CASE("sup norm matches a dense scan of the eigenfunction") {
  SpectralBasis b = build_basis(25);
  const EigenMode& m = b.modes[24];
  const double sup = mode_lp_norm(m, infinite_p, norm_hint);
  double scan = 0.0;
  for (double u = 0.0; u <= m.lambda + 4.0; u += 0.002)
    scan = std::max(scan, std::abs(eigenfunction_eval(m, u)));
  CHECK(sup >= scan - 1e-12);
  CHECK(sup <= scan * (1.0 + 1e-6) + 1e-12);
}

TEST_CASE("basis construction to a spectral cutoff covers the request") {
  SpectralBasis b = build_basis_to_cutoff(25.0);
  CHECK(b.cutoff >= 25.0);
  CHECK(b.modes.back().lambda == b.cutoff);
  // No overshoot beyond one eigenvalue: dropping the last mode dips below.
  CHECK(b.modes[b.modes.size() - 2].lambda < 25.0 + 3.0);
  for (std::size_t i = 0; i + 1 < b.modes.size(); ++i)
    CHECK(b.modes[i].lambda < b.modes[i + 1].lambda);
}

TEST_CASE("contract violations carry their tags") {
  CHECK_THROWS_WITH_AS(build_basis(0), doctest::Contains("basis too small"),
                       contract_error);
  CHECK_THROWS_WITH_AS(build_basis_to_cutoff(-1.0),
                       doctest::Contains("basis too small"), contract_error);
  SpectralBasis b = build_basis(3);
  CHECK_THROWS_WITH_AS(mode_lp_norm(b.modes[0], 0.5, norm_hint),
                       doctest::Contains("invalid exponent"), contract_error);
}
