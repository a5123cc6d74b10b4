#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>

#include "dopt/stability.hpp"

using namespace dopt;

namespace {
using RF = RationalFunction<Rational>;
using Poly = Polynomial<Rational>;
}  // namespace

TEST_CASE("roots recovers planted root moduli") {
  // (z - 1/2)(z - 2)(z^2 + 1/4): moduli 1/2, 2, 1/2, 1/2
  Poly p = Poly({Rational(-1, 2), Rational(1)}) *
           Poly({Rational(-2), Rational(1)}) *
           Poly({Rational(1, 4), Rational(0), Rational(1)});
  RootReport rep = roots(p);
  CHECK(rep.roots.size() == 4);
  CHECK(rep.max_modulus == doctest::Approx(2.0).epsilon(1e-9));
  CHECK_FALSE(rep.all_inside_open_disk);

  Poly stable = Poly({Rational(-1, 2), Rational(1)}) *
                Poly({Rational(1, 4), Rational(0), Rational(1)});
  CHECK(roots(stable).all_inside_open_disk);
}

TEST_CASE("is_stable flags unit-circle poles as unstable") {
  RF integrator(Poly::one(), Poly({Rational(-1), Rational(1)}));
  CHECK_FALSE(is_stable(integrator).first);
  RF lag(Poly::one(), Poly({Rational(-1, 2), Rational(1)}));
  CHECK(is_stable(lag).first);
}

TEST_CASE("allpass correction reflects an outside zero") {
  // g = (z-2) / ((z-1/2)(z-1/3)) has one zero at z=2 outside the circle.
  RF g(Poly({Rational(-2), Rational(1)}),
       Poly({Rational(-1, 2), Rational(1)}) *
           Poly({Rational(-1, 3), Rational(1)}));
  AllpassResult<Rational> res = allpass_correction(g);
  // phi*g must be minimum phase: planted zero moves to 1/2.
  RootReport zr = roots(res.corrected.num());
  CHECK(zr.all_inside_open_disk);
  // phi is all-pass: |phi(e^{i theta})| = 1.
  auto phid = convert_rf<double>(res.phi);
  for (double th : {0.3, 1.1, 2.7}) {
    Cplx z = std::polar(1.0, th);
    CHECK(std::abs(phid.eval_cplx(z)) == doctest::Approx(1.0).epsilon(1e-12));
  }
  // the correction preserves magnitude on the circle
  auto gd = convert_rf<double>(g);
  auto cd = convert_rf<double>(res.corrected);
  Cplx z = std::polar(1.0, 0.9);
  CHECK(std::abs(cd.eval_cplx(z)) ==
        doctest::Approx(std::abs(gd.eval_cplx(z))).epsilon(1e-9));
}

TEST_CASE("allpass correction is the identity for minimum-phase input") {
  RF g(Poly({Rational(-1, 4), Rational(1)}),
       Poly({Rational(-1, 2), Rational(1)}));
  AllpassResult<Rational> res = allpass_correction(g);
  CHECK(res.phi == RF::one());
  CHECK(res.corrected == g);
}

TEST_CASE("allpass correction refuses zeros on the unit circle") {
  RF g(Poly({Rational(-1), Rational(1)}),
       Poly({Rational(-1, 2), Rational(1)}) *
           Poly({Rational(-1, 3), Rational(1)}));
  CHECK_THROWS_AS(allpass_correction(g), RefusalError);
}

TEST_CASE("lambda grid lies exactly on rational circles") {
  const Rational radius(3, 10);
  auto grid = lambda_grid(radius, false);
  CHECK(!grid.empty());
  bool has_real_radius = false;
  for (const CRational& lam : grid) {
    Rational mod2 = lam.re * lam.re + lam.im * lam.im;
    // each sample sits exactly on one of the four nested circles
    bool on_circle = false;
    for (int k = 1; k <= 4; ++k) {
      Rational r = radius * Rational(k, 4);
      if (mod2 == r * r) on_circle = true;
    }
    CHECK(on_circle);
    CHECK(lam.re >= 0);  // right-half disk by default
    if (lam.im == 0 && lam.re == radius) has_real_radius = true;
  }
  CHECK(has_real_radius);

  auto full = lambda_grid(radius, true);
  CHECK(full.size() > grid.size());
  bool has_negative = false;
  for (const CRational& lam : full)
    if (lam.re < 0) has_negative = true;
  CHECK(has_negative);
}

TEST_CASE("disk grid stability localizes the worst sample") {
  // family lambda -> 1/(z - (1/2 + lambda)): pole exits the disk as
  // lambda grows along the real axis.
  auto family = [](const CRational& lam) {
    using P = Polynomial<CRational>;
    return RationalFunction<CRational>(
        P::one(), P({CRational(Rational(-1, 2)) - lam, CRational(Rational(1))}));
  };
  auto grid = lambda_grid(Rational(3, 10), false);
  GridStabilityReport rep = disk_grid_stability(family, grid);
  CHECK(rep.stable);
  CHECK(rep.min_margin > 0.0);
  // worst margin at the largest real lambda
  CHECK(rep.worst_lambda.real() == doctest::Approx(0.3).epsilon(1e-12));

  auto bad = [](const CRational& lam) {
    using P = Polynomial<CRational>;
    return RationalFunction<CRational>(
        P::one(), P({CRational(Rational(-9, 10)) - lam, CRational(Rational(1))}));
  };
  CHECK_FALSE(disk_grid_stability(bad, grid).stable);
}

TEST_CASE("rational reconstruction of grid-aligned floats") {
  CHECK(detail::reconstruct_rational(0.5).value() == Rational(1, 2));
  CHECK(detail::reconstruct_rational(to_double(Rational(12, 13))).value() ==
        Rational(12, 13));
  CHECK(detail::reconstruct_rational(-0.3).value() == Rational(-3, 10));
}
