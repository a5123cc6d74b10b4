#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dopt/tfmatrix.hpp"
#include "dopt/zoo.hpp"

using namespace dopt;

namespace {
using RF = RationalFunction<Rational>;
using Poly = Polynomial<Rational>;
using CRF = RationalFunction<CRational>;
using CPoly = Polynomial<CRational>;

RF rf(std::vector<Rational> n, std::vector<Rational> d) {
  return RF(Poly(std::move(n)), Poly(std::move(d)));
}
}  // namespace

TEST_CASE("rational-function matrix inverse against hand inverse") {
  RfMatrix<Rational> M(2, 2);
  M(0, 0) = rf({1}, {0, 1});         // 1/z
  M(0, 1) = rf({1}, {1});            // 1
  M(1, 0) = RF::zero();
  M(1, 1) = rf({-1, 1}, {1});        // z-1
  RfMatrix<Rational> inv = M.inverse();
  RfMatrix<Rational> prod = M * inv;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(prod(i, j) == (i == j ? RF::one() : RF::zero()));
  CHECK(inv(0, 0) == rf({0, 1}, {1}));
  CHECK(inv(1, 1) == rf({1}, {-1, 1}));
}

TEST_CASE("singular matrix inversion is a structural refusal") {
  RfMatrix<Rational> M(2, 2);
  M(0, 0) = RF::one();
  M(0, 1) = RF::one();
  M(1, 0) = rf({2}, {1});
  M(1, 1) = rf({2}, {1});
  CHECK_THROWS_AS(M.inverse(), StructuralSingularityError);
}

TEST_CASE("lft closure of the first-order integrator estimator") {
  // G = [[1, -1/(z-1)], [1, -1/(z-1)]] closes to (z-1)/(z-1+lambda).
  PartitionedMatrix<Rational> G = eq2_estimator();
  for (const Rational& lam :
       {Rational(1, 4), Rational(3, 10), Rational(-1, 8)}) {
    RF h = lft_eval(G, lam);
    RF expected = RF(Poly({Rational(-1), Rational(1)}),
                     Poly({lam - 1, Rational(1)}));
    CHECK(h == expected);
  }
  // complex lambda through the Gaussian-rational field
  CRational lam{Rational(6, 25), Rational(9, 50)};  // 0.3 * (4/5 + 3i/5)
  CRF h = lft_eval(G, lam);
  CRF expected(CPoly({CRational(Rational(-1)), CRational(Rational(1))}),
               CPoly({lam - CRational(Rational(1)), CRational(Rational(1))}));
  CHECK(h == expected);
}

TEST_CASE("lft closure at lambda=0 returns the gradient block") {
  CatalogEntry diging = catalog_get("diging");
  RF h0 = lft_eval(*diging.tf, Rational(0));
  CHECK(h0 == rf({Rational(-1, 10)}, {-1, 1}));
}

TEST_CASE("closed DIGing loop matches the hand-derived eigenmode form") {
  // H_lambda = -alpha (z-1) / (z-1+lambda)^2
  CatalogEntry diging = catalog_get("diging");
  for (const Rational& lam : {Rational(1, 5), Rational(-1, 7)}) {
    RF h = lft_eval(*diging.tf, lam);
    Poly d = Poly({lam - 1, Rational(1)});
    RF expected(Poly({Rational(1, 10), Rational(-1, 10)}), d * d);
    CHECK(h == expected);
  }
}

TEST_CASE("f-transform leaves the lft closure invariant") {
  CatalogEntry raw = catalog_get("diging_estimator");
  RfMatrix<Rational> F(2, 2);
  F(0, 0) = rf({0, 1}, {1});                       // z
  F(1, 1) = rf({0, Rational(-1, 10)}, {-1, 1});    // -alpha z/(z-1)
  PartitionedMatrix<Rational> T = f_transform(*raw.tf, F);
  for (const Rational& lam : {Rational(0), Rational(1, 4), Rational(-2, 9)}) {
    CHECK(lft_eval(*raw.tf, lam) == lft_eval(T, lam));
  }
  // and the transform is what maps the raw gauge onto two integrator factors
  CHECK(T == *catalog_get("diging_estimator_transformed").tf);
}

TEST_CASE("symbolic numerator scan counts zeros at z=1") {
  std::vector<CRational> gen;
  for (const auto& lam : generic_lambdas()) gen.push_back(lam);

  auto scan1 = lft_symbolic_numerator_scan(
      convert_partitioned<Rational>(eq2_estimator()), gen);
  for (const auto& [lam, mult] : scan1) CHECK(mult == 1);

  auto scan2 = lft_symbolic_numerator_scan(
      *catalog_get("extra_estimator").tf, gen);
  for (const auto& [lam, mult] : scan2) CHECK(mult == 2);
}

TEST_CASE("properness report separates block requirements") {
  PartitionedMatrix<Rational> G = eq2_estimator();
  PropernessReport rep = properness_report(G);
  CHECK(rep.matrix_proper);
  CHECK(rep.b22_strictly_proper);
  CHECK(rep.b21b12_strictly_proper);

  PartitionedMatrix<Rational> bad = eq2_estimator();
  bad.b22(0, 0) = rf({0, 1}, {-1, 1});  // z/(z-1): proper, not strictly
  CHECK_FALSE(properness_report(bad).b22_strictly_proper);

  PartitionedMatrix<Rational> improper = eq2_estimator();
  improper.b12(0, 0) = rf({0, 0, 1}, {-1, 1});  // z^2/(z-1)
  CHECK_FALSE(properness_report(improper).matrix_proper);
}
