#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dopt/ratpoly.hpp"

using namespace dopt;

namespace {

using RF = RationalFunction<Rational>;
using Poly = Polynomial<Rational>;

Rational rnd_rational(std::mt19937& gen) {
  std::uniform_int_distribution<int> num(-20, 20);
  std::uniform_int_distribution<int> den(1, 9);
  return Rational(num(gen), den(gen));
}

RF rnd_rf(std::mt19937& gen, int nd, int dd) {
  std::vector<Rational> n(nd + 1), d(dd + 1);
  for (auto& c : n) c = rnd_rational(gen);
  for (auto& c : d) c = rnd_rational(gen);
  d.back() = Rational(1) + d.back() * d.back();  // nonzero leading coeff
  return RF(Poly(n), Poly(d));
}

}  // namespace

TEST_CASE("polynomial arithmetic agrees with pointwise evaluation") {
  std::mt19937 gen(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Rational> ac(4), bc(3);
    for (auto& c : ac) c = rnd_rational(gen);
    for (auto& c : bc) c = rnd_rational(gen);
    Poly a(ac), b(bc);
    for (int k = -3; k <= 3; ++k) {
      Rational x(k, 2);
      CHECK((a + b).eval<Rational>(x) ==
            a.eval<Rational>(x) + b.eval<Rational>(x));
      CHECK((a * b).eval<Rational>(x) ==
            a.eval<Rational>(x) * b.eval<Rational>(x));
    }
  }
}

TEST_CASE("polynomial division invariant a = q*b + r") {
  std::mt19937 gen(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Rational> ac(6), bc(3);
    for (auto& c : ac) c = rnd_rational(gen);
    for (auto& c : bc) c = rnd_rational(gen);
    bc.back() = Rational(1) + bc.back() * bc.back();
    Poly a(ac), b(bc);
    auto [q, r] = divmod(a, b);
    CHECK(q * b + r == a);
    CHECK(r.degree() < b.degree());
  }
}

TEST_CASE("rational function field operations agree pointwise") {
  std::mt19937 gen(23);
  std::vector<Rational> samples{Rational(2), Rational(3, 2), Rational(-5, 3),
                                Rational(7), Rational(-4)};
  for (int trial = 0; trial < 30; ++trial) {
    RF a = rnd_rf(gen, 3, 2), b = rnd_rf(gen, 2, 3);
    for (const Rational& x : samples) {
      if (a.den().eval<Rational>(x) == 0 || b.den().eval<Rational>(x) == 0)
        continue;
      Rational av = a.eval<Rational>(x), bv = b.eval<Rational>(x);
      CHECK((a + b).eval<Rational>(x) == av + bv);
      CHECK((a - b).eval<Rational>(x) == av - bv);
      CHECK((a * b).eval<Rational>(x) == av * bv);
      if (!b.is_zero() && bv != 0) CHECK((a / b).eval<Rational>(x) == av / bv);
    }
  }
}

TEST_CASE("canonicalization is idempotent and cancels common factors") {
  Poly zm1({Rational(-1), Rational(1)});
  Poly n({Rational(2), Rational(3)});
  Poly d({Rational(1), Rational(0), Rational(5)});
  RF reduced(n, d);
  RF padded(n * zm1 * zm1, d * zm1 * zm1);
  CHECK(padded == reduced);
  // monic denominator normalization
  CHECK(reduced.den().leading() == Rational(1));
  RF again(reduced.num(), reduced.den());
  CHECK(again == reduced);
}

TEST_CASE("z_power and relative degree") {
  RF z2 = RF::z_power(2);
  CHECK(z2.num() == Poly::monomial(2));
  CHECK(z2.relative_degree() == -2);
  CHECK_FALSE(z2.is_proper());
  RF zi = RF::z_power(-3);
  CHECK(zi.relative_degree() == 3);
  CHECK(zi.is_strictly_proper());
  CHECK(z2 * zi == RF::z_power(-1));
}

TEST_CASE("series expansion matches convolution of factors") {
  std::mt19937 gen(41);
  const int count = 12;
  for (int trial = 0; trial < 20; ++trial) {
    RF a = rnd_rf(gen, 1, 3), b = rnd_rf(gen, 2, 4);
    if (!a.is_proper() || !b.is_proper()) continue;
    auto sa = a.series_coeffs(count);
    auto sb = b.series_coeffs(count);
    auto sp = (a * b).series_coeffs(count);
    for (int k = 0; k < count; ++k) {
      Rational conv(0);
      for (int j = 0; j <= k; ++j) conv += sa[j] * sb[k - j];
      CHECK(sp[k] == conv);
    }
  }
}

TEST_CASE("series of an improper function is refused") {
  CHECK_THROWS_AS(RF::z_power(1).series_coeffs(4), ImproperError);
}

TEST_CASE("multiplicity at z=1 shifts under (z-1) powers") {
  RF g(Poly({Rational(3), Rational(2)}), Poly({Rational(1), Rational(4)}));
  RF zm1(Poly({Rational(-1), Rational(1)}), Poly::one());
  CHECK(g.pole_zero_multiplicity_at_one() == 0);
  RF h = g;
  for (int k = 1; k <= 3; ++k) {
    h = h * zm1;
    CHECK(h.pole_zero_multiplicity_at_one() == k);
  }
  RF p = g / (zm1 * zm1);
  CHECK(p.pole_zero_multiplicity_at_one() == -2);
}

TEST_CASE("floating mode multiplicity uses tolerance gating") {
  using RFD = RationalFunction<double>;
  using PolyD = Polynomial<double>;
  RFD g(PolyD({-1.0 + 1e-12, 1.0}), PolyD({2.0, 1.0}));
  CHECK(g.pole_zero_multiplicity_at_one() == 1);
}

TEST_CASE("degree cap rejects runaway constructions") {
  std::vector<Rational> c(70, Rational(1));
  CHECK_THROWS_AS(Poly{c}, Error);
}

TEST_CASE("rational/floating conversion preserves evaluation") {
  std::mt19937 gen(59);
  for (int trial = 0; trial < 10; ++trial) {
    RF a = rnd_rf(gen, 3, 3);
    auto d = convert_rf<double>(a);
    for (double x : {2.0, -1.5, 0.25}) {
      if (std::abs(to_double(a.den().eval<Rational>(Rational(x * 4) / 4))) <
          1e-9)
        continue;
      CHECK(d.eval<double>(x) ==
            doctest::Approx(to_double(a.eval<Rational>(
                Rational(static_cast<int>(x * 4)) / 4))).epsilon(1e-9));
    }
  }
}
