#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "dopt/certify.hpp"
#include "dopt/zoo.hpp"

using namespace dopt;

namespace {
using RF = RationalFunction<Rational>;
using Poly = Polynomial<Rational>;

RF rf(std::vector<Rational> n, std::vector<Rational> d) {
  return RF(Poly(std::move(n)), Poly(std::move(d)));
}

bool condition_failed(const Certificate& c, const std::string& id) {
  for (const auto& cond : c.conditions)
    if (cond.id == id) return !cond.passed;
  return false;
}
}  // namespace

TEST_CASE("gradient descent certifies as an optimization method") {
  Certificate c = check_optimization_method(*catalog_get("gradient").opt);
  CHECK(c.verdict == Verdict::Pass);
  CHECK(c.eps_grid.size() == 6);
}

TEST_CASE("negative stepsize fails the small-gain condition") {
  // +alpha/(z-1): closed-loop pole 1 + eps*alpha leaves the disk.
  RF wrong = rf({Rational(1, 10)}, {-1, 1});
  Certificate c = check_optimization_method(wrong);
  CHECK(c.verdict == Verdict::Fail);
  CHECK(condition_failed(c, "L1.i"));
}

TEST_CASE("a stable lag without an integrator fails the pole condition") {
  RF lag = rf({Rational(-1, 10)}, {Rational(-1, 2), 1});
  Certificate c = check_optimization_method(lag);
  CHECK(c.verdict == Verdict::Fail);
  CHECK(condition_failed(c, "L1.ii"));
}

TEST_CASE("an improper candidate fails properness") {
  RF improper = rf({0, 0, Rational(-1, 10)}, {-1, 1});
  Certificate c = check_optimization_method(improper);
  CHECK(condition_failed(c, "L1.iii"));
}

TEST_CASE("first-order estimator certifies at order 1, fails at order 2") {
  PartitionedMatrix<Rational> G = eq2_estimator();
  CHECK(check_consensus_estimator(G, 1).verdict == Verdict::Pass);
  Certificate c2 = check_consensus_estimator(G, 2);
  CHECK(c2.verdict == Verdict::Fail);
  CHECK(condition_failed(c2, "L2.iii"));
}

TEST_CASE("estimator with G0(1) != 1 fails normalization") {
  PartitionedMatrix<Rational> G = eq2_estimator();
  G.b11 = RF::constant(Rational(2));
  Certificate c = check_consensus_estimator(G, 1);
  CHECK(condition_failed(c, "L2.ii"));
}

TEST_CASE("estimator with non-strictly-proper G22 fails causality") {
  PartitionedMatrix<Rational> G = eq2_estimator();
  G.b22(0, 0) = rf({0, -1}, {-1, 1});
  Certificate c = check_consensus_estimator(G, 1);
  CHECK(condition_failed(c, "L2.iv"));
}

TEST_CASE("estimator destabilized on the disk fails grid stability") {
  // b22 = -5/(z-1) pushes the closed pole out for moderate lambda.
  PartitionedMatrix<Rational> G = eq2_estimator();
  G.b12(0, 0) = rf({-5}, {-1, 1});
  G.b22(0, 0) = rf({-5}, {-1, 1});
  Certificate c = check_consensus_estimator(G, 1);
  CHECK(condition_failed(c, "L2.i"));
}

TEST_CASE("distributed algorithm certificate passes on DIGing") {
  Certificate c = check_distributed_algorithm(*catalog_get("diging").tf);
  CHECK(c.verdict == Verdict::Pass);
  CHECK(!c.lambda_grid.empty());
}

TEST_CASE("H11 = 0 fails the distributed algorithm pole condition") {
  PartitionedMatrix<Rational> H = *catalog_get("diging").tf;
  H.b11 = RF::zero();
  Certificate c = check_distributed_algorithm(H);
  CHECK(c.verdict == Verdict::Fail);
  CHECK(condition_failed(c, "L3.ii"));
}

TEST_CASE("certificates record the grids they quantified over") {
  Certificate c = check_distributed_algorithm(*catalog_get("extra").tf);
  CHECK(c.eps_grid.size() == default_eps_grid().size());
  CHECK(c.lambda_grid.size() == lambda_grid(default_lambda_radius()).size());
  CHECK(c.lambda_radius == doctest::Approx(0.3));
}

TEST_CASE("full-disk grid strictly extends the default grid") {
  auto def = lambda_grid(default_lambda_radius());
  auto full = lambda_grid(default_lambda_radius(), true);
  CHECK(full.size() > def.size());
  for (const auto& lam : def)
    CHECK(std::count(full.begin(), full.end(), lam) == 1);

  // The consensus pole at z=1 moves to 1-lambda, which leaves the unit
  // disk whenever Re(lambda) <= 0: left-half samples must defeat the
  // certificate even though the right-half default passes.
  Certificate c = check_distributed_algorithm(
      *catalog_get("diging").tf, default_eps_grid(), default_lambda_radius(),
      true);
  CHECK(c.verdict == Verdict::Fail);
  CHECK(c.lambda_grid.size() == full.size());
  CHECK(check_distributed_algorithm(*catalog_get("diging").tf).verdict ==
        Verdict::Pass);
}
