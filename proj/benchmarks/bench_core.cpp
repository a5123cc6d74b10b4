#include <benchmark/benchmark.h>

#include "dopt/netsim.hpp"
#include "dopt/synthesis.hpp"
#include "dopt/zoo.hpp"

using namespace dopt;

static void BM_LftEvalRational(benchmark::State& state) {
  PartitionedMatrix<Rational> H = *catalog_get("diging").tf;
  Rational lam(1, 4);
  for (auto _ : state) {
    auto h = lft_eval(H, lam);
    benchmark::DoNotOptimize(h);
  }
}
BENCHMARK(BM_LftEvalRational);

static void BM_LftEvalComplexRational(benchmark::State& state) {
  PartitionedMatrix<Rational> H = *catalog_get("svl").tf;
  CRational lam{Rational(6, 25), Rational(9, 50)};
  for (auto _ : state) {
    auto h = lft_eval(H, lam);
    benchmark::DoNotOptimize(h);
  }
}
BENCHMARK(BM_LftEvalComplexRational);

static void BM_Decompose(benchmark::State& state) {
  PartitionedMatrix<Rational> H = *catalog_get("diging").tf;
  for (auto _ : state) {
    auto d = decompose(H);
    benchmark::DoNotOptimize(d);
  }
}
BENCHMARK(BM_Decompose);

static void BM_AlgorithmCertificate(benchmark::State& state) {
  PartitionedMatrix<Rational> H = *catalog_get("extra").tf;
  for (auto _ : state) {
    auto c = check_distributed_algorithm(H);
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_AlgorithmCertificate);

static void BM_SimulationStep(benchmark::State& state) {
  auto H = convert_partitioned<double>(*catalog_get("diging").tf);
  Network net = build_network(Topology::Ring, static_cast<int>(state.range(0)),
                              0.5);
  std::vector<double> ystar(net.n);
  for (int i = 0; i < net.n; ++i) ystar[i] = i + 1.0;
  Objective obj = Objective::quadratic(0.01, ystar);
  const int T = 1000;
  for (auto _ : state) {
    Trajectory tr = simulate_distributed(H, net, obj, T);
    benchmark::DoNotOptimize(tr);
  }
  state.SetItemsProcessed(state.iterations() * T * net.n);
}
BENCHMARK(BM_SimulationStep)->Arg(5)->Arg(25)->Arg(100);

BENCHMARK_MAIN();
