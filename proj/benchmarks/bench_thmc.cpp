#include <benchmark/benchmark.h>

#include "thmc/basis.hpp"
#include "thmc/configuration.hpp"
#include "thmc/fiber.hpp"
#include "thmc/inference.hpp"
#include "thmc/io.hpp"
#include "thmc/rng.hpp"
#include "thmc/suff_stat.hpp"

namespace {

thmc::PathTable marijuana() {
  return thmc::parse_paths_file(
      std::string(THMC_BENCH_DATA_DIR) + "/marijuana_use.csv", true);
}

void BM_ConfigurationBuild(benchmark::State& state) {
  const int S = static_cast<int>(state.range(0));
  const int T = static_cast<int>(state.range(1));
  for (auto _ : state)
    benchmark::DoNotOptimize(thmc::Configuration::build(S, T));
}
BENCHMARK(BM_ConfigurationBuild)->Args({2, 6})->Args({3, 5})->Args({4, 3});

void BM_DesignRank(benchmark::State& state) {
  const thmc::Configuration config =
      thmc::Configuration::build(static_cast<int>(state.range(0)),
                                 static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(thmc::design_rank(config));
}
BENCHMARK(BM_DesignRank)->Args({3, 3})->Args({3, 5});

void BM_RandomMove(benchmark::State& state) {
  const int S = static_cast<int>(state.range(0));
  const int T = static_cast<int>(state.range(1));
  const thmc::BasisDescriptor basis = thmc::markov_basis(S, T);
  const thmc::PathTable table(S, T);
  thmc::Rng rng(1);
  for (auto _ : state)
    benchmark::DoNotOptimize(thmc::random_move(table, basis, rng));
}
BENCHMARK(BM_RandomMove)->Args({2, 5})->Args({3, 3})->Args({4, 3});

void BM_FiberEnumeration(benchmark::State& state) {
  // the fiber of a 4-path table on (2, 6)
  thmc::PathTable t(2, 6);
  thmc::Rng rng(5);
  for (int k = 0; k < 4; ++k) t.add(rng.below(thmc::num_paths(2, 6)), 1);
  const thmc::SuffStat b = thmc::suff_stat(t);
  for (auto _ : state)
    benchmark::DoNotOptimize(thmc::enumerate_fiber(b, 2, 6));
}
BENCHMARK(BM_FiberEnumeration);

void BM_McmcSteps(benchmark::State& state) {
  const thmc::PathTable data = marijuana();
  const thmc::BasisDescriptor basis = thmc::markov_basis(3, 3);
  const thmc::FitResult fit = thmc::fit_thmc_mle(data);
  const std::int64_t steps = state.range(0);
  for (auto _ : state) {
    const thmc::McmcResult out = thmc::run_mcmc(
        data, basis, 0, steps, 7, [&](const thmc::PathTable& t) {
          return thmc::chi_square_nested(t, fit);
        });
    benchmark::DoNotOptimize(out.samples.data());
  }
  state.SetItemsProcessed(state.iterations() * steps);
}
BENCHMARK(BM_McmcSteps)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_ThmcFit(benchmark::State& state) {
  const thmc::PathTable data = marijuana();
  for (auto _ : state) benchmark::DoNotOptimize(thmc::fit_thmc_mle(data));
}
BENCHMARK(BM_ThmcFit)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
