#include <benchmark/benchmark.h>

#include <random>

#include "projsys/kernels.hpp"

namespace {

using namespace projsys;

const Example3Grid kGrid{{0.01, 1.0, 12}, {0.01, 1.0, 12}, {0.01, 1.0, 12}};

std::vector<ConjugacyCase> make_cases(std::size_t count) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  std::vector<ConjugacyCase> cases;
  for (std::size_t c = 0; c < count; ++c) {
    const std::size_t k = 2 + c % 4;
    SystemSpec s{k, Vector(k, 0.0), Matrix(k, k), Vector(k, 0.0), Matrix(k, k)};
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t i = 0; i < k; ++i) {
        s.beta(r, i) = u(rng);
        s.B(r, i) = u(rng);
      }
    State x0(k);
    for (auto& v : x0) v = u(rng);
    cases.push_back({std::move(s), std::move(x0), k});
  }
  return cases;
}

void BM_SweepSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sweep_example3_serial(kGrid));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(kGrid.size()));
}

void BM_SweepParallel(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(sweep_example3(kGrid, static_cast<int>(state.range(0))));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(kGrid.size()));
}

void BM_ConjugacySerial(benchmark::State& state) {
  const auto cases = make_cases(1000);
  for (auto _ : state) benchmark::DoNotOptimize(check_conjugacy_batch_serial(cases, 200, 1e-9));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(cases.size()));
}

void BM_ConjugacyParallel(benchmark::State& state) {
  const auto cases = make_cases(1000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        check_conjugacy_batch(cases, 200, 1e-9, static_cast<int>(state.range(0))));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(cases.size()));
}

}  // namespace

BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConjugacySerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ConjugacyParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
