// Serial reference vs OpenMP kernels on the same inputs.
#include <benchmark/benchmark.h>

#include <omp.h>

#include "gframe/fixtures.hpp"
#include "gframe/kernels.hpp"
#include "gframe/perturbation.hpp"

using namespace gframe;

namespace {

CMatrix tall(long rows, long cols) {
  auto rng = trial_rng(7, static_cast<std::uint64_t>(rows * 1000 + cols));
  return random_gaussian(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols), rng);
}

template <CMatrix (*Gram)(const CMatrix&)>
void BM_Gram(benchmark::State& state) {
  const CMatrix rows = tall(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(Gram(rows));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1) * state.range(1) / 2);
}

template <CMatrix (*Cross)(const CMatrix&, const CMatrix&)>
void BM_CrossGram(benchmark::State& state) {
  const CMatrix left = tall(state.range(0), state.range(1));
  const CMatrix right = tall(state.range(0), state.range(1) + 1);
  for (auto _ : state) benchmark::DoNotOptimize(Cross(left, right));
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(1) * state.range(1));
}

void BM_Ascent(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  omp_set_num_threads(static_cast<int>(state.range(1)));
  auto rng = trial_rng(11, n);
  const CMatrix a = random_gaussian(2 * n, n, rng);
  const CMatrix b = random_gaussian(2 * n, n, rng);
  const CMatrix s_lambda = a.adjoint() * a;
  const CMatrix s_gamma = b.adjoint() * b;
  const CMatrix d = (a - b).adjoint() * (a - b);
  const PerturbationParams params{0.2, 0.1, 0.05};
  const AscentOptions options{.starts = 16, .iterations = 100, .seed = 3};
  for (auto _ : state) benchmark::DoNotOptimize(maximize_condition_ratio(d, s_lambda, s_gamma, params, options));
  omp_set_num_threads(omp_get_num_procs());
}

}  // namespace

BENCHMARK(BM_Gram<kernels::serial::gram>)->Args({256, 16})->Args({1024, 32})->Args({4096, 64});
BENCHMARK(BM_Gram<kernels::parallel::gram>)->Args({256, 16})->Args({1024, 32})->Args({4096, 64});
BENCHMARK(BM_CrossGram<kernels::serial::cross_gram>)->Args({256, 16})->Args({1024, 32})->Args({4096, 64});
BENCHMARK(BM_CrossGram<kernels::parallel::cross_gram>)->Args({256, 16})->Args({1024, 32})->Args({4096, 64});
BENCHMARK(BM_Ascent)->Args({8, 1})->Args({8, 4})->Args({32, 1})->Args({32, 4});

BENCHMARK_MAIN();
