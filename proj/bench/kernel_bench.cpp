/*
 * Copyright 2026 The localdrift Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Serial vs OpenMP kernels at window-sized and larger inputs.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "localdrift/kernels.hpp"

namespace {

using localdrift::kernels::Rows;

std::vector<double> random_rows(std::size_t n, std::size_t dim) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(n * dim);
  for (auto& x : v) x = u(rng);
  return v;
}

template <auto Kernel>
void BM_Pair(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::size_t dim = 9;
  const auto data = random_rows(n, dim);
  const Rows rows{data, dim};
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(rows));
  state.SetComplexityN(state.range(0));
}

template <auto Kernel>
void BM_MinSim(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::size_t dim = 9;
  const auto data = random_rows(n, dim);
  const std::vector<double> point(dim, 0.5);
  const Rows rows{data, dim};
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(rows, point));
}

template <auto Kernel>
void BM_Attributions(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::size_t dim = 9;
  const auto data = random_rows(n, dim);
  const std::vector<double> w(dim, 0.3), ref(dim, 0.5);
  std::vector<double> out(n * dim);
  for (auto _ : state) {
    Kernel({w, ref}, Rows{data, dim}, out);
    benchmark::DoNotOptimize(out.data());
  }
}

namespace k = localdrift::kernels;

BENCHMARK(BM_Pair<k::serial::most_dissimilar_pair>)->Arg(200)->Arg(1000)->Arg(4000);
BENCHMARK(BM_Pair<k::parallel::most_dissimilar_pair>)->Arg(200)->Arg(1000)->Arg(4000);
BENCHMARK(BM_MinSim<k::serial::min_similarity>)->Arg(200)->Arg(100000);
BENCHMARK(BM_MinSim<k::parallel::min_similarity>)->Arg(200)->Arg(100000);
BENCHMARK(BM_Attributions<k::serial::linear_attributions>)->Arg(100)->Arg(100000);
BENCHMARK(BM_Attributions<k::parallel::linear_attributions>)->Arg(100)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
