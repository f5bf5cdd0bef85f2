/*
   Copyright 2026 The equilab authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include <benchmark/benchmark.h>

#include <random>

#include "equilab/discrepancy.hpp"
#include "equilab/rng.hpp"

using namespace equilab;

namespace {

discrepancy::FractionalPointSet random_set(int n, std::size_t N, u64 P, u64 seed) {
    std::mt19937_64 gen(seed);
    std::vector<u64> coords(N * static_cast<std::size_t>(n));
    for (auto& c : coords) c = rng_below(gen, P);
    return discrepancy::FractionalPointSet::from_rows(n, P, std::move(coords));
}

void ExactDiscrepancy1D(benchmark::State& state) {
    auto pts = random_set(1, static_cast<std::size_t>(state.range(0)), 2039, 3);
    for (auto _ : state) {
        auto ex = discrepancy::extreme_discrepancy_exact(pts);
        benchmark::DoNotOptimize(ex.value);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(ExactDiscrepancy1D)->Arg(500)->Arg(1000)->Arg(2000)->Arg(5000)->Complexity();

void ExactDiscrepancy2D(benchmark::State& state) {
    auto pts = random_set(2, static_cast<std::size_t>(state.range(0)), 2039, 4);
    for (auto _ : state) {
        auto ex = discrepancy::extreme_discrepancy_exact(pts);
        benchmark::DoNotOptimize(ex.value);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(ExactDiscrepancy2D)->Arg(100)->Arg(200)->Arg(400)->Complexity();

void SampledDiscrepancy(benchmark::State& state) {
    auto pts = random_set(1, 100'000, 104723, 5);
    u64 trials = static_cast<u64>(state.range(0));
    for (auto _ : state) {
        double d = discrepancy::sampled_discrepancy_lower_bound(pts, trials, 7);
        benchmark::DoNotOptimize(d);
    }
}
BENCHMARK(SampledDiscrepancy)->Arg(1000)->Arg(10000);

}  // namespace
