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

#include "equilab/expsum.hpp"

using namespace equilab;

namespace {

const auto kSystem = poly::PolySystem::value_system(2, {"X1*X2"});

void ExpSumHistogram(benchmark::State& state) {
    PrimeModulus p(401);
    u64 w = static_cast<u64>(state.range(0));
    std::vector<i64> corner{0, 0};
    std::vector<i64> a{1};
    for (auto _ : state) {
        auto s = expsum::exp_sum_cube(kSystem, a, p, corner, w, expsum::Evaluator::Histogram);
        benchmark::DoNotOptimize(s.value);
    }
    state.SetComplexityN(static_cast<i64>((w + 1) * (w + 1)));
}
BENCHMARK(ExpSumHistogram)->Arg(50)->Arg(100)->Arg(200)->Arg(400)->Complexity();

void ExpSumNaive(benchmark::State& state) {
    PrimeModulus p(401);
    u64 w = static_cast<u64>(state.range(0));
    std::vector<i64> corner{0, 0};
    std::vector<i64> a{1};
    for (auto _ : state) {
        auto s = expsum::exp_sum_cube(kSystem, a, p, corner, w, expsum::Evaluator::Naive);
        benchmark::DoNotOptimize(s.value);
    }
    state.SetComplexityN(static_cast<i64>((w + 1) * (w + 1)));
}
BENCHMARK(ExpSumNaive)->Arg(50)->Arg(100)->Arg(200)->Arg(400)->Complexity();

void MaxScan(benchmark::State& state) {
    PrimeModulus p(401);
    auto full = region::Region::full_torus(2);
    auto table = expsum::ValueTable::over_region(kSystem, p, full);
    u64 L = static_cast<u64>(state.range(0));
    for (auto _ : state) {
        auto scan = expsum::max_exp_sum(table, L);
        benchmark::DoNotOptimize(scan.s_star);
    }
}
BENCHMARK(MaxScan)->Arg(10)->Arg(50)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
