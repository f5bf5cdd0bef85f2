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

#include "equilab/dyadic.hpp"

using namespace equilab;

namespace {

void BuildCover(benchmark::State& state) {
    auto ball = region::Region::ball({parse_unit_decimal("0.5"), parse_unit_decimal("0.5")},
                                     parse_unit_decimal("0.3"));
    auto anchor = dyadic::draw_anchor(2, 1, dyadic::forbidden_denominators(12, {}));
    u64 depth = static_cast<u64>(state.range(0));
    for (auto _ : state) {
        auto cover = dyadic::build_cover(ball, depth, anchor);
        benchmark::DoNotOptimize(cover.total_cubes());
    }
    state.SetComplexityN(i64{1} << (2 * state.range(0)));
}
BENCHMARK(BuildCover)->DenseRange(4, 10)->Complexity();

void LatticePoints(benchmark::State& state) {
    auto ball = region::Region::ball({parse_unit_decimal("0.5"), parse_unit_decimal("0.5")},
                                     parse_unit_decimal("0.3"));
    PrimeModulus p(static_cast<u64>(state.range(0)));
    for (auto _ : state) {
        auto pts = ball.lattice_points(p);
        benchmark::DoNotOptimize(pts.size());
    }
    state.SetComplexityN(state.range(0) * state.range(0));
}
BENCHMARK(LatticePoints)->Arg(101)->Arg(211)->Arg(401)->Arg(809)->Complexity();

}  // namespace
