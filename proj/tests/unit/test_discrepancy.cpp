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

#include <doctest.h>

#include <algorithm>
#include <bit>
#include <random>
#include <stdexcept>

#include "../support/disc_oracle.hpp"
#include "equilab/discrepancy.hpp"
#include "equilab/errors.hpp"
#include "equilab/rng.hpp"

using namespace equilab;
using namespace equilab::discrepancy;

namespace {

Fixed64 fx(const char* s) { return parse_unit_decimal(s); }

FractionalPointSet random_pts(std::mt19937_64& gen, int n, std::size_t N, u64 P) {
    std::vector<u64> coords(N * static_cast<std::size_t>(n));
    for (auto& c : coords) c = rng_below(gen, P);
    return FractionalPointSet::from_rows(n, P, std::move(coords));
}

}  // namespace

TEST_CASE("empty point sets have discrepancy one") {
    FractionalPointSet pts;
    pts.n = 2;
    pts.denominator = 7;
    auto ex = extreme_discrepancy_exact(pts);
    CHECK(ex.value == 1.0);
    CHECK(ex.num == ex.den);
    CHECK(sampled_discrepancy_lower_bound(pts, 10, 1) == 1.0);
}

TEST_CASE("a single point has discrepancy one") {
    auto pts = FractionalPointSet::from_rows(1, 97, {41});
    auto ex = extreme_discrepancy_exact(pts);
    CHECK(ex.value == 1.0);
    CHECK(ex.num == ex.den);
    auto pts2 = FractionalPointSet::from_rows(2, 11, {5, 7});
    CHECK(extreme_discrepancy_exact(pts2).value == 1.0);
}

TEST_CASE("equally spaced points give exactly 1/N") {
    for (u64 N : {1ull, 2ull, 3ull, 8ull, 17ull, 33ull, 64ull}) {
        std::vector<u64> coords(N);
        for (u64 i = 0; i < N; ++i) coords[i] = i;
        auto pts = FractionalPointSet::from_rows(1, N, std::move(coords));
        auto ex = extreme_discrepancy_exact(pts);
        CHECK(ex.num * N == ex.den);  // D == 1/N as rationals
    }
}

TEST_CASE("exact algorithm equals the exhaustive oracle (1d and 2d)") {
    std::mt19937_64 gen(2026);
    for (int rep = 0; rep < 30; ++rep) {
        int n = 1 + static_cast<int>(rng_below(gen, 2));
        std::size_t N = 1 + rng_below(gen, 30);
        u64 P = 0;
        switch (rng_below(gen, 3)) {
            case 0: P = 53; break;
            case 1: P = 64; break;
            default: P = 97; break;
        }
        auto pts = random_pts(gen, n, N, P);
        auto fast = extreme_discrepancy_exact(pts);
        auto oracle = testsupport::oracle_extreme_discrepancy(pts);
        CHECK(fast.den == oracle.den);
        CHECK(fast.num == oracle.num);
    }
}

TEST_CASE("exact algorithm equals the exhaustive oracle (3d)") {
    std::mt19937_64 gen(7);
    for (int rep = 0; rep < 2; ++rep) {
        auto pts = random_pts(gen, 3, 8, 31);
        auto fast = extreme_discrepancy_exact(pts);
        auto oracle = testsupport::oracle_extreme_discrepancy(pts);
        CHECK(fast.den == oracle.den);
        CHECK(fast.num == oracle.num);
    }
}

TEST_CASE("the witness box attains the reported value") {
    std::mt19937_64 gen(15);
    auto pts = random_pts(gen, 2, 25, 53);
    auto ex = extreme_discrepancy_exact(pts);
    // count points in [lo, hi] closed (the sup is a limit of boxes shrinking
    // to this critical box from outside/inside)
    u64 cnt_closed = 0, cnt_open = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        bool in_closed = true, in_open = true;
        for (int j = 0; j < 2; ++j) {
            u64 v = pts.coords[i * 2 + static_cast<std::size_t>(j)];
            in_closed = in_closed && v >= ex.witness.lo[static_cast<std::size_t>(j)] &&
                        v <= ex.witness.hi[static_cast<std::size_t>(j)];
            in_open = in_open && v > ex.witness.lo[static_cast<std::size_t>(j)] &&
                      v < ex.witness.hi[static_cast<std::size_t>(j)];
        }
        cnt_closed += in_closed;
        cnt_open += in_open;
    }
    double lam = ex.witness.lambda();
    double v1 = std::fabs(static_cast<double>(cnt_closed) / static_cast<double>(pts.size()) - lam);
    double v2 = std::fabs(static_cast<double>(cnt_open) / static_cast<double>(pts.size()) - lam);
    CHECK(std::max(v1, v2) == doctest::Approx(ex.value).epsilon(1e-12));
}

TEST_CASE("permuting the points leaves the exact value unchanged") {
    std::mt19937_64 gen(4);
    auto pts = random_pts(gen, 2, 40, 101);
    auto base = extreme_discrepancy_exact(pts);
    for (int rep = 0; rep < 3; ++rep) {
        std::vector<std::size_t> perm(pts.size());
        for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), gen);
        std::vector<u64> coords;
        for (std::size_t i : perm) {
            coords.push_back(pts.coords[i * 2]);
            coords.push_back(pts.coords[i * 2 + 1]);
        }
        auto shuffled = FractionalPointSet::from_rows(2, 101, std::move(coords));
        auto ex = extreme_discrepancy_exact(shuffled);
        CHECK(ex.num == base.num);
        CHECK(ex.den == base.den);
    }
}

TEST_CASE("exact values never exceed one") {
    std::mt19937_64 gen(8);
    for (int rep = 0; rep < 10; ++rep) {
        auto pts = random_pts(gen, 2, 30 + rng_below(gen, 50), 211);
        auto ex = extreme_discrepancy_exact(pts);
        CHECK(ex.num <= ex.den);
        CHECK(ex.value >= 0.0);
    }
}

TEST_CASE("sampled bound is sandwiched between zero and the exact value") {
    std::mt19937_64 gen(10);
    for (int rep = 0; rep < 40; ++rep) {
        int n = 1 + static_cast<int>(rng_below(gen, 2));
        std::size_t N = 1 + rng_below(gen, 150);
        auto pts = random_pts(gen, n, N, 127);
        auto ex = extreme_discrepancy_exact(pts);
        double sampled = sampled_discrepancy_lower_bound(pts, 400, 1000 + rep);
        CHECK(sampled >= 0.0);
        CHECK(sampled <= ex.value);
    }
}

TEST_CASE("sampled bound finds the equally-spaced optimum within 20%") {
    for (u64 N : {8ull, 16ull, 33ull, 64ull}) {
        std::vector<u64> coords(N);
        for (u64 i = 0; i < N; ++i) coords[i] = i;
        auto pts = FractionalPointSet::from_rows(1, N, std::move(coords));
        double sampled = sampled_discrepancy_lower_bound(pts, 10'000, 99);
        CHECK(sampled >= 0.8 / static_cast<double>(N));
        CHECK(sampled <= 1.0 / static_cast<double>(N) + 1e-15);
    }
}

TEST_CASE("ks bound shape") {
    CHECK(ks_bound(0.0, 10, 100, 2) == doctest::Approx(0.1));
    double base = ks_bound(5.0, 8, 50, 2);
    double twice = ks_bound(10.0, 8, 50, 2);
    double expect_delta = std::pow(std::log(8.0), 2) / 50.0 * 5.0;
    CHECK(twice - base == doctest::Approx(expect_delta).epsilon(1e-12));
    CHECK(ks_bound(7.0, 8, 50, 2) > ks_bound(5.0, 8, 50, 2));  // monotone in S
    CHECK_THROWS_AS((void)ks_bound(1.0, 1, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)ks_bound(1.0, 4, 0, 1), std::invalid_argument);
}

TEST_CASE("exact guards trip and the caller can fall back") {
    std::mt19937_64 gen(3);
    auto big = random_pts(gen, 2, 5001, 104729 % 65536 + 2);  // any denominator
    CHECK_THROWS_AS((void)extreme_discrepancy_exact(big), guard_error);
    auto big3 = random_pts(gen, 3, 301, 311);
    CHECK_THROWS_AS((void)extreme_discrepancy_exact(big3), guard_error);
    auto n4 = random_pts(gen, 4, 10, 311);
    CHECK_THROWS_AS((void)extreme_discrepancy_exact(n4), guard_error);
}

TEST_CASE("full pipeline on the hyperbola values at p=53") {
    PrimeModulus p(53);
    auto sys = poly::PolySystem::value_system(2, {"X1*X2"});
    auto full = region::Region::full_torus(2);
    DiscOptions opts;
    opts.seed = 1;
    auto rep = discrepancy_of_system(sys, p, full, opts);

    CHECK(rep.N == 2809);
    REQUIRE(rep.exact_D.has_value());
    // value histogram: residue 0 appears 105 times, every other 52; the
    // supremum is the zero-width box at 0 with excess 105/2809
    CHECK(*rep.exact_D == doctest::Approx(105.0 / 2809.0).epsilon(1e-12));
    CHECK(rep.s_star == doctest::Approx(53.0).epsilon(1e-9));
    CHECK(rep.L_used == 26);
    CHECK(rep.ks > 0);
    CHECK(rep.thm1_ratio > 0);
    CHECK(rep.thm2_ratio > 0);
    CHECK(rep.thm2_ratio <= rep.thm1_ratio + 1e-15);  // mu = 1: equal
}

TEST_CASE("theorem ratios are ordered when the region shrinks") {
    PrimeModulus p(53);
    auto sys = poly::PolySystem::value_system(2, {"X1*X2"});
    DiscOptions opts;
    opts.seed = 2;
    // mu = 0.2 and mu = 0.05 balls
    auto big = region::Region::ball({fx("0.5"), fx("0.5")}, Fixed64::from_double(std::sqrt(0.2 / 3.14159265358979)));
    auto small = region::Region::ball({fx("0.5"), fx("0.5")}, Fixed64::from_double(std::sqrt(0.05 / 3.14159265358979)));
    auto rb = discrepancy_of_system(sys, p, big, opts);
    auto rs = discrepancy_of_system(sys, p, small, opts);
    REQUIRE(rb.exact_D.has_value());
    REQUIRE(rs.exact_D.has_value());
    CHECK(*rs.exact_D >= *rb.exact_D);  // fewer points, worse equidistribution
    CHECK(rs.thm1_ratio <= rs.thm2_ratio);  // mu^{1/m} >= mu for mu <= 1
}

TEST_CASE("empty regions report the empty-sequence convention") {
    PrimeModulus p(7);
    auto sys = poly::PolySystem::value_system(2, {"X1*X2"});
    auto tiny = region::Region::ball({fx("0.5"), fx("0.5")}, fx("0.01"));
    DiscOptions opts;
    opts.seed = 3;
    auto rep = discrepancy_of_system(sys, p, tiny, opts);
    CHECK(rep.N == 0);
    REQUIRE(rep.exact_D.has_value());
    CHECK(*rep.exact_D == 1.0);
    CHECK(rep.s_star == 0.0);
}

TEST_CASE("dependent systems are refused by the pipeline") {
    PrimeModulus p(5);
    auto dep = poly::PolySystem::value_system(1, {"X1^2 + X1", "2*X1^2"});
    auto full = region::Region::full_torus(1);
    DiscOptions opts;
    CHECK_THROWS_AS((void)discrepancy_of_system(dep, p, full, opts), std::invalid_argument);
}

TEST_CASE("guard trip inside the pipeline falls back to the sampled bound") {
    PrimeModulus p(101);
    auto sys = poly::PolySystem::value_system(1, {"X1^2"});
    auto full = region::Region::full_torus(1);
    DiscOptions opts;
    opts.seed = 4;
    opts.force_sampled = true;
    auto rep = discrepancy_of_system(sys, p, full, opts);
    CHECK_FALSE(rep.exact_D.has_value());
    REQUIRE(rep.sampled_D.has_value());
    CHECK(*rep.sampled_D > 0.0);
    CHECK(*rep.sampled_D <= 1.0);
}
