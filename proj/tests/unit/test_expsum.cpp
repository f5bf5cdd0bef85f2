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

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include <filesystem>
#include <fstream>
#include <map>

#include "equilab/dyadic.hpp"
#include "equilab/errors.hpp"
#include "equilab/expsum.hpp"
#include "equilab/rng.hpp"

using namespace equilab;
using namespace equilab::expsum;
using equilab::poly::PolySystem;

namespace {

Fixed64 fx(const char* s) { return parse_unit_decimal(s); }

double rel_diff(std::complex<double> a, std::complex<double> b) {
    double scale = std::max({std::abs(a), std::abs(b), 1.0});
    return std::abs(a - b) / scale;
}

}  // namespace

TEST_CASE("vanishing combination turns the sum into a point count") {
    PrimeModulus p(7);
    auto sys = PolySystem::value_system(1, {"X1^2", "X1^2"});
    std::vector<i64> a{1, 6};  // a1 G1 + a2 G2 = 7 X1^2 = 0 mod 7
    std::vector<i64> corner{0};
    auto s = exp_sum_cube(sys, a, p, corner, 4);
    CHECK(s.value.real() == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(s.value.imag() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(s.point_count == 5);
}

TEST_CASE("full linear character sum vanishes") {
    PrimeModulus p(13);
    auto sys = PolySystem::value_system(1, {"X1"});
    std::vector<i64> a{1};
    std::vector<i64> corner{0};
    for (auto ev : {Evaluator::Histogram, Evaluator::Naive}) {
        auto s = exp_sum_cube(sys, a, p, corner, 12, ev);
        CHECK(std::abs(s.value) <= 1e-10);
    }
}

TEST_CASE("quadratic full sums have square-root magnitude") {
    // |sum_x e(2 pi i a x^2 / p)| = sqrt(p) for odd p and a != 0, checked
    // against the brute-force evaluator as well
    auto sys = PolySystem::value_system(1, {"X1^2"});
    PrimeModulus p13(13);
    std::vector<i64> corner{0};
    auto s = exp_sum_cube(sys, std::vector<i64>{1}, p13, corner, 12);
    CHECK(std::abs(s.value) == doctest::Approx(std::sqrt(13.0)).epsilon(1e-9));

    // independent brute force with long double accumulation
    long double re = 0, im = 0;
    for (int x = 0; x < 13; ++x) {
        long double ang = 2.0L * std::numbers::pi_v<long double> * ((x * x) % 13) / 13.0L;
        re += std::cos(ang);
        im += std::sin(ang);
    }
    CHECK(std::abs(s.value) ==
          doctest::Approx(static_cast<double>(std::hypot(re, im))).epsilon(1e-9));

    for (u64 pv : {5ull, 7ull, 11ull, 17ull, 19ull}) {
        PrimeModulus p(pv);
        for (i64 a1 = 1; a1 < static_cast<i64>(pv); ++a1) {
            auto g = exp_sum_cube(sys, std::vector<i64>{a1}, p, corner, pv - 1);
            CHECK(std::abs(g.value) == doctest::Approx(std::sqrt(static_cast<double>(pv))).epsilon(1e-9));
        }
    }
}

TEST_CASE("histogram and naive evaluators agree to 1e-9 relative") {
    std::mt19937_64 gen(31);
    int done = 0;
    while (done < 120) {
        u64 pv = 0;
        do {
            pv = 3 + rng_below(gen, 99);
        } while (!is_prime(pv));
        PrimeModulus p(pv);
        int m = 1 + static_cast<int>(rng_below(gen, 2));
        PolySystem sys;
        sys.m = m;
        sys.kind = poly::SystemKind::Value;
        int n = 1 + static_cast<int>(rng_below(gen, 2));
        for (int j = 0; j < n; ++j) {
            poly::MvPolynomial f(m);
            int terms = 1 + static_cast<int>(rng_below(gen, 4));
            for (int t = 0; t < terms; ++t) {
                std::vector<u32> exps(static_cast<std::size_t>(m));
                int budget = 4;
                for (int v = 0; v < m; ++v) {
                    exps[static_cast<std::size_t>(v)] = static_cast<u32>(rng_below(gen, static_cast<u64>(budget + 1)));
                    budget -= static_cast<int>(exps[static_cast<std::size_t>(v)]);
                }
                f.add_term(std::move(exps), static_cast<long long>(rng_below(gen, 17)) - 8);
            }
            if (f.is_zero()) f.add_term(std::vector<u32>(static_cast<std::size_t>(m), 1), 1);
            sys.polys.push_back(std::move(f));
        }
        std::vector<i64> a(static_cast<std::size_t>(n));
        bool nonzero = false;
        for (auto& v : a) {
            v = static_cast<i64>(rng_below(gen, 11)) - 5;
            nonzero = nonzero || v != 0;
        }
        if (!nonzero) a[0] = 1;
        u64 w = 1 + rng_below(gen, pv - 1);
        std::vector<i64> corner(static_cast<std::size_t>(m));
        for (auto& c : corner) c = static_cast<i64>(rng_below(gen, pv));

        auto h = exp_sum_cube(sys, a, p, corner, w, Evaluator::Histogram);
        auto nv = exp_sum_cube(sys, a, p, corner, w, Evaluator::Naive);
        CHECK(rel_diff(h.value, nv.value) <= 1e-9);
        ++done;
    }
}

TEST_CASE("region sums match cube sums on the full torus") {
    PrimeModulus p(17);
    auto sys = PolySystem::value_system(1, {"X1"});
    auto full = region::Region::full_torus(1);
    std::vector<i64> a{1};
    std::vector<i64> corner{0};
    auto sr = exp_sum_region(sys, a, p, full);
    auto sc = exp_sum_cube(sys, a, p, corner, 16);
    CHECK(rel_diff(sr.value, sc.value) <= 1e-12);
    CHECK(std::abs(sr.value) <= 1e-10);
    CHECK(sr.range == "full-torus(m=1)");
}

TEST_CASE("region sums match an independent loop over the lattice points") {
    PrimeModulus p(53);
    auto sys = PolySystem::value_system(2, {"X1*X2"});
    auto ball = region::Region::ball({fx("0.5"), fx("0.5")}, fx("0.3"));
    std::vector<i64> a{1};
    auto s = exp_sum_region(sys, a, p, ball);

    auto pts = ball.lattice_points(p);
    long double re = 0, im = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        u64 t = (pts.row(i)[0] * pts.row(i)[1]) % 53;
        long double ang = 2.0L * std::numbers::pi_v<long double> * t / 53.0L;
        re += std::cos(ang);
        im += std::sin(ang);
    }
    CHECK(s.point_count == pts.size());
    CHECK(std::abs(s.value.real() - static_cast<double>(re)) <= 1e-8);
    CHECK(std::abs(s.value.imag() - static_cast<double>(im)) <= 1e-8);
}

TEST_CASE("Parseval identity over the full range") {
    // sum_a |S(a)|^2 = p * sum_t N_t^2 for one variable, full cube
    PrimeModulus p(31);
    auto sys = PolySystem::value_system(1, {"X1^3 + 2*X1"});
    std::vector<i64> corner{0};
    double lhs = 0;
    std::vector<u64> hist(31, 0);
    for (u64 x = 0; x < 31; ++x)
        ++hist[sys.polys[0].eval_mod(std::vector<u64>{x}, p)];
    for (i64 a1 = 0; a1 < 31; ++a1) {
        auto s = exp_sum_cube(sys, std::vector<i64>{a1}, p, corner, 30);
        lhs += std::norm(s.value);
    }
    double rhs = 0;
    for (u64 t = 0; t < 31; ++t) rhs += 31.0 * static_cast<double>(hist[t]) * static_cast<double>(hist[t]);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-6));
}

TEST_CASE("sum magnitude never exceeds the point count") {
    std::mt19937_64 gen(77);
    PrimeModulus p(23);
    auto sys = PolySystem::value_system(2, {"X1^2 + X2", "X1*X2"});
    for (int rep = 0; rep < 30; ++rep) {
        std::vector<i64> a{static_cast<i64>(rng_below(gen, 7)) - 3,
                           static_cast<i64>(rng_below(gen, 7)) - 3};
        if (a[0] == 0 && a[1] == 0) a[0] = 2;
        u64 w = 1 + rng_below(gen, 22);
        std::vector<i64> corner{static_cast<i64>(rng_below(gen, 23)),
                                static_cast<i64>(rng_below(gen, 23))};
        auto s = exp_sum_cube(sys, a, p, corner, w);
        CHECK(std::abs(s.value) <= static_cast<double>(s.point_count) * (1 + 1e-12));
        // equality holds only when the combined polynomial is constant on the
        // cube; these combos never are
        CHECK(std::abs(s.value) < static_cast<double>(s.point_count) * (1 - 1e-6));
    }
}

TEST_CASE("cube guards fire") {
    PrimeModulus p(7);
    auto sys = PolySystem::value_system(1, {"X1"});
    std::vector<i64> a{1};
    std::vector<i64> corner{0};
    CHECK_THROWS_AS((void)exp_sum_cube(sys, a, p, corner, 0), guard_error);
    CHECK_THROWS_AS((void)exp_sum_cube(sys, a, p, corner, 7), guard_error);
    std::vector<i64> bad{1, 2};
    CHECK_THROWS_AS((void)exp_sum_cube(sys, bad, p, corner, 3), std::invalid_argument);
}

TEST_CASE("value tables compress multiplicities") {
    PrimeModulus p(11);
    auto sys = PolySystem::value_system(1, {"X1^2"});
    std::vector<i64> corner{0};
    auto t = ValueTable::over_cube(sys, p, corner, 10);
    CHECK(t.point_count() == 11);
    CHECK(t.distinct_count() == 6);  // squares mod 11: 0 and five QRs
    u64 total = 0;
    for (u64 c : t.counts()) total += c;
    CHECK(total == 11);
}

TEST_CASE("table sums equal direct sums") {
    std::mt19937_64 gen(5);
    PrimeModulus p(29);
    auto sys = PolySystem::value_system(2, {"X1*X2 + X1^2", "X2^2"});
    std::vector<i64> corner{3, 7};
    auto t = ValueTable::over_cube(sys, p, corner, 12);
    for (int rep = 0; rep < 15; ++rep) {
        std::vector<i64> a{static_cast<i64>(rng_below(gen, 9)) - 4,
                           static_cast<i64>(rng_below(gen, 9)) - 4};
        auto direct = exp_sum_cube(sys, a, p, corner, 12);
        CHECK(rel_diff(t.sum_for(a), direct.value) <= 1e-9);
    }
}

TEST_CASE("max scan: linear system gives zero, conjugates collapse") {
    PrimeModulus p(19);
    auto sys = PolySystem::value_system(1, {"X1"});
    auto full = region::Region::full_torus(1);
    auto t = ValueTable::over_region(sys, p, full);
    auto scan = max_exp_sum(t, 9);
    CHECK(scan.s_star <= 1e-9);
    CHECK(scan.scanned == 9);  // canonical half of 18 nonzero values

    // conjugate symmetry on a quadratic
    auto sys2 = PolySystem::value_system(1, {"X1^2"});
    auto t2 = ValueTable::over_region(sys2, p, full);
    for (i64 a1 = 1; a1 <= 9; ++a1) {
        auto plus = t2.sum_for(std::vector<i64>{a1});
        auto minus = t2.sum_for(std::vector<i64>{-a1});
        CHECK(std::abs(plus - std::conj(minus)) <= 1e-12 * 19);
    }
}

TEST_CASE("max scan is maximal and reports a canonical argmax") {
    PrimeModulus p(53);
    auto sys = PolySystem::value_system(2, {"X1*X2"});
    auto full = region::Region::full_torus(2);
    auto t = ValueTable::over_region(sys, p, full);
    auto scan = max_exp_sum(t, 5);
    // every nonzero a gives |S| = p: the zero row x1=0 survives, others cancel
    CHECK(scan.s_star == doctest::Approx(53.0).epsilon(1e-9));
    REQUIRE(scan.argmax.a.size() == 1);
    CHECK(scan.argmax.a[0] > 0);  // canonical sign
    CHECK(scan.scanned == 5);

    // exhaustive cross-check of maximality
    for (i64 a1 = 1; a1 <= 5; ++a1)
        CHECK(std::abs(t.sum_for(std::vector<i64>{a1})) <= scan.s_star * (1 + 1e-12));
}

TEST_CASE("scan guards and admissible bound") {
    PrimeModulus p(101);
    CHECK(admissible_scan_bound(p, 1) == 50);      // capped at (p-1)/2
    PrimeModulus big(104729);
    CHECK(admissible_scan_bound(big, 1) == 52364);  // (p-1)/2 still under guard
    CHECK(admissible_scan_bound(big, 2) == 1580);   // (2L+1)^2 - 1 <= 10^7
    auto sys = PolySystem::value_system(1, {"X1^2"});
    auto full = region::Region::full_torus(1);
    auto t = ValueTable::over_region(sys, p, full);
    CHECK_THROWS_AS((void)max_exp_sum(t, 6'000'000), guard_error);
}

TEST_CASE("independence-envelope ratio on the hyperbola values") {
    PrimeModulus p(101);
    auto sys = PolySystem::value_system(2, {"X1*X2"});
    std::vector<i64> corner{0, 0};
    double ratio = fk_ratio(sys, p, corner, 100);
    CHECK(ratio > 0.0);
    CHECK(ratio <= 4.0);
    // |S| = p for the full cube, so the ratio is p / (sqrt(p) w log p)
    double expect = 101.0 / (std::sqrt(101.0) * 100.0 * std::log(101.0));
    CHECK(ratio == doctest::Approx(expect).epsilon(1e-6));

    auto dep = PolySystem::value_system(1, {"X1^2 + X1", "2*X1^2"});
    PrimeModulus p5(5);
    std::vector<i64> c1{0};
    CHECK_THROWS_AS((void)fk_ratio(dep, p5, c1, 3), std::invalid_argument);
}

TEST_CASE("scan CSV export shape") {
    PrimeModulus p(13);
    auto sys = PolySystem::value_system(1, {"X1^2"});
    auto full = region::Region::full_torus(1);
    auto t = ValueTable::over_region(sys, p, full);
    std::ostringstream os;
    export_scan_csv(t, 3, fk_envelope(p, 12, 1), os);
    std::istringstream is(os.str());
    std::string header;
    std::getline(is, header);
    CHECK(header == "a1,re,im,abs,ratio");
    int rows = 0;
    for (std::string line; std::getline(is, line);) ++rows;
    CHECK(rows == 3);  // canonical half of |a| <= 3
}

TEST_CASE("value-table cache round-trips and is keyed by range") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "equilab_vtab_test";
    fs::remove_all(dir);
    PrimeModulus p(29);
    auto sys = PolySystem::value_system(2, {"X1*X2 + X1^2", "X2^2"});
    std::vector<i64> corner{3, 7};

    auto table = over_cube_cached(sys, p, corner, 12, dir);
    auto path = table_cache_path(dir, sys.hash(), 29, table.range());
    REQUIRE(std::filesystem::exists(path));

    auto hit = table_cache_load(dir, sys.hash(), 29, table.range());
    REQUIRE(hit.has_value());
    CHECK(hit->counts() == table.counts());
    CHECK(hit->residues() == table.residues());
    CHECK(hit->point_count() == table.point_count());
    for (i64 a1 = -2; a1 <= 2; ++a1) {
        std::vector<i64> a{a1, 1};
        CHECK(std::abs(hit->sum_for(a) - table.sum_for(a)) <= 1e-12 * 169);
    }

    CHECK_FALSE(table_cache_load(dir, sys.hash() + 1, 29, table.range()).has_value());
    CHECK_FALSE(table_cache_load(dir, sys.hash(), 29, "cube(corner=(0,0),w=12)").has_value());

    // corrupted entries are recomputed, never trusted
    {
        std::ofstream os(path, std::ios::binary | std::ios::trunc);
        os << "junk";
    }
    CHECK_FALSE(table_cache_load(dir, sys.hash(), 29, table.range()).has_value());
    auto again = over_cube_cached(sys, p, corner, 12, dir);
    CHECK(again.counts() == table.counts());
    fs::remove_all(dir);
}

TEST_CASE("region sums assemble from dyadic cover cubes plus the remainder") {
    PrimeModulus p(53);
    auto sys = PolySystem::value_system(2, {"X1*X2"});
    auto ball = region::Region::ball({fx("0.5"), fx("0.5")}, fx("0.35"));
    std::vector<i64> a{2};

    auto whole = exp_sum_region(sys, a, p, ball);

    auto forb = dyadic::forbidden_denominators(6, std::vector<u64>{53});
    auto anchor = dyadic::draw_anchor(2, 99, forb);
    auto cover = dyadic::build_cover(ball, 4, anchor);

    // bucket the lattice points by covering cube; leftovers are the boundary
    // remainder the cover does not reach
    auto pts = ball.lattice_points(p);
    std::map<std::pair<u64, std::size_t>, region::PointList> buckets;
    region::PointList rest;
    rest.m = 2;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        auto row = pts.row(i);
        if (auto where = cover.locate_lattice(row, p)) {
            auto& b = buckets[*where];
            b.m = 2;
            b.coords.insert(b.coords.end(), row.begin(), row.end());
        } else {
            rest.coords.insert(rest.coords.end(), row.begin(), row.end());
        }
    }
    REQUIRE(!buckets.empty());
    REQUIRE(rest.size() > 0);  // the collar is nonempty at this depth

    std::complex<double> assembled{0, 0};
    std::size_t assembled_points = 0;
    for (auto& [key, bucket] : buckets) {
        auto part = exp_sum_points(sys, a, p, bucket);
        assembled += part.value;
        assembled_points += bucket.size();
    }
    auto remainder = exp_sum_points(sys, a, p, rest);
    assembled += remainder.value;
    assembled_points += rest.size();

    CHECK(assembled_points == pts.size());
    CHECK(std::abs(assembled - whole.value) <= 1e-9 * std::max(1.0, std::abs(whole.value)));
}
