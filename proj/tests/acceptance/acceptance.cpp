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

// End-to-end verification suite.  Each criterion prints one PASS/FAIL line;
// run with a criterion number (1..10) to execute just that one, with no
// arguments for all, or with "freeze7" to print the observed sweep values
// that seed the frozen regression table.

#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../support/disc_oracle.hpp"
#include "equilab/discrepancy.hpp"
#include "equilab/dyadic.hpp"
#include "equilab/expsum.hpp"
#include "equilab/harness.hpp"
#include "equilab/rng.hpp"
#include "equilab/variety.hpp"

using namespace equilab;

namespace {

Fixed64 fx(const char* s) { return parse_unit_decimal(s); }

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---------------------------------------------------------------------------
// 1. histogram vs naive evaluators on randomized instances
// ---------------------------------------------------------------------------
bool criterion1(std::string& detail) {
    std::mt19937_64 gen(20260101);
    double worst = 0;
    for (int done = 0; done < 1000; ++done) {
        u64 pv = 0;
        do {
            pv = 3 + rng_below(gen, 99);
        } while (!is_prime(pv));
        PrimeModulus p(pv);
        int m = 1 + static_cast<int>(rng_below(gen, 2));
        poly::PolySystem sys;
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
                    exps[static_cast<std::size_t>(v)] =
                        static_cast<u32>(rng_below(gen, static_cast<u64>(budget + 1)));
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

        auto h = expsum::exp_sum_cube(sys, a, p, corner, w, expsum::Evaluator::Histogram);
        auto nv = expsum::exp_sum_cube(sys, a, p, corner, w, expsum::Evaluator::Naive);
        double scale = std::max({std::abs(h.value), std::abs(nv.value), 1.0});
        worst = std::max(worst, std::abs(h.value - nv.value) / scale);
    }
    std::ostringstream os;
    os << "worst relative difference " << worst << " over 1000 instances (limit 1e-9)";
    detail = os.str();
    return worst <= 1e-9;
}

// ---------------------------------------------------------------------------
// 2. quadratic full sums have magnitude sqrt(p) for every coefficient
// ---------------------------------------------------------------------------
bool criterion2(std::string& detail) {
    auto sys = poly::PolySystem::value_system(1, {"X1^2"});
    double worst = 0;
    std::size_t checked = 0;
    for (u64 pv : primes_in_range(5, 97)) {
        PrimeModulus p(pv);
        std::vector<i64> corner{0};
        for (i64 a1 = 1; a1 < static_cast<i64>(pv); ++a1) {
            auto s = expsum::exp_sum_cube(sys, std::vector<i64>{a1}, p, corner, pv - 1);
            worst = std::max(worst, std::fabs(std::abs(s.value) - std::sqrt(static_cast<double>(pv))));
            ++checked;
        }
    }
    std::ostringstream os;
    os << "worst | |S| - sqrt(p) | = " << worst << " over " << checked
       << " (p, a) pairs (limit 1e-6)";
    detail = os.str();
    return worst <= 1e-6;
}

// ---------------------------------------------------------------------------
// 3. cube-sum envelope ratio: bounded and flat in p
// ---------------------------------------------------------------------------
bool criterion3(std::string& detail) {
    auto sys = poly::PolySystem::value_system(2, {"X1*X2"});
    const std::vector<u64> primes{53, 101, 199, 401};
    std::vector<double> logp, logratio;
    double max_ratio = 0;
    for (u64 pv : primes) {
        PrimeModulus p(pv);
        double best = expsum::fk_ratio(sys, p, std::vector<i64>{0, 0}, pv - 1);  // full cube
        std::mt19937_64 gen(derive_seed(20260303, {pv}));
        for (int c = 0; c < 10; ++c) {
            double f = 0.05 + 0.9 * rng_unit(gen);
            u64 w = std::max<u64>(1, static_cast<u64>(std::llround(f * static_cast<double>(pv - 1))));
            std::vector<i64> corner{static_cast<i64>(rng_below(gen, pv)),
                                    static_cast<i64>(rng_below(gen, pv))};
            best = std::max(best, expsum::fk_ratio(sys, p, corner, w));
        }
        max_ratio = std::max(max_ratio, best);
        logp.push_back(std::log(static_cast<double>(pv)));
        logratio.push_back(std::log(best));
    }
    double slope = ls_slope(logp, logratio);
    std::ostringstream os;
    os << "max ratio " << max_ratio << " (limit 4), log-log slope " << slope << " (limit 0.05)";
    detail = os.str();
    return max_ratio <= 4.0 && slope <= 0.05;
}

// ---------------------------------------------------------------------------
// 4. dyadic covers of balls: certified, disjoint, near-exhaustive
// ---------------------------------------------------------------------------
bool criterion4(std::string& detail) {
    const u64 M = 10;
    std::ostringstream os;
    bool ok = true;
    for (const char* rs : {"0.2", "0.3", "0.4"}) {
        auto region = region::Region::ball({fx("0.5"), fx("0.5")}, fx(rs));
        const double mu = region.measure();
        auto anchor = dyadic::draw_anchor(2, derive_seed(20260404, {static_cast<u64>(rs[2])}),
                                          dyadic::forbidden_denominators(M, {}));
        auto cover = dyadic::build_cover(region, M, anchor);

        // every cube certified inside
        for (const auto& layer : cover.layers)
            for (const auto& cube : layer)
                if (!region.cube_inside(cube.to_exact(anchor))) ok = false;

        // pairwise interior disjointness: exact integer test on (level, coords)
        std::vector<std::vector<u64>> ranks(M + 1);
        for (u64 i = 1; i <= M; ++i) {
            for (const auto& cube : cover.layers[i - 1]) ranks[i].push_back(cube.lex_rank());
            std::sort(ranks[i].begin(), ranks[i].end());
            for (std::size_t a = 1; a < ranks[i].size(); ++a)
                if (ranks[i][a] == ranks[i][a - 1]) ok = false;  // duplicate cube
        }
        for (u64 i = 2; i <= M; ++i)
            for (const auto& cube : cover.layers[i - 1]) {
                dyadic::AnchoredCube anc = cube;
                for (u64 lvl = i; lvl-- > 1;) {
                    anc.level /= 2;
                    for (auto& u : anc.coords) u /= 2;
                    if (std::binary_search(ranks[lvl].begin(), ranks[lvl].end(), anc.lex_rank()))
                        ok = false;  // an ancestor overlaps this cube
                }
            }

        // union deficiency against the shell width, for every depth up to M
        double worst_def_ratio = 0;
        for (u64 depth = 1; depth <= M; ++depth) {
            double uni = 0;
            for (u64 i = 1; i <= depth; ++i)
                uni += static_cast<double>(cover.layers[i - 1].size()) *
                       std::ldexp(1.0, -2 * static_cast<int>(i));
            double eps = std::ldexp(1.0, -static_cast<int>(depth));
            double bound = 8.0 * (std::sqrt(mu) * eps + eps * eps);
            double def = mu - uni;
            worst_def_ratio = std::max(worst_def_ratio, def / bound);
            if (def < 0 || def > bound) ok = false;
        }

        // layer growth against the very-well-shaped envelope
        auto diag = dyadic::cover_diagnostics(cover, region);
        double worst_vws = 0;
        for (const auto& ld : diag.layers) worst_vws = std::max(worst_vws, ld.ratio_vws);
        if (worst_vws > 32.0) ok = false;

        os << "r=" << rs << ": cubes=" << cover.total_cubes()
           << " def/bound=" << worst_def_ratio << " max_vws=" << worst_vws << "; ";
    }
    detail = os.str() + "(defect bound 8*(mu^0.5 2^-M + 4^-M), layer bound 32)";
    return ok;
}

// ---------------------------------------------------------------------------
// 5. grid-count law for the r = 0.3 ball
// ---------------------------------------------------------------------------
bool criterion5(std::string& detail) {
    auto region = region::Region::ball({fx("0.5"), fx("0.5")}, fx("0.3"));
    const double mu = region.measure();
    auto anchor = dyadic::draw_anchor(2, 20260505, dyadic::forbidden_denominators(8, {}));
    double worst = 0;
    for (u64 k = 2; k <= 256; k *= 2) {
        auto cubes = dyadic::grid_cubes_inside(region, k, anchor);
        double err = std::fabs(static_cast<double>(cubes.size()) -
                               static_cast<double>(k) * static_cast<double>(k) * mu) /
                     static_cast<double>(k);
        worst = std::max(worst, err);
    }
    std::ostringstream os;
    os << "worst |#C(k) - k^2 mu| / k = " << worst << " for k in {2..256} (limit 16)";
    detail = os.str();
    return worst <= 16.0;
}

// ---------------------------------------------------------------------------
// 6. exact discrepancy vs oracle, equal spacing, empty convention
// ---------------------------------------------------------------------------
bool criterion6(std::string& detail) {
    bool ok = true;
    std::mt19937_64 gen(20260606);
    int oracle_checked = 0;
    for (int rep = 0; rep < 200; ++rep) {
        int n = 1 + static_cast<int>(rng_below(gen, 2));
        std::size_t N = 1 + rng_below(gen, 30);
        u64 P = 0;
        switch (rng_below(gen, 3)) {
            case 0: P = 53; break;
            case 1: P = 64; break;
            default: P = 101; break;
        }
        std::vector<u64> coords(N * static_cast<std::size_t>(n));
        for (auto& c : coords) c = rng_below(gen, P);
        auto pts = discrepancy::FractionalPointSet::from_rows(n, P, std::move(coords));
        auto fast = discrepancy::extreme_discrepancy_exact(pts);
        auto oracle = testsupport::oracle_extreme_discrepancy(pts);
        if (fast.num != oracle.num || fast.den != oracle.den) ok = false;
        ++oracle_checked;
    }

    bool spacing_ok = true;
    for (u64 N = 1; N <= 64; ++N) {
        std::vector<u64> coords(N);
        for (u64 i = 0; i < N; ++i) coords[i] = i;
        auto pts = discrepancy::FractionalPointSet::from_rows(1, N, std::move(coords));
        auto ex = discrepancy::extreme_discrepancy_exact(pts);
        if (ex.num * N != ex.den) spacing_ok = false;
    }

    discrepancy::FractionalPointSet empty;
    empty.n = 2;
    empty.denominator = 7;
    bool empty_ok = discrepancy::extreme_discrepancy_exact(empty).value == 1.0;

    std::ostringstream os;
    os << oracle_checked << " random sets matched the exhaustive oracle exactly; {i/N} gave 1/N for N <= 64: "
       << (spacing_ok ? "yes" : "NO") << "; empty set gives 1: " << (empty_ok ? "yes" : "NO");
    detail = os.str();
    return ok && spacing_ok && empty_ok;
}

// ---------------------------------------------------------------------------
// 7. bound-ratio stability across the (mu, p) sweep, frozen baselines
// ---------------------------------------------------------------------------

struct SweepCell {
    double mu;
    u64 p;
    double thm2_ratio;
};

// radii sqrt(mu/pi) for mu in {0.05, 0.1, 0.2}
constexpr const char* kSweepRadii[3] = {"0.126156626101008", "0.178412411615277",
                                        "0.252313252202016"};
constexpr double kSweepMus[3] = {0.05, 0.1, 0.2};
constexpr u64 kSweepPrimes[4] = {101, 211, 401, 809};

// observed thm2_ratio values, recorded on the first run of this suite
// (regenerate with `equilab_acceptance freeze7`)
constexpr double kFrozenThm2[3][4] = {
    {0.001861479584761829, 0.0007166089450146232, 0.0003620260325522782, 0.0001540940602913537},
    {0.001609303732337083, 0.0006661496680296012, 0.0003336265341578673, 0.0001542913097988493},
    {0.001276099320109253, 0.0007578545337677955, 0.0002839445619543546, 0.0001583983870918888},
};

std::string sweep_config_json() {
    std::ostringstream os;
    os << R"({"kind": "sweep", "seed": 20260707,)"
       << R"( "system": {"kind": "value", "m": 2, "polys": ["X1*X2"]},)"
       << R"( "primes": [101, 211, 401, 809], "regions": [)";
    for (int i = 0; i < 3; ++i) {
        if (i) os << ", ";
        os << R"({"kind": "euclidean-ball", "center": ["0.5", "0.5"], "radius": ")"
           << kSweepRadii[i] << R"("})";
    }
    os << "]}";
    return os.str();
}

std::vector<SweepCell> run_sweep() {
    auto [cfg, errs] = harness::load_config_string(sweep_config_json());
    if (!cfg) throw std::runtime_error("sweep config failed to validate");
    auto result = harness::run(*cfg);
    std::vector<SweepCell> cells;
    for (int i = 0; i < 3; ++i) {
        auto region = region::Region::ball({fx("0.5"), fx("0.5")}, fx(kSweepRadii[i]));
        for (u64 p : kSweepPrimes) {
            std::string key = "p=" + std::to_string(p) + "|range=" + region.describe();
            for (const auto& cell : result.cells)
                if (cell.key == key) {
                    const auto* f = cell.find("thm2_ratio");
                    if (f) cells.push_back({kSweepMus[i], p, f->fval});
                }
        }
    }
    return cells;
}

bool criterion7(std::string& detail) {
    auto cells = run_sweep();
    if (cells.size() != 12) {
        detail = "expected 12 sweep cells, got " + std::to_string(cells.size());
        return false;
    }
    bool ok = true;
    double worst_rel = 0, worst_slope = -1e9;
    for (int i = 0; i < 3; ++i) {
        std::vector<double> logp, logratio;
        for (int k = 0; k < 4; ++k) {
            const auto& cell = cells[static_cast<std::size_t>(i * 4 + k)];
            double frozen = kFrozenThm2[i][k];
            worst_rel = std::max(worst_rel, cell.thm2_ratio / frozen);
            if (cell.thm2_ratio > frozen * 1.5) ok = false;
            logp.push_back(std::log(static_cast<double>(cell.p)));
            logratio.push_back(std::log(cell.thm2_ratio));
        }
        double slope = ls_slope(logp, logratio);
        worst_slope = std::max(worst_slope, slope);
        if (slope > 0.1) ok = false;
    }
    std::ostringstream os;
    os << "max ratio/frozen = " << worst_rel << " (limit 1.5), worst log-log slope = "
       << worst_slope << " (limit 0.1)";
    detail = os.str();
    return ok;
}

void freeze7() {
    auto cells = run_sweep();
    std::printf("constexpr double kFrozenThm2[3][4] = {\n");
    for (int i = 0; i < 3; ++i) {
        std::printf("    {");
        for (int k = 0; k < 4; ++k)
            std::printf("%s%.16g", k ? ", " : "",
                        cells[static_cast<std::size_t>(i * 4 + k)].thm2_ratio);
        std::printf("},\n");
    }
    std::printf("};\n");
}

// ---------------------------------------------------------------------------
// 8. exact solution counts for the hyperbola and the circle
// ---------------------------------------------------------------------------
bool criterion8(std::string& detail) {
    auto hyper = poly::PolySystem::zero_system(2, {"X1*X2 - 1"});
    auto circ = poly::PolySystem::zero_system(2, {"X1^2 + X2^2 - 1"});
    bool ok = true;
    std::size_t checked = 0;
    for (u64 pv : primes_in_range(2, 997)) {
        PrimeModulus p(pv);
        if (variety::solve_system(hyper, p).count() != pv - 1) ok = false;
        if (pv > 2) {
            auto c = variety::solve_system(circ, p).count();
            u64 diff = c > pv ? c - pv : pv - c;
            if (diff != 1) ok = false;
        }
        ++checked;
    }
    detail = "hyperbola #X_p = p-1 and circle |#X_p - p| = 1 verified for all " +
             std::to_string(checked) + " primes <= 997";
    return ok;
}

// ---------------------------------------------------------------------------
// 9. solution-count residuals over balls: bounded, trend-free, partitioned
// ---------------------------------------------------------------------------
bool criterion9(std::string& detail) {
    auto hyper = poly::PolySystem::zero_system(2, {"X1*X2 - 1"});
    const std::vector<u64> primes{101, 151, 211, 307, 401, 503, 601, 701, 809, 997};
    bool ok = true;
    double worst_abs = 0, worst_slope = -1e9;
    for (const char* rs : kSweepRadii) {
        auto ball = region::Region::ball({fx("0.5"), fx("0.5")}, fx(rs));
        auto comp = region::Region::complement(ball);
        std::vector<double> logp, absres;
        for (u64 pv : primes) {
            PrimeModulus p(pv);
            auto sol = variety::solve_system(hyper, p);
            sol.nu = 1;
            double res = variety::theorem3_residual(sol, ball);
            worst_abs = std::max(worst_abs, std::fabs(res));
            if (std::fabs(res) > 8.0) ok = false;
            logp.push_back(std::log(static_cast<double>(pv)));
            absres.push_back(std::fabs(res));
            // partition identity, exact in every cell
            if (variety::count_in_region(sol, ball) + variety::count_in_region(sol, comp) !=
                sol.count())
                ok = false;
        }
        double slope = ls_slope(logp, absres);
        worst_slope = std::max(worst_slope, slope);
        if (slope > 0.05) ok = false;
    }
    std::ostringstream os;
    os << "max |residual| = " << worst_abs << " (limit 8), worst d|res|/dlog p = " << worst_slope
       << " (limit 0.05); partition identity exact in every cell";
    detail = os.str();
    return ok;
}

// ---------------------------------------------------------------------------
// 10. reruns of the criterion-7 sweep are byte-identical
// ---------------------------------------------------------------------------
bool criterion10(std::string& detail) {
    auto [cfg, errs] = harness::load_config_string(sweep_config_json());
    if (!cfg) {
        detail = "sweep config failed to validate";
        return false;
    }
    auto a = harness::to_json_string(harness::run(*cfg));
    auto b = harness::to_json_string(harness::run(*cfg));
    detail = "two runs, " + std::to_string(a.size()) + " payload bytes each, byte-identical: " +
             (a == b ? "yes" : "NO");
    return a == b;
}

struct Criterion {
    int id;
    const char* title;
    std::function<bool(std::string&)> fn;
};

const Criterion kCriteria[] = {
    {1, "exponential-sum oracle equivalence", criterion1},
    {2, "quadratic full-sum magnitude sqrt(p)", criterion2},
    {3, "cube-sum envelope ratio bounded and flat", criterion3},
    {4, "dyadic cover soundness for balls", criterion4},
    {5, "grid-count law", criterion5},
    {6, "exact discrepancy oracle agreement", criterion6},
    {7, "bound-ratio stability across the sweep", criterion7},
    {8, "exact solution counts (hyperbola, circle)", criterion8},
    {9, "ball residuals bounded and trend-free", criterion9},
    {10, "byte-identical reruns", criterion10},
};

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1 && std::strcmp(argv[1], "freeze7") == 0) {
        freeze7();
        return 0;
    }
    int only = argc > 1 ? std::atoi(argv[1]) : 0;
    int failures = 0;
    for (const auto& c : kCriteria) {
        if (only != 0 && c.id != only) continue;
        std::string detail;
        bool pass = false;
        try {
            pass = c.fn(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::printf("criterion %2d: %s — %s (%s)\n", c.id, pass ? "PASS" : "FAIL", c.title,
                    detail.c_str());
        std::fflush(stdout);
        failures += pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
