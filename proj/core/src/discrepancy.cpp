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

#include "equilab/discrepancy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "equilab/errors.hpp"
#include "equilab/expsum.hpp"
#include "equilab/parallel.hpp"
#include "equilab/rng.hpp"

namespace equilab::discrepancy {

namespace {

// The whole enumeration runs on objectives scaled by N * P^n, which keeps
// every comparison an exact signed-128-bit integer comparison:
//   (cnt/N - W*dt/P^n) * N*P^n  =  cnt*P^n - (N*W)*dt
// with W the product of the strip widths on the other axes.

struct SweepBest {
    i128 value = -1;
    u64 alpha = 0, beta = 0;
};

inline constexpr i128 kHugeI128 = (static_cast<i128>(1) << 126);

// Streaming sweeps fed one candidate (t, below_lt, below_le) at a time in
// ascending t order; the candidate set of an axis is {0} u {occupied values}
// u {P}, since unoccupied positions are dominated by their massy neighbors.

// D+: alpha closed (subtract below_lt), beta inclusive limit (count
// below_le); alpha == beta allowed (zero-width column boxes).
struct PlusSweep {
    i128 pn, nw;
    i128 hmin = kHugeI128;
    u64 hmin_at = 0;
    SweepBest best;

    PlusSweep(i128 pn_, i128 nw_) : pn(pn_), nw(nw_) {}
    void feed(u64 t, u64 lt, u64 le) {
        i128 h = static_cast<i128>(lt) * pn - nw * static_cast<i128>(t);
        if (h < hmin) {
            hmin = h;
            hmin_at = t;
        }
        i128 g = static_cast<i128>(le) * pn - nw * static_cast<i128>(t);
        if (g - hmin > best.value) best = {g - hmin, hmin_at, t};
    }
};

// D-: alpha open limit (subtract below_le), beta exclusive actual (count
// below_lt); alpha strictly below beta.
struct MinusSweep {
    i128 pn, nw;
    i128 hmin = kHugeI128;
    u64 hmin_at = 0;
    bool have_alpha = false;
    SweepBest best;

    MinusSweep(i128 pn_, i128 nw_) : pn(pn_), nw(nw_) {}
    void feed(u64 t, u64 lt, u64 le) {
        if (have_alpha) {
            i128 g = nw * static_cast<i128>(t) - static_cast<i128>(lt) * pn;
            if (g - hmin > best.value) best = {g - hmin, hmin_at, t};
        }
        i128 h = nw * static_cast<i128>(t) - static_cast<i128>(le) * pn;
        if (!have_alpha || h < hmin) {
            hmin = h;
            hmin_at = t;
            have_alpha = true;
        }
    }
};

// One allocation-free pass: rows are (sweep coordinate, filter payload)
// sorted by the first component; equal sweep coordinates are grouped into
// runs of filtered mass.
template <typename Sweep, typename Row, typename Filter>
SweepBest stream_sweep(const std::vector<Row>& rows, u64 P, i128 pn, i128 nw, Filter&& keep) {
    Sweep sw(pn, nw);
    sw.feed(0, 0, 0);
    u64 below = 0;
    const std::size_t n = rows.size();
    std::size_t k = 0;
    while (k < n) {
        u64 t = rows[k].first;
        u64 run = 0;
        for (; k < n && rows[k].first == t; ++k)
            if (keep(rows[k].second)) ++run;
        if (run) {
            sw.feed(t, below, below + run);
            below += run;
        }
    }
    sw.feed(P, below, below);
    return sw.best;
}

ExactDiscrepancy finish(const FractionalPointSet& pts, i128 pn, i128 best, std::vector<u64> lo,
                        std::vector<u64> hi) {
    ExactDiscrepancy out;
    out.num = static_cast<u128>(best);
    out.den = static_cast<u128>(pts.size()) * static_cast<u128>(pn);
    out.value = static_cast<double>(out.num) / static_cast<double>(out.den);
    out.witness.denominator = pts.denominator;
    out.witness.lo = std::move(lo);
    out.witness.hi = std::move(hi);
    return out;
}

ExactDiscrepancy exact_1d(const FractionalPointSet& pts) {
    const u64 P = pts.denominator;
    std::vector<std::pair<u64, char>> rows(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) rows[i] = {pts.coords[i], 0};
    std::sort(rows.begin(), rows.end());
    i128 pn = static_cast<i128>(P);
    i128 nw = static_cast<i128>(pts.size());
    auto always = [](char) { return true; };
    auto plus = stream_sweep<PlusSweep>(rows, P, pn, nw, always);
    auto minus = stream_sweep<MinusSweep>(rows, P, pn, nw, always);
    SweepBest best = plus.value >= minus.value ? plus : minus;
    return finish(pts, pn, best.value, {best.alpha}, {best.beta});
}

struct StripResult {
    i128 value = -1;
    std::vector<u64> lo, hi;
};

void consider(StripResult& best, i128 value, std::initializer_list<u64> lo,
              std::initializer_list<u64> hi) {
    if (value > best.value) {
        best.value = value;
        best.lo.assign(lo);
        best.hi.assign(hi);
    }
}

std::vector<u64> axis_candidates(const FractionalPointSet& pts, int axis) {
    std::vector<u64> v;
    v.reserve(pts.size() + 2);
    v.push_back(0);
    for (std::size_t i = 0; i < pts.size(); ++i)
        v.push_back(pts.coords[i * static_cast<std::size_t>(pts.n) + static_cast<std::size_t>(axis)]);
    v.push_back(pts.denominator);
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

ExactDiscrepancy exact_2d(const FractionalPointSet& pts) {
    const u64 P = pts.denominator;
    const std::size_t N = pts.size();
    const i128 pn = static_cast<i128>(P) * static_cast<i128>(P);

    auto xc = axis_candidates(pts, 0);
    std::vector<std::pair<u64, u64>> by_y(N);  // (y, x), the sweep runs over y
    for (std::size_t i = 0; i < N; ++i) by_y[i] = {pts.coords[2 * i + 1], pts.coords[2 * i]};
    std::sort(by_y.begin(), by_y.end());

    const std::size_t nx = xc.size();
    std::vector<StripResult> chunk_best(nx);
    parallel_chunks(nx, [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            StripResult& best = chunk_best[i];
            const u64 c = xc[i];
            for (std::size_t j = i; j < nx; ++j) {
                const u64 cp = xc[j];
                const i128 nw = static_cast<i128>(N) * static_cast<i128>(cp - c);
                auto plus = stream_sweep<PlusSweep>(by_y, P, pn, nw,
                                                    [&](u64 x) { return x >= c && x <= cp; });
                consider(best, plus.value, {c, plus.alpha}, {cp, plus.beta});
                if (j > i) {
                    auto minus = stream_sweep<MinusSweep>(by_y, P, pn, nw,
                                                          [&](u64 x) { return x > c && x < cp; });
                    consider(best, minus.value, {c, minus.alpha}, {cp, minus.beta});
                }
            }
        }
    });

    StripResult best;
    for (auto& cb : chunk_best)
        if (cb.value > best.value) best = cb;
    return finish(pts, pn, best.value, best.lo, best.hi);
}

ExactDiscrepancy exact_3d(const FractionalPointSet& pts) {
    const u64 P = pts.denominator;
    const std::size_t N = pts.size();
    const i128 pn = static_cast<i128>(P) * static_cast<i128>(P) * static_cast<i128>(P);

    auto xc = axis_candidates(pts, 0);
    std::vector<std::array<u64, 3>> by_z(N);  // (z, x, y)
    for (std::size_t i = 0; i < N; ++i)
        by_z[i] = {pts.coords[3 * i + 2], pts.coords[3 * i], pts.coords[3 * i + 1]};
    std::sort(by_z.begin(), by_z.end());

    const std::size_t nx = xc.size();
    std::vector<StripResult> chunk_best(nx);
    parallel_chunks(nx, [&](std::size_t, std::size_t begin, std::size_t end) {
        std::vector<std::pair<u64, u64>> strip;  // (z, y), z-sorted by construction
        std::vector<u64> yc;
        for (std::size_t i = begin; i < end; ++i) {
            StripResult& best = chunk_best[i];
            const u64 c = xc[i];
            for (std::size_t j = i; j < nx; ++j) {
                const u64 cp = xc[j];
                for (int mode = 0; mode < 2; ++mode) {
                    if (mode == 1 && j == i) continue;
                    strip.clear();
                    for (const auto& r : by_z) {
                        bool in = mode == 0 ? (r[1] >= c && r[1] <= cp) : (r[1] > c && r[1] < cp);
                        if (in) strip.push_back({r[0], r[2]});
                    }
                    yc.clear();
                    yc.push_back(0);
                    for (const auto& r : strip) yc.push_back(r.second);
                    yc.push_back(P);
                    std::sort(yc.begin(), yc.end());
                    yc.erase(std::unique(yc.begin(), yc.end()), yc.end());
                    for (std::size_t iy = 0; iy < yc.size(); ++iy) {
                        const u64 d = yc[iy];
                        for (std::size_t jy = iy; jy < yc.size(); ++jy) {
                            if (mode == 1 && jy == iy) continue;
                            const u64 dp = yc[jy];
                            const i128 nw = static_cast<i128>(N) * static_cast<i128>(cp - c) *
                                            static_cast<i128>(dp - d);
                            SweepBest sb =
                                mode == 0
                                    ? stream_sweep<PlusSweep>(strip, P, pn, nw,
                                                              [&](u64 y) { return y >= d && y <= dp; })
                                    : stream_sweep<MinusSweep>(strip, P, pn, nw,
                                                               [&](u64 y) { return y > d && y < dp; });
                            consider(best, sb.value, {c, d, sb.alpha}, {cp, dp, sb.beta});
                        }
                    }
                }
            }
        }
    });

    StripResult best;
    for (auto& cb : chunk_best)
        if (cb.value > best.value) best = cb;
    return finish(pts, pn, best.value, best.lo, best.hi);
}

}  // namespace

FractionalPointSet FractionalPointSet::from_rows(int n, u64 denominator, std::vector<u64> coords) {
    if (n < 1) throw std::invalid_argument("point dimension must be positive");
    if (denominator < 1 || denominator > (u64{1} << 31))
        throw std::invalid_argument("denominator must lie in [1, 2^31]");
    if (coords.size() % static_cast<std::size_t>(n) != 0)
        throw std::invalid_argument("coordinate array length is not a multiple of n");
    for (u64 c : coords)
        if (c >= denominator) throw std::invalid_argument("coordinate numerator out of range");
    FractionalPointSet pts;
    pts.n = n;
    pts.denominator = denominator;
    pts.coords = std::move(coords);
    return pts;
}

double Box::lambda() const {
    double v = 1.0;
    for (std::size_t j = 0; j < lo.size(); ++j)
        v *= static_cast<double>(hi[j] - lo[j]) / static_cast<double>(denominator);
    return v;
}

ExactDiscrepancy extreme_discrepancy_exact(const FractionalPointSet& pts) {
    const std::size_t N = pts.size();
    if (N == 0) {
        ExactDiscrepancy out;
        out.value = 1.0;
        out.num = 1;
        out.den = 1;
        out.witness.denominator = pts.denominator;
        out.witness.lo.assign(static_cast<std::size_t>(pts.n), 0);
        out.witness.hi.assign(static_cast<std::size_t>(pts.n), pts.denominator);
        return out;
    }
    if (pts.n > 3) throw guard_error("exact discrepancy supports n <= 3");
    if (pts.n <= 2 && N > 5000)
        throw guard_error("exact discrepancy guard: N <= 5000 for n <= 2");
    if (pts.n == 3 && N > 300) throw guard_error("exact discrepancy guard: N <= 300 for n == 3");

    switch (pts.n) {
        case 1:
            return exact_1d(pts);
        case 2:
            return exact_2d(pts);
        default:
            return exact_3d(pts);
    }
}

double sampled_discrepancy_lower_bound(const FractionalPointSet& pts, u64 trials, u64 seed) {
    if (trials < 1) throw std::invalid_argument("trials must be positive");
    const std::size_t N = pts.size();
    if (N == 0) return 1.0;
    const u64 P = pts.denominator;
    const int n = pts.n;

    i128 pn = 1;
    for (int j = 0; j < n; ++j) pn *= static_cast<i128>(P);

    // n == 1 gets binary-search counting; higher n scans linearly
    std::vector<u64> sorted1;
    if (n == 1) {
        sorted1 = pts.coords;
        std::sort(sorted1.begin(), sorted1.end());
    }

    auto count_box = [&](std::span<const u64> lo, std::span<const u64> hi, bool closed_hi) -> u64 {
        if (n == 1) {
            auto lb = std::lower_bound(sorted1.begin(), sorted1.end(), lo[0]);
            auto ub = closed_hi ? std::upper_bound(sorted1.begin(), sorted1.end(), hi[0])
                                : std::lower_bound(sorted1.begin(), sorted1.end(), hi[0]);
            return static_cast<u64>(ub - lb);
        }
        u64 cnt = 0;
        for (std::size_t i = 0; i < N; ++i) {
            bool in = true;
            for (int j = 0; j < n && in; ++j) {
                u64 v = pts.coords[i * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)];
                in = v >= lo[static_cast<std::size_t>(j)] &&
                     (closed_hi ? v <= hi[static_cast<std::size_t>(j)] : v < hi[static_cast<std::size_t>(j)]);
            }
            cnt += in ? 1 : 0;
        }
        return cnt;
    };

    auto scaled_value = [&](std::span<const u64> lo, std::span<const u64> hi, bool closed_hi) -> i128 {
        i128 vol = static_cast<i128>(N);
        for (int j = 0; j < n; ++j)
            vol *= static_cast<i128>(hi[static_cast<std::size_t>(j)] - lo[static_cast<std::size_t>(j)]);
        i128 cnt = static_cast<i128>(count_box(lo, hi, closed_hi)) * pn;
        return cnt >= vol ? cnt - vol : vol - cnt;
    };

    std::mt19937_64 gen(seed);
    std::vector<u64> lo(static_cast<std::size_t>(n)), hi(static_cast<std::size_t>(n));
    i128 best = 0;
    for (u64 t = 0; t < trials; ++t) {
        if ((t & 1) == 0) {
            for (int j = 0; j < n; ++j) {
                u64 a = rng_below(gen, P + 1), b = rng_below(gen, P + 1);
                lo[static_cast<std::size_t>(j)] = std::min(a, b);
                hi[static_cast<std::size_t>(j)] = std::max(a, b);
            }
            best = std::max(best, scaled_value(lo, hi, false));
        } else {
            std::size_t i1 = static_cast<std::size_t>(rng_below(gen, N));
            std::size_t i2 = static_cast<std::size_t>(rng_below(gen, N));
            for (int j = 0; j < n; ++j) {
                u64 a = pts.coords[i1 * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)];
                u64 b = pts.coords[i2 * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)];
                lo[static_cast<std::size_t>(j)] = std::min(a, b);
                hi[static_cast<std::size_t>(j)] = std::max(a, b);
            }
            best = std::max(best, scaled_value(lo, hi, false));
            best = std::max(best, scaled_value(lo, hi, true));
        }
    }
    return static_cast<double>(static_cast<u128>(best)) /
           static_cast<double>(static_cast<u128>(static_cast<i128>(N) * pn));
}

double ks_bound(double s_star, u64 L, u64 N, int n) {
    if (N < 1) throw std::invalid_argument("ks_bound needs N >= 1");
    if (L < 2) throw std::invalid_argument("ks_bound needs L >= 2");
    return 1.0 / static_cast<double>(L) +
           std::pow(std::log(static_cast<double>(L)), n) / static_cast<double>(N) * s_star;
}

DiscrepancyReport discrepancy_of_system(const poly::PolySystem& system, const PrimeModulus& p,
                                        const region::Region& region, const DiscOptions& opts) {
    auto ind = poly::degree2_independent(system, p);
    if (!ind.independent)
        throw std::invalid_argument("system is not degree-2 independent over F_p");

    auto points = region.lattice_points(p);
    const std::size_t N = points.size();
    const int n = system.n();
    const u64 pv = p.value();

    std::vector<poly::MvPolynomial> reduced;
    for (const auto& g : system.polys) reduced.push_back(g.reduced_mod(p));
    std::vector<u64> coords;
    coords.reserve(N * static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < N; ++i)
        for (int j = 0; j < n; ++j)
            coords.push_back(reduced[static_cast<std::size_t>(j)].eval_mod(points.row(i), p));
    auto pts = FractionalPointSet::from_rows(n, pv, std::move(coords));

    DiscrepancyReport rep;
    rep.p = pv;
    rep.system_hash = system.hash();
    rep.region = region.describe();
    rep.N = N;

    if (N == 0) {
        rep.exact_D = 1.0;  // empty-sequence convention
    } else if (opts.force_sampled) {
        rep.sampled_D = sampled_discrepancy_lower_bound(pts, opts.trials, opts.seed);
    } else {
        try {
            auto ex = extreme_discrepancy_exact(pts);
            rep.exact_D = ex.value;
            rep.witness = ex.witness;
        } catch (const guard_error&) {
            rep.sampled_D = sampled_discrepancy_lower_bound(pts, opts.trials, opts.seed);
        }
    }

    u64 L = opts.L != 0 ? opts.L : expsum::admissible_scan_bound(p, n);
    auto table = expsum::ValueTable::over_points(system, p, points);
    auto scan = expsum::max_exp_sum(table, L);
    rep.s_star = scan.s_star;
    rep.L_used = L;
    rep.ks = ks_bound(scan.s_star, std::max<u64>(L, 2), std::max<u64>(N, 1), n);

    const double mu = region.measure();
    const double D = rep.best_D();
    const double logp = p.log();
    const double denom = std::pow(logp, n + 2);
    rep.thm1_ratio = D * mu * p.sqrt() / denom;
    rep.thm2_ratio = D * std::pow(mu, 1.0 / system.m) * p.sqrt() / denom;
    return rep;
}

}  // namespace equilab::discrepancy
