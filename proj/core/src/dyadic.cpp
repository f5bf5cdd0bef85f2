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

#include "equilab/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "equilab/errors.hpp"
#include "equilab/parallel.hpp"
#include "equilab/rng.hpp"

namespace equilab::dyadic {

bool anchor_collides(u64 gamma_raw, u64 denominator) {
    // gamma/2^63 == u/d for integral u  <=>  gamma * d == 0 (mod 2^63);
    // the low 63 bits of the wrapped product are exact.
    if (denominator == 0) return false;
    u64 low = gamma_raw * denominator;  // mod 2^64
    return (low & (kFixedOne - 1)) == 0;
}

Anchor draw_anchor(int m, u64 seed, std::span<const u64> forbidden_denominators) {
    if (m < 1) throw std::invalid_argument("anchor dimension must be positive");
    std::mt19937_64 gen(seed);
    Anchor a;
    a.gamma.reserve(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
        for (;;) {
            u64 raw = (gen() & (kFixedOne - 1)) | 1;  // odd numerator in [0, 2^63)
            bool clash = false;
            for (u64 d : forbidden_denominators)
                if (anchor_collides(raw, d)) {
                    clash = true;
                    break;
                }
            if (!clash) {
                a.gamma.push_back(raw);
                break;
            }
        }
    }
    return a;
}

std::vector<u64> forbidden_denominators(u64 depth, std::span<const u64> primes) {
    std::vector<u64> out;
    for (u64 i = 1; i <= depth && i <= 62; ++i) {
        u64 k = u64{1} << i;
        out.push_back(k);
        for (u64 p : primes) {
            if (k > (u64{1} << 62) / p) continue;
            out.push_back(k * p);
        }
    }
    return out;
}

region::ExactCube AnchoredCube::to_exact(const Anchor& anchor) const {
    region::ExactCube c;
    c.den_factor = level;
    c.width = u128{1} << kFixedBits;  // side 1/k over denominator k*2^63
    const u128 den = c.den();
    c.lo.reserve(coords.size());
    for (std::size_t j = 0; j < coords.size(); ++j) {
        u128 lo = static_cast<u128>(anchor.gamma[j]) * level +
                  (static_cast<u128>(coords[j]) << kFixedBits);
        c.lo.push_back(lo % den);
    }
    return c;
}

u64 AnchoredCube::lex_rank() const {
    u64 r = 0;
    for (u64 u : coords) r = r * level + u;
    return r;
}

bool AnchoredCube::contains_lattice(std::span<const u64> x, const PrimeModulus& p,
                                    const Anchor& anchor) const {
    const u64 pv = p.value();
    const u128 den = static_cast<u128>(pv) << kFixedBits;
    for (std::size_t j = 0; j < coords.size(); ++j) {
        // t = (x_j/p - gamma_j) mod 1 over denominator p*2^63
        u128 xnum = static_cast<u128>(x[j] % pv) << kFixedBits;
        u128 gnum = static_cast<u128>(anchor.gamma[j]) * pv;
        u128 t = xnum >= gnum ? xnum - gnum : xnum + den - gnum;
        // inside [u_j/k, (u_j+1)/k]  <=>  t*k in [u_j, u_j+1] * p*2^63
        u128 tk = t * level;
        u128 lo = static_cast<u128>(coords[j]) * den;
        u128 hi = lo + den;
        if (tk < lo || tk > hi) return false;
    }
    return true;
}

bool AnchoredCube::lattice_on_boundary(std::span<const u64> x, const PrimeModulus& p,
                                       const Anchor& anchor) const {
    const u64 pv = p.value();
    const u128 den = static_cast<u128>(pv) << kFixedBits;
    for (std::size_t j = 0; j < coords.size(); ++j) {
        u128 xnum = static_cast<u128>(x[j] % pv) << kFixedBits;
        u128 gnum = static_cast<u128>(anchor.gamma[j]) * pv;
        u128 t = xnum >= gnum ? xnum - gnum : xnum + den - gnum;
        u128 tk = t * level;
        if (tk == static_cast<u128>(coords[j]) * den) return true;
        if (tk == (static_cast<u128>(coords[j]) + 1) * den) return true;
    }
    return false;
}

namespace {

void check_grid_guard(int m, u64 k) {
    if (k == 0 || k > kMaxGridSide) throw guard_error("grid side k must satisfy 1 <= k <= 2^20");
    u128 total = 1;
    for (int j = 0; j < m; ++j) {
        total *= k;
        if (total > region::kLatticeEnumGuard)
            throw guard_error("grid enumeration guard exceeded: k^m > 10^9");
    }
}

}  // namespace

std::vector<AnchoredCube> grid_cubes_inside(const region::Region& region, u64 k,
                                            const Anchor& anchor) {
    const int m = region.dim();
    if (anchor.dim() != m) throw std::invalid_argument("anchor dimension does not match region");
    check_grid_guard(m, k);

    u64 total = 1;
    for (int j = 0; j < m; ++j) total *= k;

    std::vector<std::vector<AnchoredCube>> partial(static_cast<std::size_t>(k));
    parallel_chunks(k, [&](std::size_t, std::size_t begin, std::size_t end) {
        AnchoredCube cube;
        cube.level = k;
        cube.coords.assign(static_cast<std::size_t>(m), 0);
        const u64 slice = total / k;
        for (std::size_t u0 = begin; u0 < end; ++u0) {
            cube.coords[0] = static_cast<u64>(u0);
            std::fill(cube.coords.begin() + 1, cube.coords.end(), 0);
            for (u64 i = 0; i < slice; ++i) {
                if (region.cube_inside(cube.to_exact(anchor))) partial[u0].push_back(cube);
                for (int j = m - 1; j >= 1; --j) {
                    if (++cube.coords[static_cast<std::size_t>(j)] < k) break;
                    cube.coords[static_cast<std::size_t>(j)] = 0;
                }
            }
        }
    });

    std::vector<AnchoredCube> out;
    for (auto& part : partial)
        for (auto& c : part) out.push_back(std::move(c));
    return out;
}

DyadicCover build_cover(const region::Region& region, u64 depth, const Anchor& anchor) {
    if (depth < 1) throw std::invalid_argument("cover depth must be at least 1");
    const int m = region.dim();
    check_grid_guard(m, u64{1} << depth);

    DyadicCover cover;
    cover.m = m;
    cover.depth = depth;
    cover.anchor = anchor;

    std::vector<u64> prev_ranks;  // sorted lex ranks of C(2^{i-1})
    for (u64 i = 1; i <= depth; ++i) {
        u64 k = u64{1} << i;
        auto grid = grid_cubes_inside(region, k, anchor);
        std::vector<u64> ranks;  // lex order by construction of the scan
        ranks.reserve(grid.size());
        for (const auto& cube : grid) ranks.push_back(cube.lex_rank());

        std::vector<AnchoredCube> layer;
        if (i == 1) {
            layer = std::move(grid);
        } else {
            for (auto& cube : grid) {
                AnchoredCube parent;
                parent.level = k / 2;
                parent.coords.reserve(cube.coords.size());
                for (u64 u : cube.coords) parent.coords.push_back(u / 2);
                bool parent_inside =
                    std::binary_search(prev_ranks.begin(), prev_ranks.end(), parent.lex_rank());
                if (!parent_inside) layer.push_back(std::move(cube));
            }
        }
        prev_ranks = std::move(ranks);
        cover.layers.push_back(std::move(layer));
    }
    return cover;
}

std::size_t DyadicCover::total_cubes() const {
    std::size_t t = 0;
    for (const auto& l : layers) t += l.size();
    return t;
}

std::optional<std::pair<u64, std::size_t>> DyadicCover::locate_lattice(
    std::span<const u64> x, const PrimeModulus& p) const {
    const u64 pv = p.value();
    const u128 den = static_cast<u128>(pv) << kFixedBits;
    for (u64 i = 1; i <= depth; ++i) {
        const auto& layer = layers[static_cast<std::size_t>(i - 1)];
        if (layer.empty()) continue;
        u64 k = u64{1} << i;
        AnchoredCube probe;
        probe.level = k;
        probe.coords.reserve(static_cast<std::size_t>(m));
        for (int j = 0; j < m; ++j) {
            u128 xnum = static_cast<u128>(x[static_cast<std::size_t>(j)] % pv) << kFixedBits;
            u128 gnum = static_cast<u128>(anchor.gamma[static_cast<std::size_t>(j)]) * pv;
            u128 t = xnum >= gnum ? xnum - gnum : xnum + den - gnum;
            probe.coords.push_back(static_cast<u64>((t * k) / den));
        }
        u64 r = probe.lex_rank();
        auto it = std::lower_bound(layer.begin(), layer.end(), r,
                                   [](const AnchoredCube& c, u64 rank) { return c.lex_rank() < rank; });
        if (it != layer.end() && it->lex_rank() == r)
            return std::make_pair(i, static_cast<std::size_t>(it - layer.begin()));
    }
    return std::nullopt;
}

CoverDiagnostics cover_diagnostics(const DyadicCover& cover, const region::Region& region) {
    CoverDiagnostics diag;
    const int m = cover.m;
    const u64 M = cover.depth;
    const double mu = region.measure();

    // exact union: sum over layers of #B_i * 2^{-im}, accumulated over the
    // common denominator 2^{Mm} (disjointness makes this an identity)
    u128 numer = 0;
    for (u64 i = 1; i <= M; ++i) {
        u128 scale = u128{1} << ((M - i) * static_cast<u64>(m));
        numer += static_cast<u128>(cover.layers[static_cast<std::size_t>(i - 1)].size()) * scale;
    }
    double denom = std::ldexp(1.0, static_cast<int>(M) * m);
    diag.union_measure = static_cast<double>(numer) / denom;
    diag.deficiency = mu - diag.union_measure;

    for (u64 i = 1; i <= M; ++i) {
        LayerDiagnostics ld;
        ld.layer = i;
        ld.count = cover.layers[static_cast<std::size_t>(i - 1)].size();
        double growth = std::ldexp(1.0, static_cast<int>(i) * (m - 1));
        ld.ratio_ws = static_cast<double>(ld.count) / growth;
        ld.ratio_vws = static_cast<double>(ld.count) /
                       (1.0 + std::pow(mu, static_cast<double>(m - 1) / m) * growth);
        diag.layers.push_back(ld);
    }

    double eps = std::ldexp(1.0, -static_cast<int>(M));
    diag.deficiency_ratio_ws = diag.deficiency / eps;
    diag.deficiency_ratio_vws =
        diag.deficiency /
        (std::pow(mu, static_cast<double>(m - 1) / m) * eps + std::pow(eps, m));
    return diag;
}

u64 depth_for_policy(DepthPolicy policy, const PrimeModulus& p, int n, u64 explicit_depth) {
    const u64 pv = p.value();
    switch (policy) {
        case DepthPolicy::Thm1: {
            u64 M = 0;
            while ((u128{1} << (2 * (M + 1))) <= pv) ++M;  // largest M with 4^M <= p
            return std::max<u64>(M, 1);
        }
        case DepthPolicy::Thm2: {
            u64 M = 0;
            while ((u128{1} << (M + 1)) <= pv) ++M;  // largest M with 2^M <= p
            return std::max<u64>(M, 1);
        }
        case DepthPolicy::Thm3: {
            double target = std::pow(static_cast<double>(pv), -1.0 / (2.0 * (n + 1))) * p.log();
            // smallest M with 2^-M <= target
            double M = std::ceil(-std::log2(std::min(target, 1.0)));
            return std::max<u64>(static_cast<u64>(M), 1);
        }
        case DepthPolicy::Explicit:
            if (explicit_depth < 1) throw std::invalid_argument("explicit depth must be >= 1");
            return explicit_depth;
    }
    return 1;
}

void export_cover_jsonl(const DyadicCover& cover, std::ostream& os) {
    for (u64 i = 1; i <= cover.depth; ++i) {
        for (const auto& cube : cover.layers[static_cast<std::size_t>(i - 1)]) {
            os << "{\"level\":" << cube.level << ",\"coords\":[";
            for (std::size_t j = 0; j < cube.coords.size(); ++j)
                os << (j ? "," : "") << cube.coords[j];
            os << "],\"layer\":" << i << "}\n";
        }
    }
}

void export_diagnostics_csv(const CoverDiagnostics& diag, std::ostream& os) {
    os << "i,count,ratio_ws,ratio_vws\n";
    for (const auto& ld : diag.layers)
        os << ld.layer << "," << ld.count << "," << format_double(ld.ratio_ws) << ","
           << format_double(ld.ratio_vws) << "\n";
}

}  // namespace equilab::dyadic
