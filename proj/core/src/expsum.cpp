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

#include "equilab/expsum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "equilab/errors.hpp"

namespace equilab::expsum {

namespace {

u64 reduce_signed(i64 v, u64 p) {
    i64 r = v % static_cast<i64>(p);
    if (r < 0) r += static_cast<i64>(p);
    return static_cast<u64>(r);
}

struct Roots {
    std::vector<double> re, im;
    explicit Roots(u64 p) : re(p), im(p) {
        for (u64 t = 0; t < p; ++t) {
            double ang = 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(p);
            re[t] = std::cos(ang);
            im[t] = std::sin(ang);
        }
    }
};

// pairwise (cascade) summation; keeps rounding error logarithmic in the
// term count
double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 32) {
        double s = 0;
        for (double x : v) s += x;
        return s;
    }
    std::size_t half = v.size() / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

std::complex<double> histogram_to_sum(std::span<const u64> hist, const Roots& roots) {
    std::vector<double> res, ims;
    res.reserve(hist.size());
    ims.reserve(hist.size());
    for (std::size_t t = 0; t < hist.size(); ++t) {
        if (hist[t] == 0) continue;
        double c = static_cast<double>(hist[t]);
        res.push_back(c * roots.re[t]);
        ims.push_back(c * roots.im[t]);
    }
    return {pairwise_sum(res), pairwise_sum(ims)};
}

void check_coeff_len(const poly::PolySystem& system, std::span<const i64> a) {
    if (static_cast<int>(a.size()) != system.n())
        throw std::invalid_argument("coefficient vector length does not match system size");
}

std::string cube_range_string(std::span<const i64> corner, u64 width) {
    std::ostringstream os;
    os << "cube(corner=(";
    for (std::size_t j = 0; j < corner.size(); ++j) os << (j ? "," : "") << corner[j];
    os << "),w=" << width << ")";
    return os.str();
}

// walks x over the cube [corner, corner+width]^m (residues mod p) and hands
// each point to fn
template <typename Fn>
void for_each_cube_point(int m, const PrimeModulus& p, std::span<const i64> corner, u64 width,
                         Fn&& fn) {
    const u64 pv = p.value();
    if (width < 1 || width >= pv)
        throw guard_error("cube width must satisfy 1 <= w < p");
    u128 total = 1;
    for (int j = 0; j < m; ++j) {
        total *= width + 1;
        if (total > kCubePointGuard)
            throw guard_error("cube point guard exceeded: (w+1)^m > 10^9");
    }
    if (static_cast<int>(corner.size()) != m)
        throw std::invalid_argument("cube corner dimension does not match system");

    std::vector<std::vector<u64>> residues(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
        auto& r = residues[static_cast<std::size_t>(j)];
        r.reserve(width + 1);
        u64 base = reduce_signed(corner[static_cast<std::size_t>(j)], pv);
        for (u64 i = 0; i <= width; ++i) {
            r.push_back(base);
            base = base + 1 == pv ? 0 : base + 1;
        }
    }

    std::vector<u64> idx(static_cast<std::size_t>(m), 0);
    std::vector<u64> x(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) x[static_cast<std::size_t>(j)] = residues[static_cast<std::size_t>(j)][0];
    for (u128 c = 0; c < total; ++c) {
        fn(std::span<const u64>(x));
        for (int j = m - 1; j >= 0; --j) {
            auto& ij = idx[static_cast<std::size_t>(j)];
            if (++ij <= width) {
                x[static_cast<std::size_t>(j)] = residues[static_cast<std::size_t>(j)][ij];
                break;
            }
            ij = 0;
            x[static_cast<std::size_t>(j)] = residues[static_cast<std::size_t>(j)][0];
        }
    }
}

template <typename PointIter>
ExpSumResult sum_over(const poly::PolySystem& system, std::span<const i64> a,
                      const PrimeModulus& p, Evaluator ev, u64 point_count, std::string range,
                      PointIter&& iterate) {
    check_coeff_len(system, a);
    const u64 pv = p.value();
    std::vector<u64> ar(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) ar[j] = reduce_signed(a[j], pv);
    auto combined = poly::linear_combination(system, ar, p);

    ExpSumResult out;
    out.a.a.assign(a.begin(), a.end());
    out.p = pv;
    out.point_count = point_count;
    out.range = std::move(range);

    if (ev == Evaluator::Histogram) {
        std::vector<u64> hist(pv, 0);
        iterate([&](std::span<const u64> x) { ++hist[combined.eval_mod(x, p)]; });
        Roots roots(pv);
        out.value = histogram_to_sum(hist, roots);
    } else {
        double re = 0, im = 0;
        iterate([&](std::span<const u64> x) {
            u64 t = combined.eval_mod(x, p);
            double ang = 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(pv);
            re += std::cos(ang);
            im += std::sin(ang);
        });
        out.value = {re, im};
    }
    return out;
}

}  // namespace

ExpSumResult exp_sum_cube(const poly::PolySystem& system, std::span<const i64> a,
                          const PrimeModulus& p, std::span<const i64> corner, u64 width,
                          Evaluator ev) {
    u128 total = 1;
    for (int j = 0; j < system.m; ++j) {
        total *= width + 1;
        if (total > kCubePointGuard)
            throw guard_error("cube point guard exceeded: (w+1)^m > 10^9");
    }
    return sum_over(
        system, a, p, ev, static_cast<u64>(total), cube_range_string(corner, width),
        [&](auto&& fn) { for_each_cube_point(system.m, p, corner, width, fn); });
}

ExpSumResult exp_sum_region(const poly::PolySystem& system, std::span<const i64> a,
                            const PrimeModulus& p, const region::Region& region, Evaluator ev) {
    auto points = region.lattice_points(p);
    auto res = exp_sum_points(system, a, p, points, ev);
    res.range = region.describe();
    return res;
}

ExpSumResult exp_sum_points(const poly::PolySystem& system, std::span<const i64> a,
                            const PrimeModulus& p, const region::PointList& points, Evaluator ev) {
    if (points.m != system.m)
        throw std::invalid_argument("point list dimension does not match system");
    return sum_over(system, a, p, ev, points.size(), "points(" + std::to_string(points.size()) + ")",
                    [&](auto&& fn) {
                        for (std::size_t i = 0; i < points.size(); ++i) fn(points.row(i));
                    });
}

namespace {

void build_table(const poly::PolySystem& system, const PrimeModulus& p,
                 const std::function<void(const std::function<void(std::span<const u64>)>&)>& iterate,
                 std::vector<u64>* out_counts, std::vector<u64>* out_residues) {
    const u64 pv = p.value();
    const int n = system.n();
    u128 rank_span = 1;
    for (int j = 0; j < n; ++j) {
        rank_span *= pv;
        if (rank_span > (u128{1} << 62))
            throw guard_error("value-vector rank overflow: p^n too large to tabulate");
    }

    std::vector<poly::MvPolynomial> reduced;
    reduced.reserve(static_cast<std::size_t>(n));
    for (const auto& g : system.polys) reduced.push_back(g.reduced_mod(p));

    const bool dense = rank_span <= (u128{1} << 24);
    std::vector<u64> dense_counts;
    std::unordered_map<u64, u64> sparse_counts;
    if (dense) dense_counts.assign(static_cast<std::size_t>(rank_span), 0);

    iterate([&](std::span<const u64> x) {
        u64 rank = 0;
        for (int j = n - 1; j >= 0; --j)
            rank = rank * pv + reduced[static_cast<std::size_t>(j)].eval_mod(x, p);
        if (dense)
            ++dense_counts[rank];
        else
            ++sparse_counts[rank];
    });

    std::vector<std::pair<u64, u64>> pairs;
    if (dense) {
        for (u64 r = 0; r < dense_counts.size(); ++r)
            if (dense_counts[r]) pairs.emplace_back(r, dense_counts[r]);
    } else {
        pairs.assign(sparse_counts.begin(), sparse_counts.end());
        std::sort(pairs.begin(), pairs.end());
    }

    out_counts->clear();
    out_residues->clear();
    out_counts->reserve(pairs.size());
    out_residues->reserve(pairs.size() * static_cast<std::size_t>(n));
    for (auto [rank, count] : pairs) {
        out_counts->push_back(count);
        for (int j = 0; j < n; ++j) {
            out_residues->push_back(rank % pv);
            rank /= pv;
        }
    }
}

}  // namespace

ValueTable ValueTable::over_cube(const poly::PolySystem& system, const PrimeModulus& p,
                                 std::span<const i64> corner, u64 width) {
    ValueTable t;
    t.p_ = p.value();
    t.n_ = system.n();
    u128 total = 1;
    for (int j = 0; j < system.m; ++j) {
        total *= width + 1;
        if (total > kCubePointGuard)
            throw guard_error("cube point guard exceeded: (w+1)^m > 10^9");
    }
    t.point_count_ = static_cast<u64>(total);
    t.range_ = cube_range_string(corner, width);
    build_table(
        system, p,
        [&](const std::function<void(std::span<const u64>)>& fn) {
            for_each_cube_point(system.m, p, corner, width, fn);
        },
        &t.counts_, &t.residues_);
    return t;
}

ValueTable ValueTable::over_region(const poly::PolySystem& system, const PrimeModulus& p,
                                   const region::Region& region) {
    auto points = region.lattice_points(p);
    ValueTable t = over_points(system, p, points);
    t.range_ = region.describe();
    return t;
}

ValueTable ValueTable::over_points(const poly::PolySystem& system, const PrimeModulus& p,
                                   const region::PointList& points) {
    if (points.m != system.m)
        throw std::invalid_argument("point list dimension does not match system");
    ValueTable t;
    t.p_ = p.value();
    t.n_ = system.n();
    t.point_count_ = points.size();
    t.range_ = "points(" + std::to_string(points.size()) + ")";
    build_table(
        system, p,
        [&](const std::function<void(std::span<const u64>)>& fn) {
            for (std::size_t i = 0; i < points.size(); ++i) fn(points.row(i));
        },
        &t.counts_, &t.residues_);
    return t;
}

std::complex<double> ValueTable::sum_for(std::span<const i64> a) const {
    if (static_cast<int>(a.size()) != n_)
        throw std::invalid_argument("coefficient vector length does not match table");
    std::vector<u64> ar(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) ar[j] = reduce_signed(a[j], p_);
    Roots roots(p_);
    std::vector<u64> hist(p_, 0);
    const std::size_t d = counts_.size();
    for (std::size_t i = 0; i < d; ++i) {
        u64 t = 0;
        for (int j = 0; j < n_; ++j)
            t = (t + ar[static_cast<std::size_t>(j)] * residues_[i * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j)]) % p_;
        hist[t] += counts_[i];
    }
    return histogram_to_sum(hist, roots);
}

u64 admissible_scan_bound(const PrimeModulus& p, int n) {
    u64 best = 1;
    for (u64 L = 1; L <= (p.value() - 1) / 2; ++L) {
        u128 span = 1;
        bool ok = true;
        for (int j = 0; j < n; ++j) {
            span *= 2 * L + 1;
            if (span - 1 > kScanGuard) {
                ok = false;
                break;
            }
        }
        if (!ok) break;
        best = L;
    }
    return best;
}

MaxScanResult max_exp_sum(const ValueTable& table, u64 L) {
    if (L < 1) throw std::invalid_argument("scan bound L must be >= 1");
    const int n = table.n();
    u128 span = 1;
    for (int j = 0; j < n; ++j) {
        span *= 2 * L + 1;
        if (span - 1 > kScanGuard) throw guard_error("coefficient scan guard exceeded: (2L+1)^n - 1 > 10^7");
    }
    const u64 pv = table.p();
    Roots roots(pv);
    const std::size_t d = table.counts().size();
    const auto& counts = table.counts();
    const auto& residues = table.residues();

    MaxScanResult out;
    out.L = L;
    out.argmax.a.assign(static_cast<std::size_t>(n), 0);
    double best_sq = -1.0;

    std::vector<i64> a(static_cast<std::size_t>(n), -static_cast<i64>(L));
    std::vector<u64> ar(static_cast<std::size_t>(n));
    std::vector<u64> hist(pv);
    const i64 Li = static_cast<i64>(L);

    for (;;) {
        // canonical half: first nonzero coordinate positive
        int first_nonzero = -1;
        for (int j = 0; j < n; ++j)
            if (a[static_cast<std::size_t>(j)] != 0) {
                first_nonzero = j;
                break;
            }
        if (first_nonzero >= 0 && a[static_cast<std::size_t>(first_nonzero)] > 0) {
            for (int j = 0; j < n; ++j) ar[static_cast<std::size_t>(j)] = reduce_signed(a[static_cast<std::size_t>(j)], pv);
            std::fill(hist.begin(), hist.end(), 0);
            for (std::size_t i = 0; i < d; ++i) {
                u64 t = 0;
                for (int j = 0; j < n; ++j)
                    t = (t + ar[static_cast<std::size_t>(j)] * residues[i * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)]) % pv;
                hist[t] += counts[i];
            }
            auto s = histogram_to_sum(hist, roots);
            double sq = std::norm(s);
            ++out.scanned;
            if (sq > best_sq) {
                best_sq = sq;
                out.argmax.a.assign(a.begin(), a.end());
            }
        }
        // odometer
        int j = n - 1;
        for (; j >= 0; --j) {
            if (a[static_cast<std::size_t>(j)] < Li) {
                ++a[static_cast<std::size_t>(j)];
                break;
            }
            a[static_cast<std::size_t>(j)] = -Li;
        }
        if (j < 0) break;
    }
    out.s_star = best_sq <= 0 ? 0.0 : std::sqrt(best_sq);
    return out;
}

double fk_envelope(const PrimeModulus& p, u64 width, int m) {
    return p.sqrt() * std::pow(static_cast<double>(width), m - 1) * p.log();
}

double fk_ratio(const poly::PolySystem& system, const PrimeModulus& p, std::span<const i64> corner,
                u64 width, u64 L_scan) {
    auto ind = poly::degree2_independent(system, p);
    if (!ind.independent)
        throw std::invalid_argument(
            "system is not degree-2 independent; the cube-sum envelope does not apply");
    auto table = ValueTable::over_cube(system, p, corner, width);
    auto scan = max_exp_sum(table, L_scan);
    return scan.s_star / fk_envelope(p, width, system.m);
}

namespace {

constexpr char kTableMagic[4] = {'E', 'Q', 'T', '1'};

void put_u32(std::string& buf, u32 v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_u64(std::string& buf, u64 v) {
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
u32 get_u32(const unsigned char* b) {
    u32 v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
    return v;
}
u64 get_u64(const unsigned char* b) {
    u64 v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
}

u64 fnv1a(const std::string& s) {
    u64 h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex16(u64 v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace

std::filesystem::path table_cache_path(const std::filesystem::path& dir, u64 system_hash, u64 p,
                                       const std::string& range) {
    return dir / ("vtab_" + hex16(system_hash) + "_p" + std::to_string(p) + "_" +
                  hex16(fnv1a(range)) + ".bin");
}

void table_cache_store(const std::filesystem::path& dir, u64 system_hash,
                       const ValueTable& table) {
    std::filesystem::create_directories(dir);
    std::string buf;
    buf.append(kTableMagic, 4);
    put_u32(buf, 1);  // version
    put_u64(buf, table.p());
    put_u32(buf, static_cast<u32>(table.n()));
    put_u64(buf, table.point_count());
    put_u64(buf, table.distinct_count());
    put_u32(buf, static_cast<u32>(table.range().size()));
    buf += table.range();
    for (u64 c : table.counts()) put_u64(buf, c);
    for (u64 r : table.residues()) put_u32(buf, static_cast<u32>(r));

    auto final_path = table_cache_path(dir, system_hash, table.p(), table.range());
    auto tmp = final_path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot write table cache " + tmp.string());
        os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    }
    std::filesystem::rename(tmp, final_path);
}

std::optional<ValueTable> table_cache_load(const std::filesystem::path& dir, u64 system_hash,
                                           u64 p, const std::string& range) {
    auto path = table_cache_path(dir, system_hash, p, range);
    std::ifstream is(path, std::ios::binary);
    if (!is) return std::nullopt;
    std::string buf((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    if (buf.size() < 40) return std::nullopt;
    const auto* b = reinterpret_cast<const unsigned char*>(buf.data());
    if (std::memcmp(b, kTableMagic, 4) != 0 || get_u32(b + 4) != 1) return std::nullopt;

    ValueTable t;
    t.p_ = get_u64(b + 8);
    t.n_ = static_cast<int>(get_u32(b + 16));
    t.point_count_ = get_u64(b + 20);
    u64 distinct = get_u64(b + 28);
    u32 range_len = get_u32(b + 36);
    std::size_t off = 40;
    if (buf.size() < off + range_len) return std::nullopt;
    t.range_ = buf.substr(off, range_len);
    off += range_len;
    if (t.p_ != p || t.range_ != range) return std::nullopt;
    std::size_t need = off + distinct * 8 + distinct * static_cast<std::size_t>(t.n_) * 4;
    if (buf.size() != need) return std::nullopt;
    t.counts_.reserve(distinct);
    for (u64 i = 0; i < distinct; ++i) {
        t.counts_.push_back(get_u64(b + off));
        off += 8;
    }
    t.residues_.reserve(distinct * static_cast<std::size_t>(t.n_));
    for (u64 i = 0; i < distinct * static_cast<u64>(t.n_); ++i) {
        t.residues_.push_back(get_u32(b + off));
        off += 4;
    }
    return t;
}

ValueTable over_cube_cached(const poly::PolySystem& system, const PrimeModulus& p,
                            std::span<const i64> corner, u64 width,
                            const std::optional<std::filesystem::path>& cache_dir) {
    std::string range;
    {
        std::ostringstream os;
        os << "cube(corner=(";
        for (std::size_t j = 0; j < corner.size(); ++j) os << (j ? "," : "") << corner[j];
        os << "),w=" << width << ")";
        range = os.str();
    }
    if (cache_dir) {
        if (auto hit = table_cache_load(*cache_dir, system.hash(), p.value(), range)) return *hit;
    }
    auto table = ValueTable::over_cube(system, p, corner, width);
    if (cache_dir) table_cache_store(*cache_dir, system.hash(), table);
    return table;
}

void export_scan_csv(const ValueTable& table, u64 L, double ratio_denom, std::ostream& os) {
    const int n = table.n();
    for (int j = 1; j <= n; ++j) os << "a" << j << ",";
    os << "re,im,abs,ratio\n";
    std::vector<i64> a(static_cast<std::size_t>(n), -static_cast<i64>(L));
    const i64 Li = static_cast<i64>(L);
    for (;;) {
        int first_nonzero = -1;
        for (int j = 0; j < n; ++j)
            if (a[static_cast<std::size_t>(j)] != 0) {
                first_nonzero = j;
                break;
            }
        if (first_nonzero >= 0 && a[static_cast<std::size_t>(first_nonzero)] > 0) {
            auto s = table.sum_for(a);
            double absval = std::abs(s);
            for (int j = 0; j < n; ++j) os << a[static_cast<std::size_t>(j)] << ",";
            os << format_double(s.real()) << "," << format_double(s.imag()) << ","
               << format_double(absval) << ","
               << format_double(ratio_denom > 0 ? absval / ratio_denom : 0.0) << "\n";
        }
        int j = n - 1;
        for (; j >= 0; --j) {
            if (a[static_cast<std::size_t>(j)] < Li) {
                ++a[static_cast<std::size_t>(j)];
                break;
            }
            a[static_cast<std::size_t>(j)] = -Li;
        }
        if (j < 0) break;
    }
}

}  // namespace equilab::expsum
