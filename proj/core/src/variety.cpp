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

#include "equilab/variety.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "equilab/errors.hpp"
#include "equilab/parallel.hpp"

namespace equilab::variety {

SolutionSet solve_system(const poly::PolySystem& zero_system, const PrimeModulus& p) {
    if (zero_system.kind != poly::SystemKind::Zero)
        throw std::invalid_argument("solution sets are defined for zero systems");
    const u64 pv = p.value();
    const int m = zero_system.m;
    u128 total = 1;
    for (int j = 0; j < m; ++j) {
        total *= pv;
        if (total > region::kLatticeEnumGuard)
            throw guard_error("solution scan guard exceeded: p^m > 10^9");
    }

    std::vector<poly::MvPolynomial> reduced;
    for (const auto& f : zero_system.polys) reduced.push_back(f.reduced_mod(p));

    const std::size_t inner = static_cast<std::size_t>(total / pv);
    std::vector<std::vector<u64>> partial(static_cast<std::size_t>(pv));
    parallel_chunks(pv, [&](std::size_t, std::size_t begin, std::size_t end) {
        std::vector<u64> x(static_cast<std::size_t>(m), 0);
        for (std::size_t x0 = begin; x0 < end; ++x0) {
            x[0] = static_cast<u64>(x0);
            std::fill(x.begin() + 1, x.end(), 0);
            auto& out = partial[x0];
            for (std::size_t i = 0; i < inner; ++i) {
                bool zero = true;
                for (const auto& f : reduced)
                    if (f.eval_mod(x, p) != 0) {
                        zero = false;
                        break;
                    }
                if (zero) out.insert(out.end(), x.begin(), x.end());
                for (int j = m - 1; j >= 1; --j) {
                    if (++x[static_cast<std::size_t>(j)] < pv) break;
                    x[static_cast<std::size_t>(j)] = 0;
                }
            }
        }
    });

    SolutionSet sol;
    sol.p = pv;
    sol.m = m;
    sol.n = zero_system.n();
    sol.system_hash = zero_system.hash();
    for (auto& part : partial) sol.solutions.insert(sol.solutions.end(), part.begin(), part.end());
    return sol;
}

u64 count_in_region(const SolutionSet& sol, const region::Region& region) {
    PrimeModulus p(sol.p);
    u64 count = 0;
    for (std::size_t i = 0; i < sol.count(); ++i)
        count += region.contains_lattice(sol.row(i), p) ? 1 : 0;
    return count;
}

u64 count_in_cube(const SolutionSet& sol, const dyadic::AnchoredCube& cube,
                  const dyadic::Anchor& anchor) {
    PrimeModulus p(sol.p);
    u64 count = 0;
    for (std::size_t i = 0; i < sol.count(); ++i)
        count += cube.contains_lattice(sol.row(i), p, anchor) ? 1 : 0;
    return count;
}

double lang_weil_residual(const SolutionSet& sol) {
    if (!sol.nu) throw config_error("lang-weil residual needs a configured nu");
    if (*sol.nu < 1) throw config_error("nu must be >= 1 (at least one top-dimensional component)");
    const double p = static_cast<double>(sol.p);
    const int mn = sol.m - sol.n;
    double expect = static_cast<double>(*sol.nu) * std::pow(p, mn);
    return (static_cast<double>(sol.count()) - expect) / std::pow(p, mn - 0.5);
}

double fouvry_cube_residual(const SolutionSet& sol, const dyadic::AnchoredCube& cube,
                            const dyadic::Anchor& anchor) {
    const double p = static_cast<double>(sol.p);
    const double logp = std::log(p);
    const int m = sol.m, n = sol.n;
    const double k = static_cast<double>(cube.level);
    double T = static_cast<double>(count_in_cube(sol, cube, anchor));
    double main = static_cast<double>(sol.count()) * std::pow(1.0 / k, m);
    double envelope = std::pow(p, (m - n) / 2.0) * std::pow(logp, m) +
                      std::pow(1.0 / k, m - n - 1) * std::pow(p, m - n - 0.5) * std::pow(logp, n + 1);
    return (T - main) / envelope;
}

double theorem3_residual(const SolutionSet& sol, const region::Region& region) {
    using Kind = region::Region::Kind;
    Kind k = region.kind();
    bool ok = k == Kind::Ball || k == Kind::FullTorus ||
              (k == Kind::Complement && region.inner().kind() == Kind::Ball);
    if (!ok)
        throw std::invalid_argument(
            "theorem3 residual applies to balls, their complements, or the full torus");
    if (sol.count() == 0) throw std::invalid_argument("empty solution set");

    const double p = static_cast<double>(sol.p);
    const double logp = std::log(p);
    const int m = sol.m, n = sol.n;
    const double mu = region.measure();
    double T = static_cast<double>(count_in_region(sol, region));
    double envelope = std::pow(mu, 1.0 - 1.0 / m) * std::pow(p, -1.0 / (2.0 * (n + 1))) * logp +
                      std::pow(p, -0.5) * std::pow(logp, n + 2);
    return (T / static_cast<double>(sol.count()) - mu) / envelope;
}

// ---- cache ----------------------------------------------------------------

namespace {

constexpr char kMagic[4] = {'E', 'Q', 'S', '1'};

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

char hex_digit(u64 v) { return static_cast<char>(v < 10 ? '0' + v : 'a' + (v - 10)); }

}  // namespace

std::filesystem::path cache_path(const std::filesystem::path& dir, u64 system_hash, u64 p) {
    std::string name = "sol_";
    for (int i = 15; i >= 0; --i) name.push_back(hex_digit((system_hash >> (4 * i)) & 0xf));
    name += "_p" + std::to_string(p) + ".bin";
    return dir / name;
}

void cache_store(const std::filesystem::path& dir, const SolutionSet& sol) {
    std::filesystem::create_directories(dir);
    std::string buf;
    buf.append(kMagic, 4);
    put_u32(buf, 1);  // version
    put_u32(buf, static_cast<u32>(sol.m));
    put_u32(buf, static_cast<u32>(sol.n));
    put_u64(buf, sol.system_hash);
    put_u64(buf, sol.p);
    put_u64(buf, sol.count());
    for (u64 v : sol.solutions) put_u32(buf, static_cast<u32>(v));

    auto final_path = cache_path(dir, sol.system_hash, sol.p);
    auto tmp = final_path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot write cache file " + tmp.string());
        os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    }
    std::filesystem::rename(tmp, final_path);
}

std::optional<SolutionSet> cache_load(const std::filesystem::path& dir, u64 system_hash, u64 p) {
    auto path = cache_path(dir, system_hash, p);
    std::ifstream is(path, std::ios::binary);
    if (!is) return std::nullopt;
    std::string buf((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    if (buf.size() < 40) return std::nullopt;
    const auto* b = reinterpret_cast<const unsigned char*>(buf.data());
    if (std::memcmp(b, kMagic, 4) != 0) return std::nullopt;
    if (get_u32(b + 4) != 1) return std::nullopt;

    SolutionSet sol;
    sol.m = static_cast<int>(get_u32(b + 8));
    sol.n = static_cast<int>(get_u32(b + 12));
    sol.system_hash = get_u64(b + 16);
    sol.p = get_u64(b + 24);
    u64 count = get_u64(b + 32);
    if (sol.system_hash != system_hash || sol.p != p) return std::nullopt;
    std::size_t need = 40 + static_cast<std::size_t>(count) * static_cast<std::size_t>(sol.m) * 4;
    if (buf.size() != need) return std::nullopt;
    sol.solutions.reserve(static_cast<std::size_t>(count) * static_cast<std::size_t>(sol.m));
    for (std::size_t i = 0; i < count * static_cast<std::size_t>(sol.m); ++i)
        sol.solutions.push_back(get_u32(b + 40 + 4 * i));
    return sol;
}

SolutionSet solve_system_cached(const poly::PolySystem& zero_system, const PrimeModulus& p,
                                const std::optional<std::filesystem::path>& cache_dir) {
    if (cache_dir) {
        if (auto hit = cache_load(*cache_dir, zero_system.hash(), p.value())) return *hit;
    }
    auto sol = solve_system(zero_system, p);
    if (cache_dir) cache_store(*cache_dir, sol);
    return sol;
}

}  // namespace equilab::variety
