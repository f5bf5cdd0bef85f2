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

#ifndef EQUILAB_VARIETY_HPP
#define EQUILAB_VARIETY_HPP

#include <filesystem>
#include <optional>
#include <span>

#include "equilab/dyadic.hpp"
#include "equilab/poly.hpp"
#include "equilab/region.hpp"

namespace equilab::variety {

/// All solutions in {0..p-1}^m of F_j(x) = 0 mod p for every j, sorted
/// lexicographically, duplicate-free.  nu (the configured component count)
/// is user-supplied: computing it is out of scope by design.
struct SolutionSet {
    u64 p = 0;
    int m = 0, n = 0;
    u64 system_hash = 0;
    std::vector<u64> solutions;  // row-major
    std::optional<u64> nu;

    std::size_t count() const {
        return m == 0 ? 0 : solutions.size() / static_cast<std::size_t>(m);
    }
    std::span<const u64> row(std::size_t i) const {
        return {solutions.data() + i * static_cast<std::size_t>(m), static_cast<std::size_t>(m)};
    }
};

/// Exhaustive grid scan with per-point early exit on the first failing
/// polynomial.  Guard: p^m <= 10^9.
SolutionSet solve_system(const poly::PolySystem& zero_system, const PrimeModulus& p);

/// #(X_p intersect p*region), exact membership per solution.
u64 count_in_region(const SolutionSet& sol, const region::Region& region);

/// Solutions x with x/p in the closed anchored cube.
u64 count_in_cube(const SolutionSet& sol, const dyadic::AnchoredCube& cube,
                  const dyadic::Anchor& anchor);

/// (#X_p - nu * p^{m-n}) / p^{m-n-1/2}; requires configured nu >= 1.
double lang_weil_residual(const SolutionSet& sol);

/// (T_p(cube) - #X_p k^{-m}) normalized by the cube-count error envelope
/// p^{(m-n)/2} (log p)^m + k^{-(m-n-1)} p^{m-n-1/2} (log p)^{n+1}.
double fouvry_cube_residual(const SolutionSet& sol, const dyadic::AnchoredCube& cube,
                            const dyadic::Anchor& anchor);

/// (T_p(region)/#X_p - mu) normalized by
/// mu^{1-1/m} p^{-1/(2(n+1))} log p + p^{-1/2} (log p)^{n+2}.
/// Region must be a ball, a complement of one, or the full torus.
double theorem3_residual(const SolutionSet& sol, const region::Region& region);

// ---- on-disk cache -------------------------------------------------------
// Binary file keyed by (system hash, p): fixed little-endian header followed
// by packed u32 coordinates.  Writes go to a temp file renamed into place.

std::filesystem::path cache_path(const std::filesystem::path& dir, u64 system_hash, u64 p);
void cache_store(const std::filesystem::path& dir, const SolutionSet& sol);
std::optional<SolutionSet> cache_load(const std::filesystem::path& dir, u64 system_hash, u64 p);

/// solve_system with a read-through cache when cache_dir is set.
SolutionSet solve_system_cached(const poly::PolySystem& zero_system, const PrimeModulus& p,
                                const std::optional<std::filesystem::path>& cache_dir);

}  // namespace equilab::variety

#endif
