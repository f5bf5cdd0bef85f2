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

#ifndef EQUILAB_DYADIC_HPP
#define EQUILAB_DYADIC_HPP

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "equilab/region.hpp"

namespace equilab::dyadic {

inline constexpr u64 kMaxGridSide = u64{1} << 20;  // k cap per grid level

/// Grid offset with exact 2^-63 fixed-point coordinates.  Numerators are kept
/// odd, so no grid line gamma_j + u/k (k any power of two times an odd
/// denominator below 2^63) can ever pass through a rational point x/p; the
/// explicit forbidden-denominator check below re-verifies that.
struct Anchor {
    std::vector<u64> gamma;

    int dim() const { return static_cast<int>(gamma.size()); }
};

/// Exact check: does gamma_raw/2^63 equal u/denominator for some integer u?
bool anchor_collides(u64 gamma_raw, u64 denominator);

/// Deterministic anchor from a seed; coordinates are redrawn while they are
/// even or collide with one of the forbidden denominators (k*p products).
Anchor draw_anchor(int m, u64 seed, std::span<const u64> forbidden_denominators = {});

/// Denominators k*p for k = 2, 4, ..., 2^depth, used to pre-clear an anchor
/// for covers that will be intersected with lattice points of a prime p.
std::vector<u64> forbidden_denominators(u64 depth, std::span<const u64> primes);

/// One cube of the anchored grid c(k): coordinate j covers
/// [gamma_j + u_j/k, gamma_j + (u_j+1)/k] mod 1.
struct AnchoredCube {
    u64 level = 1;            // k; covers use powers of two
    std::vector<u64> coords;  // u_j in [0, k)

    region::ExactCube to_exact(const Anchor& anchor) const;
    /// Lexicographic index of coords in [0, k)^m; fits u64 under the k^m guard.
    u64 lex_rank() const;
    /// Exact: does x/p lie in this closed cube?
    bool contains_lattice(std::span<const u64> x, const PrimeModulus& p, const Anchor& anchor) const;
    /// Exact: does x/p lie on the cube's boundary grid lines?
    bool lattice_on_boundary(std::span<const u64> x, const PrimeModulus& p, const Anchor& anchor) const;
};

/// C(k): the anchored grid cubes certified inside the region, in coordinate
/// scan order.  Guard: k <= 2^20 and k^m <= 10^9.
std::vector<AnchoredCube> grid_cubes_inside(const region::Region& region, u64 k,
                                            const Anchor& anchor);

/// Whitney-style layered cover: layer 1 holds C(2); layer i >= 2 holds the
/// cubes of C(2^i) whose grid parent is not in C(2^(i-1)).  All cubes are
/// certified inside the region and pairwise interior-disjoint.
struct DyadicCover {
    int m = 0;
    u64 depth = 0;  // M
    Anchor anchor;
    std::vector<std::vector<AnchoredCube>> layers;

    std::size_t total_cubes() const;
    /// Index of the cover cube containing x/p, if any: (layer index 1-based,
    /// position within the layer).
    std::optional<std::pair<u64, std::size_t>> locate_lattice(std::span<const u64> x,
                                                              const PrimeModulus& p) const;
};

DyadicCover build_cover(const region::Region& region, u64 depth, const Anchor& anchor);

struct LayerDiagnostics {
    u64 layer = 0;        // i
    std::size_t count = 0;  // #B_i
    double ratio_ws = 0;    // #B_i / 2^{i(m-1)}
    double ratio_vws = 0;   // #B_i / (1 + mu^{(m-1)/m} 2^{i(m-1)})
};

struct CoverDiagnostics {
    std::vector<LayerDiagnostics> layers;
    double union_measure = 0;  // exact dyadic sum of layer volumes
    double deficiency = 0;     // mu(region) - union_measure
    double deficiency_ratio_ws = 0;   // deficiency / 2^-M
    double deficiency_ratio_vws = 0;  // deficiency / (mu^{(m-1)/m} 2^-M + 2^-Mm)
};

CoverDiagnostics cover_diagnostics(const DyadicCover& cover, const region::Region& region);

enum class DepthPolicy { Thm1, Thm2, Thm3, Explicit };

/// Depth selection per experiment: Thm1 picks the largest M with 2^M <=
/// sqrt(p); Thm2 the largest with 2^M <= p; Thm3 the smallest M with 2^-M <=
/// p^{-1/(2(n+1))} log p.  Always at least 1.
u64 depth_for_policy(DepthPolicy policy, const PrimeModulus& p, int n, u64 explicit_depth = 0);

/// JSON lines, one record per cube: {"level":..,"coords":[..],"layer":..}
void export_cover_jsonl(const DyadicCover& cover, std::ostream& os);
/// CSV with header i,count,ratio_ws,ratio_vws
void export_diagnostics_csv(const CoverDiagnostics& diag, std::ostream& os);

}  // namespace equilab::dyadic

#endif
