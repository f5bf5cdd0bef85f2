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

#ifndef EQUILAB_DISCREPANCY_HPP
#define EQUILAB_DISCREPANCY_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "equilab/poly.hpp"
#include "equilab/region.hpp"

namespace equilab::discrepancy {

/// Point multiset on the torus with exact rational coordinates numerator /
/// denominator.  Multiplicities count: many lattice points map to the same
/// fractional vector and each occurrence is one sequence element.
struct FractionalPointSet {
    int n = 1;
    u64 denominator = 1;
    std::vector<u64> coords;  // row-major, size() * n entries, each < denominator

    std::size_t size() const {
        return n == 0 ? 0 : coords.size() / static_cast<std::size_t>(n);
    }
    static FractionalPointSet from_rows(int n, u64 denominator, std::vector<u64> coords);
};

/// Half-open axis box prod [lo_j, hi_j) / denominator with lo <= hi (no
/// torus wrap-around).
struct Box {
    u64 denominator = 1;
    std::vector<u64> lo, hi;

    double lambda() const;
};

struct ExactDiscrepancy {
    double value = 0;
    u128 num = 0;  // value == num / den exactly
    u128 den = 1;
    Box witness;  // a box attaining the supremum (as a limit of boxes)
};

/// Exact extreme discrepancy sup |A/N - lambda| over half-open boxes.  The
/// optimal sides lie on point coordinates (or 0/1) with counts evaluated both
/// at and just beyond each coordinate; the enumeration is exact integer
/// arithmetic throughout.  Empty sets give 1.
/// Guards: n <= 2 with N <= 5000, or n == 3 with N <= 300.  Cost is cubic in
/// the number of distinct per-axis coordinates; at the guard ceiling with all
/// coordinates distinct expect minutes, not milliseconds.
ExactDiscrepancy extreme_discrepancy_exact(const FractionalPointSet& pts);

/// Never exceeds the exact value: evaluates actual boxes (random rational
/// corners and boxes spanned by random point pairs) and returns the best.
/// Deterministic under seed; empty sets give 1.
double sampled_discrepancy_lower_bound(const FractionalPointSet& pts, u64 trials, u64 seed);

/// 1/L + (log L)^n / N * s_star, the exponential-sum discrepancy bound shape
/// with implied constant 1.
double ks_bound(double s_star, u64 L, u64 N, int n);

struct DiscOptions {
    u64 L = 0;           // 0 = largest admissible (capped at (p-1)/2)
    u64 trials = 10'000; // sampled fallback candidates
    u64 seed = 0;
    bool force_sampled = false;
};

struct DiscrepancyReport {
    u64 p = 0;
    u64 system_hash = 0;
    std::string region;
    u64 N = 0;
    std::optional<double> exact_D;
    std::optional<double> sampled_D;
    double s_star = 0;
    u64 L_used = 0;
    double ks = 0;
    double thm1_ratio = 0;  // D * mu * sqrt(p) / (log p)^{n+2}
    double thm2_ratio = 0;  // D * mu^{1/m} * sqrt(p) / (log p)^{n+2}
    std::optional<Box> witness;

    double best_D() const { return exact_D ? *exact_D : sampled_D.value_or(1.0); }
};

/// Full pipeline: fractional value vectors over the lattice points of
/// p * region, exact or sampled discrepancy per guards (guard trips fall back
/// to the sampled bound), the coefficient-scan maximum, and the bound ratios.
DiscrepancyReport discrepancy_of_system(const poly::PolySystem& system, const PrimeModulus& p,
                                        const region::Region& region, const DiscOptions& opts);

}  // namespace equilab::discrepancy

#endif
