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

#ifndef EQUILAB_EXPSUM_HPP
#define EQUILAB_EXPSUM_HPP

#include <complex>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "equilab/poly.hpp"
#include "equilab/region.hpp"

namespace equilab::expsum {

inline constexpr u128 kCubePointGuard = 1'000'000'000;  // (w+1)^m cap
inline constexpr u64 kScanGuard = 10'000'000;           // (2L+1)^n - 1 cap

struct CoeffVector {
    std::vector<i64> a;
};

struct ExpSumResult {
    std::complex<double> value;
    CoeffVector a;
    std::string range;  // "cube(corner=...,w=...)" or a region description
    u64 p = 0;
    u64 point_count = 0;

    double abs() const { return std::abs(value); }
};

/// Two interchangeable evaluators.  Histogram tabulates the residue counts
/// N_t of the combined polynomial in one pass and finishes with a pairwise
/// sum over p roots of unity; Naive accumulates one complex exponential per
/// point.  They must agree to 1e-9 relative and are kept as an oracle pair.
enum class Evaluator { Histogram, Naive };

/// Sum of e(2*pi*i * (sum_j a_j G_j(x)) / p) over the cube x_j in
/// [corner_j, corner_j + width], coordinates reduced mod p.
/// Guards: 1 <= width < p and (width+1)^m <= 10^9.
ExpSumResult exp_sum_cube(const poly::PolySystem& system, std::span<const i64> a,
                          const PrimeModulus& p, std::span<const i64> corner, u64 width,
                          Evaluator ev = Evaluator::Histogram);

/// Same sum over the lattice points of p * region.
ExpSumResult exp_sum_region(const poly::PolySystem& system, std::span<const i64> a,
                            const PrimeModulus& p, const region::Region& region,
                            Evaluator ev = Evaluator::Histogram);

ExpSumResult exp_sum_points(const poly::PolySystem& system, std::span<const i64> a,
                            const PrimeModulus& p, const region::PointList& points,
                            Evaluator ev = Evaluator::Histogram);

/// Compressed table of the value vectors (G_1(x), ..., G_n(x)) over a point
/// range: each distinct vector once, with its multiplicity.  Built once and
/// shared by coefficient scans, so a scan step costs O(#distinct + p) instead
/// of re-evaluating polynomials.
class ValueTable {
   public:
    static ValueTable over_cube(const poly::PolySystem& system, const PrimeModulus& p,
                                std::span<const i64> corner, u64 width);
    static ValueTable over_region(const poly::PolySystem& system, const PrimeModulus& p,
                                  const region::Region& region);
    static ValueTable over_points(const poly::PolySystem& system, const PrimeModulus& p,
                                  const region::PointList& points);

    u64 p() const { return p_; }
    int n() const { return n_; }
    u64 point_count() const { return point_count_; }
    std::size_t distinct_count() const { return counts_.size(); }
    const std::vector<u64>& counts() const { return counts_; }
    /// residues()[i*n + j] = j-th coordinate of the i-th distinct vector
    const std::vector<u64>& residues() const { return residues_; }
    const std::string& range() const { return range_; }

    std::complex<double> sum_for(std::span<const i64> a) const;

   private:
    friend std::optional<ValueTable> table_cache_load(const std::filesystem::path&, u64, u64,
                                                      const std::string&);
    u64 p_ = 0;
    int n_ = 0;
    u64 point_count_ = 0;
    std::vector<u64> counts_;
    std::vector<u64> residues_;
    std::string range_;
};

struct MaxScanResult {
    double s_star = 0;
    CoeffVector argmax;  // canonical sign: first nonzero coordinate positive
    u64 L = 0;
    u64 scanned = 0;  // coefficient vectors evaluated (canonical half)
};

/// max |S(a)| over nonzero a with |a_j| <= L.  Conjugate symmetry
/// S(-a) = conj(S(a)) halves the scan; ties resolve to the lexicographically
/// first argmax.  Guard: (2L+1)^n - 1 <= 10^7.
MaxScanResult max_exp_sum(const ValueTable& table, u64 L);

/// Largest L with (2L+1)^n - 1 within the scan guard, capped at (p-1)/2.
u64 admissible_scan_bound(const PrimeModulus& p, int n);

/// sqrt(p) * w^(m-1) * log p, the cube-sum envelope for independence-backed
/// systems.
double fk_envelope(const PrimeModulus& p, u64 width, int m);

/// max over scanned nonzero a (|a_j| <= L_scan) of |S| / fk_envelope for one
/// cube.  Refuses systems that fail the degree-2 independence test.
double fk_ratio(const poly::PolySystem& system, const PrimeModulus& p,
                std::span<const i64> corner, u64 width, u64 L_scan = 10);

/// CSV rows a_1,...,a_n,re,im,abs,ratio over the canonical scan half; ratio
/// is abs / ratio_denom (pass fk_envelope(...) for cubes or the point count
/// for regions).
void export_scan_csv(const ValueTable& table, u64 L, double ratio_denom, std::ostream& os);

// ---- value-table disk cache ------------------------------------------------
// Binary files keyed by (system hash, p, range descriptor); sweeps that
// revisit a range skip the tabulation pass.  Writes go through a temp-file
// rename.

std::filesystem::path table_cache_path(const std::filesystem::path& dir, u64 system_hash, u64 p,
                                       const std::string& range);
void table_cache_store(const std::filesystem::path& dir, u64 system_hash, const ValueTable& table);
std::optional<ValueTable> table_cache_load(const std::filesystem::path& dir, u64 system_hash,
                                           u64 p, const std::string& range);

/// over_cube with a read-through cache when cache_dir is set.
ValueTable over_cube_cached(const poly::PolySystem& system, const PrimeModulus& p,
                            std::span<const i64> corner, u64 width,
                            const std::optional<std::filesystem::path>& cache_dir);

}  // namespace equilab::expsum

#endif
