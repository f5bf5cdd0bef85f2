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

#ifndef EQUILAB_REGION_HPP
#define EQUILAB_REGION_HPP

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "equilab/fixed_point.hpp"
#include "equilab/prime.hpp"

namespace equilab::region {

/// An axis-aligned torus cube with exact rational corners, the currency
/// between grid decompositions and region certification.  Coordinate j covers
/// [lo[j], lo[j] + width] / den where den = den_factor * 2^63; lo is reduced
/// into [0, den) and lo + width > den means the interval wraps mod 1.
struct ExactCube {
    u64 den_factor = 1;
    u128 width = 0;
    std::vector<u128> lo;

    u128 den() const { return static_cast<u128>(den_factor) << kFixedBits; }
    int dim() const { return static_cast<int>(lo.size()); }
    /// Corner/width as doubles (diagnostics only; certification never uses these).
    double lo_double(int j) const;
    double width_double() const;
};

/// Monte-Carlo shell estimate; half_width == 0 marks a closed-form result.
struct ShellEstimate {
    double epsilon = 0;
    double plus_measure = 0;
    double minus_measure = 0;
    double half_width = 0;
    u64 sample_count = 0;
    /// measure / (mu^{1-1/m} eps + eps^m), the very-well-shaped yardstick
    double vws_ratio_plus = 0;
    double vws_ratio_minus = 0;
};

/// Lattice points of the dilate p*Omega, row-major, lexicographically sorted.
struct PointList {
    int m = 0;
    std::vector<u64> coords;

    std::size_t size() const { return m == 0 ? 0 : coords.size() / static_cast<std::size_t>(m); }
    std::span<const u64> row(std::size_t i) const {
        return {coords.data() + i * static_cast<std::size_t>(m), static_cast<std::size_t>(m)};
    }
};

inline constexpr u128 kLatticeEnumGuard = 1'000'000'000;  // p^m cap

/// Immutable torus-region oracle.  Membership, certification and lattice
/// filtering are exact integer arithmetic on the 2^-63 coordinate grid;
/// measures are closed-form where the kind allows and Monte-Carlo otherwise.
class Region {
   public:
    enum class Kind { FullTorus, AxisBox, Ball, Polytope, Complement };

    static Region full_torus(int m);
    /// Half-open box prod_j [lo_j, hi_j), 0 <= lo_j <= hi_j <= 1.
    static Region axis_box(std::vector<Fixed64> lo, std::vector<Fixed64> hi);
    /// Closed Euclidean ball in the quotient metric; r <= 1/2 so the ball
    /// never self-overlaps and the volume formula is exact.
    static Region ball(std::vector<Fixed64> center, Fixed64 radius);
    /// Convex polygon (m = 2 only), vertices in boundary order, no torus
    /// wrap.  Measure is Monte-Carlo with the given seed.
    static Region polytope(std::vector<std::array<Fixed64, 2>> vertices, u64 mc_seed,
                           u64 mc_samples = 1'000'000);
    static Region complement(Region inner);

    int dim() const { return m_; }
    Kind kind() const { return kind_; }
    const Region& inner() const;  // Complement only

    std::optional<double> shape_constant() const { return shape_constant_; }
    void set_shape_constant(double c) { shape_constant_ = c; }

    /// Exact membership of x/p; torus wrap handled per coordinate.
    bool contains_lattice(std::span<const u64> x, const PrimeModulus& p) const;
    /// Double-precision membership for Monte-Carlo work; coordinates in [0,1).
    bool contains(std::span<const double> u) const;

    double measure() const;
    double measure_half_width() const;

    /// All x in {0..p-1}^m with x/p inside; guard: p^m <= 10^9.
    PointList lattice_points(const PrimeModulus& p) const;

    ShellEstimate shell_measure(double epsilon, u64 samples, u64 seed) const;

    /// Exact certification: the whole closed cube lies inside the region.
    bool cube_inside(const ExactCube& cube) const;
    /// Exact: the closed cube does not meet the region.
    bool cube_disjoint(const ExactCube& cube) const;

    /// Euclidean distance (quotient metric) from u to the region boundary.
    double dist_to_boundary(std::span<const double> u) const;

    /// Stable short description, used as report / baseline key.
    std::string describe() const;

    /// Plain hit-or-miss estimate; exposed so tests can cross-check the
    /// closed forms.  Returns the estimate; *half_width gets the 99% CI.
    double monte_carlo_measure(u64 samples, u64 seed, double* half_width = nullptr) const;

   private:
    Region() = default;

    int m_ = 0;
    Kind kind_ = Kind::FullTorus;
    std::vector<Fixed64> lo_, hi_;                     // AxisBox
    std::vector<Fixed64> center_;                      // Ball
    Fixed64 radius_{0};                                // Ball
    std::vector<std::array<Fixed64, 2>> verts_;        // Polytope (CCW)
    std::shared_ptr<const Region> inner_;              // Complement
    u64 mc_seed_ = 0;
    u64 mc_samples_ = 0;
    std::optional<double> shape_constant_;

    mutable bool mc_cached_ = false;
    mutable double mc_measure_ = 0, mc_half_width_ = 0;

    void require_dim(std::size_t got) const;
    double polytope_area_mc() const;
};

}  // namespace equilab::region

#endif
