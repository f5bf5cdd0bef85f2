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

#ifndef EQUILAB_FIXED_POINT_HPP
#define EQUILAB_FIXED_POINT_HPP

#include <cmath>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace equilab {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

/// Torus coordinates are exact binary fixed point: raw / 2^63.  The value 1.0
/// (raw == 2^63) is representable so that interval upper endpoints can close
/// at the seam; ordinary coordinates live in [0, 2^63).
inline constexpr int kFixedBits = 63;
inline constexpr u64 kFixedOne = u64{1} << kFixedBits;

struct Fixed64 {
    u64 raw = 0;

    constexpr Fixed64() = default;
    constexpr explicit Fixed64(u64 r) : raw(r) {}

    double to_double() const { return std::ldexp(static_cast<double>(raw), -kFixedBits); }

    static constexpr Fixed64 zero() { return Fixed64{0}; }
    static constexpr Fixed64 one() { return Fixed64{kFixedOne}; }

    /// Nearest representable value; used by tests and CLI conveniences.
    /// Config files go through parse_unit_decimal instead.
    static Fixed64 from_double(double x);

    friend constexpr auto operator<=>(Fixed64 a, Fixed64 b) = default;
};

/// Parses a decimal string in [0, 1] ("0.375", ".5", "1", "1.0") to the
/// nearest fixed-point value (round half up on the 2^-63 grid; dyadic
/// decimals parse exactly).  Throws std::invalid_argument on anything else.
Fixed64 parse_unit_decimal(std::string_view text);

/// Shortest decimal that round-trips through double; used for report keys
/// and CSV output so that serialization is byte-stable.
std::string format_double(double x);

}  // namespace equilab

#endif
