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

#ifndef EQUILAB_RNG_HPP
#define EQUILAB_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace equilab {

// Every result-bearing random draw goes through these helpers.  The standard
// <random> distributions are implementation-defined, which would break the
// bit-identical-rerun contract across toolchains; mt19937_64 itself is fully
// specified.

inline std::uint64_t rng_u64(std::mt19937_64& gen) { return gen(); }

/// Uniform integer in [0, n).  Modulo reduction; the bias is < n / 2^64 and
/// irrelevant at the sample counts used here.
inline std::uint64_t rng_below(std::mt19937_64& gen, std::uint64_t n) {
    return gen() % n;
}

/// Uniform double in [0, 1) with 53 random bits.
inline double rng_unit(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// splitmix64 finalizer; used to derive independent per-cell substreams from
/// a master seed and a structural path, so that removing one sweep cell never
/// perturbs another.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = splitmix64(master);
    for (std::uint64_t part : path) s = splitmix64(s ^ part);
    return s;
}

}  // namespace equilab

#endif
