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

#ifndef EQUILAB_PRIME_HPP
#define EQUILAB_PRIME_HPP

#include <cstdint>
#include <vector>

#include "equilab/fixed_point.hpp"

namespace equilab {

inline u64 addmod(u64 a, u64 b, u64 p) {
    u64 s = a + b;  // a,b < p < 2^31, no overflow
    return s >= p ? s - p : s;
}

inline u64 submod(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + p - b; }

inline u64 mulmod(u64 a, u64 b, u64 p) {
    return static_cast<u64>((u128)a * b % p);
}

u64 powmod(u64 base, u64 exp, u64 p);
u64 invmod(u64 a, u64 p);  // p prime, a != 0 mod p

/// Deterministic Miller-Rabin; exact for all n < 3'215'031'751 (bases 2,3,5,7).
bool is_prime(u64 n);

std::vector<u64> primes_in_range(u64 lo, u64 hi);

/// A validated odd-or-2 prime modulus with 2 <= p < 2^31, so that every
/// intermediate product in the library fits 64-bit arithmetic with a
/// 128-bit fallback.
class PrimeModulus {
   public:
    explicit PrimeModulus(u64 p);

    u64 value() const { return p_; }
    double log() const;     // natural log, cached
    double sqrt() const;    // cached

   private:
    u64 p_;
};

}  // namespace equilab

#endif
