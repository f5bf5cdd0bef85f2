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

#include "equilab/prime.hpp"

#include <cmath>
#include <stdexcept>

namespace equilab {

u64 powmod(u64 base, u64 exp, u64 p) {
    u64 r = 1 % p;
    base %= p;
    while (exp) {
        if (exp & 1) r = mulmod(r, base, p);
        base = mulmod(base, base, p);
        exp >>= 1;
    }
    return r;
}

u64 invmod(u64 a, u64 p) {
    a %= p;
    if (a == 0) throw std::invalid_argument("invmod: zero has no inverse");
    return powmod(a, p - 2, p);
}

namespace {

bool miller_rabin(u64 n, u64 a) {
    if (a % n == 0) return true;
    u64 d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < r; ++i) {
        x = mulmod(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

}  // namespace

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 q : {2ull, 3ull, 5ull, 7ull}) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    // bases 2,3,5,7 are exact below 3'215'031'751
    for (u64 a : {2ull, 3ull, 5ull, 7ull})
        if (!miller_rabin(n, a)) return false;
    return true;
}

std::vector<u64> primes_in_range(u64 lo, u64 hi) {
    std::vector<u64> out;
    for (u64 n = lo; n <= hi && n >= lo; ++n)
        if (is_prime(n)) out.push_back(n);
    return out;
}

PrimeModulus::PrimeModulus(u64 p) : p_(p) {
    if (p < 2 || p >= (u64{1} << 31))
        throw std::invalid_argument("prime modulus must satisfy 2 <= p < 2^31");
    if (!is_prime(p)) throw std::invalid_argument("modulus is not prime: " + std::to_string(p));
}

double PrimeModulus::log() const { return std::log(static_cast<double>(p_)); }
double PrimeModulus::sqrt() const { return std::sqrt(static_cast<double>(p_)); }

}  // namespace equilab
