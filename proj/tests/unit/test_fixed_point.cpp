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

#include <doctest.h>

#include <stdexcept>

#include "equilab/fixed_point.hpp"
#include "equilab/prime.hpp"

using namespace equilab;

TEST_CASE("dyadic decimals parse to exact fixed point") {
    CHECK(parse_unit_decimal("0.5").raw == kFixedOne / 2);
    CHECK(parse_unit_decimal(".5").raw == kFixedOne / 2);
    CHECK(parse_unit_decimal("0.25").raw == kFixedOne / 4);
    CHECK(parse_unit_decimal("0.375").raw == (kFixedOne / 8) * 3);
    CHECK(parse_unit_decimal("0").raw == 0);
    CHECK(parse_unit_decimal("1").raw == kFixedOne);
    CHECK(parse_unit_decimal("1.0").raw == kFixedOne);
    CHECK(parse_unit_decimal(" 0.75 ").raw == (kFixedOne / 4) * 3);
}

TEST_CASE("non-dyadic decimals round deterministically and stay close") {
    Fixed64 a = parse_unit_decimal("0.3");
    Fixed64 b = parse_unit_decimal("0.3");
    CHECK(a.raw == b.raw);
    CHECK(a.to_double() == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("malformed coordinates are rejected") {
    CHECK_THROWS_AS(parse_unit_decimal(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_unit_decimal("1.5"), std::invalid_argument);
    CHECK_THROWS_AS(parse_unit_decimal("2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_unit_decimal("-0.5"), std::invalid_argument);
    CHECK_THROWS_AS(parse_unit_decimal("0.5x"), std::invalid_argument);
    CHECK_THROWS_AS(parse_unit_decimal("0.1234567890123456789"), std::invalid_argument);
}

TEST_CASE("format_double round-trips") {
    for (double x : {0.0, 1.0, 0.3, 1.0 / 3.0, 105.0 / 2809.0, 1e-17, 0.037380562477750978}) {
        double back = 0;
        std::sscanf(format_double(x).c_str(), "%lf", &back);
        CHECK(back == x);
    }
}

TEST_CASE("deterministic primality testing") {
    CHECK(is_prime(2));
    CHECK(is_prime(3));
    CHECK(is_prime(5));
    CHECK(is_prime(997));
    CHECK(is_prime(2147483647));  // 2^31 - 1
    CHECK_FALSE(is_prime(0));
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(9));
    CHECK_FALSE(is_prime(561));    // Carmichael
    CHECK_FALSE(is_prime(29341));  // Carmichael
    // exhaustive against trial division below 2000
    for (u64 n = 0; n < 2000; ++n) {
        bool ref = n >= 2;
        for (u64 d = 2; d * d <= n; ++d)
            if (n % d == 0) ref = false;
        CHECK(is_prime(n) == ref);
    }
}

TEST_CASE("PrimeModulus validates its range") {
    CHECK(PrimeModulus(101).value() == 101);
    auto make = [](u64 p) { return PrimeModulus(p).value(); };
    CHECK_THROWS_AS((void)make(1), std::invalid_argument);
    CHECK_THROWS_AS((void)make(100), std::invalid_argument);
    CHECK_THROWS_AS((void)make(u64{1} << 31), std::invalid_argument);
    CHECK_THROWS_AS((void)make((u64{1} << 31) + 11), std::invalid_argument);
}

TEST_CASE("modular helpers") {
    CHECK(powmod(2, 10, 1000) == 24);
    CHECK(powmod(0, 0, 7) == 1);
    CHECK(invmod(3, 7) == 5);
    for (u64 a = 1; a < 13; ++a) CHECK(mulmod(a, invmod(a, 13), 13) == 1);
    CHECK(primes_in_range(10, 30) == std::vector<u64>{11, 13, 17, 19, 23, 29});
}
