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

#include "equilab/fixed_point.hpp"

#include <cctype>
#include <cstdio>
#include <stdexcept>

namespace equilab {

Fixed64 Fixed64::from_double(double x) {
    if (!(x >= 0.0) || x > 1.0) throw std::invalid_argument("coordinate outside [0, 1]");
    long double scaled = static_cast<long double>(x) * static_cast<long double>(kFixedOne);
    u64 raw = static_cast<u64>(scaled + 0.5L);
    if (raw > kFixedOne) raw = kFixedOne;
    return Fixed64{raw};
}

Fixed64 parse_unit_decimal(std::string_view text) {
    std::size_t i = 0, n = text.size();
    while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    while (n > i && std::isspace(static_cast<unsigned char>(text[n - 1]))) --n;
    if (i >= n) throw std::invalid_argument("empty coordinate string");

    u64 int_part = 0;
    bool any_digit = false;
    while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) {
        int_part = int_part * 10 + static_cast<u64>(text[i] - '0');
        if (int_part > 1) throw std::invalid_argument("coordinate outside [0, 1]: " + std::string(text));
        any_digit = true;
        ++i;
    }
    u128 frac_num = 0;
    u128 frac_den = 1;
    if (i < n && text[i] == '.') {
        ++i;
        int digits = 0;
        while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) {
            if (++digits > 18) throw std::invalid_argument("more than 18 fractional digits: " + std::string(text));
            frac_num = frac_num * 10 + static_cast<u128>(text[i] - '0');
            frac_den *= 10;
            any_digit = true;
            ++i;
        }
    }
    if (!any_digit || i != n)
        throw std::invalid_argument("malformed coordinate string: " + std::string(text));
    if (int_part == 1 && frac_num != 0)
        throw std::invalid_argument("coordinate outside [0, 1]: " + std::string(text));
    if (int_part == 1) return Fixed64::one();

    // round(frac * 2^63 / den), half up; exact for dyadic decimals
    u128 scaled = frac_num << kFixedBits;
    u64 raw = static_cast<u64>((scaled + frac_den / 2) / frac_den);
    return Fixed64{raw};
}

std::string format_double(double x) {
    // %.17g always round-trips; try shorter forms first for readability.
    char buf[64];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, x);
        double back = 0;
        std::sscanf(buf, "%lf", &back);
        if (back == x) return buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace equilab
