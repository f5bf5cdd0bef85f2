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

#ifndef EQUILAB_POLY_HPP
#define EQUILAB_POLY_HPP

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "equilab/prime.hpp"

namespace equilab::poly {

// Parse-time caps; they keep every brute-force cross-check in the test suite
// tractable.
inline constexpr u32 kMaxTotalDegree = 16;
inline constexpr std::size_t kMaxTerms = 10'000;

/// Sparse multivariate polynomial over Z (or residues in [0,p) after
/// reduced_mod).  Keys are exponent vectors of fixed length var_count();
/// stored coefficients are never zero.
class MvPolynomial {
   public:
    using Coeff = long long;
    using TermMap = std::map<std::vector<u32>, Coeff>;

    MvPolynomial() = default;
    explicit MvPolynomial(int var_count);

    /// Text form: signed sum of terms `c*X1^e1*X2^e2`, e.g. "X1*X2 - 1" or
    /// "3x2^2 + x1".  Case-insensitive, whitespace ignored.  With
    /// var_count == 0 the variable count is inferred from the largest index.
    static MvPolynomial parse(std::string_view text, int var_count = 0);

    int var_count() const { return m_; }
    bool is_zero() const { return terms_.empty(); }
    /// Max total degree of any stored term; -1 for the zero polynomial.
    int degree() const;
    std::size_t term_count() const { return terms_.size(); }
    const TermMap& terms() const { return terms_; }

    /// Accumulates c * X^exps, dropping the term if the sum cancels.
    void add_term(std::vector<u32> exps, Coeff c);

    /// Same polynomial with every coefficient reduced into [0, p); zero terms
    /// dropped.  Z-system polynomials are reduced on demand so one system can
    /// be reused across primes.
    MvPolynomial reduced_mod(const PrimeModulus& p) const;

    /// Value at `point` (residues in [0,p)) reduced mod p.  Term-by-term
    /// sparse evaluation, all arithmetic mod p.
    u64 eval_mod(std::span<const u64> point, const PrimeModulus& p) const;

    /// Canonical text form (graded-lex term order, explicit signs); two
    /// polynomials are equal iff their canonical strings are.
    std::string to_string() const;

    friend bool operator==(const MvPolynomial&, const MvPolynomial&) = default;

   private:
    int m_ = 0;
    TermMap terms_;
};

enum class SystemKind { Value, Zero };

/// A system of n polynomials sharing m variables.  Value systems (G) live in
/// F_p[X]; zero systems (F) have integer coefficients and require m >= n+1.
struct PolySystem {
    int m = 0;
    SystemKind kind = SystemKind::Value;
    std::vector<MvPolynomial> polys;

    static PolySystem value_system(int m, const std::vector<std::string>& texts);
    static PolySystem zero_system(int m, const std::vector<std::string>& texts);

    int n() const { return static_cast<int>(polys.size()); }
    /// FNV-1a over the canonical serialization; stable across runs and
    /// platforms, used as the cache / report key.
    u64 hash() const;
    std::string to_string() const;
};

/// Sum a_1 G_1 + ... + a_n G_n with coefficients reduced mod p and zero terms
/// dropped.  `a` holds residues in [0, p).
MvPolynomial linear_combination(const PolySystem& system, std::span<const u64> a,
                                const PrimeModulus& p);

struct IndependenceResult {
    bool independent = false;
    /// A nonzero vector a with deg(sum a_j G_j) <= 1, present iff not
    /// independent.
    std::optional<std::vector<u64>> witness;
};

/// True iff every nonzero a in F_p^n gives deg(sum a_j G_j) >= 2.  Rank test
/// over F_p on the matrix whose rows are the degree->=2 coefficient vectors
/// of the G_j (full rank n <=> independent).
IndependenceResult degree2_independent(const PolySystem& system, const PrimeModulus& p);

}  // namespace equilab::poly

#endif
