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

#include "equilab/poly.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace equilab::poly {

MvPolynomial::MvPolynomial(int var_count) : m_(var_count) {
    if (var_count < 0) throw std::invalid_argument("negative variable count");
}

int MvPolynomial::degree() const {
    int d = -1;
    for (const auto& [exps, c] : terms_) {
        int td = static_cast<int>(std::accumulate(exps.begin(), exps.end(), u64{0}));
        d = std::max(d, td);
    }
    return d;
}

void MvPolynomial::add_term(std::vector<u32> exps, Coeff c) {
    if (static_cast<int>(exps.size()) != m_)
        throw std::invalid_argument("exponent vector length does not match variable count");
    if (c == 0) return;
    auto it = terms_.find(exps);
    if (it == terms_.end()) {
        terms_.emplace(std::move(exps), c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

MvPolynomial MvPolynomial::reduced_mod(const PrimeModulus& p) const {
    MvPolynomial out(m_);
    const i64 pv = static_cast<i64>(p.value());
    for (const auto& [exps, c] : terms_) {
        i64 r = static_cast<i64>(c % pv);
        if (r < 0) r += pv;
        if (r != 0) out.terms_.emplace(exps, r);
    }
    return out;
}

u64 MvPolynomial::eval_mod(std::span<const u64> point, const PrimeModulus& p) const {
    if (static_cast<int>(point.size()) != m_)
        throw std::invalid_argument("point dimension does not match variable count");
    const u64 pv = p.value();
    u64 acc = 0;
    for (const auto& [exps, c] : terms_) {
        i64 cr = static_cast<i64>(c % static_cast<i64>(pv));
        if (cr < 0) cr += static_cast<i64>(pv);
        u64 term = static_cast<u64>(cr);
        for (int j = 0; j < m_ && term != 0; ++j)
            if (exps[j] != 0) term = mulmod(term, powmod(point[j] % pv, exps[j], pv), pv);
        acc = addmod(acc, term, pv);
    }
    return acc;
}

namespace {

// graded lex: higher total degree first, then lexicographically larger exps
bool term_order(const std::vector<u32>& a, const std::vector<u32>& b) {
    u64 da = std::accumulate(a.begin(), a.end(), u64{0});
    u64 db = std::accumulate(b.begin(), b.end(), u64{0});
    if (da != db) return da > db;
    return a > b;
}

}  // namespace

std::string MvPolynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::vector<const TermMap::value_type*> order;
    order.reserve(terms_.size());
    for (const auto& t : terms_) order.push_back(&t);
    std::sort(order.begin(), order.end(),
              [](auto* a, auto* b) { return term_order(a->first, b->first); });

    std::ostringstream os;
    bool first = true;
    for (const auto* t : order) {
        Coeff c = t->second;
        if (first) {
            if (c < 0) os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        first = false;
        unsigned long long mag = c < 0 ? -static_cast<unsigned long long>(c) : static_cast<unsigned long long>(c);
        bool monic = mag == 1;
        bool any_var = false;
        for (u32 e : t->first) any_var = any_var || e != 0;
        if (!monic || !any_var) os << mag;
        bool star = !monic || !any_var;
        for (int j = 0; j < m_; ++j) {
            u32 e = t->first[j];
            if (e == 0) continue;
            if (star) os << "*";
            os << "X" << (j + 1);
            if (e > 1) os << "^" << e;
            star = true;
        }
    }
    return os.str();
}

MvPolynomial MvPolynomial::parse(std::string_view text, int var_count) {
    std::string s;
    s.reserve(text.size());
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    if (s.empty()) throw std::invalid_argument("empty polynomial string");

    struct RawTerm {
        long long coeff;
        std::vector<std::pair<u32, u32>> factors;  // (var index 1-based, exponent)
    };
    std::vector<RawTerm> raw;
    u32 max_var = 0;

    std::size_t i = 0;
    const std::size_t n = s.size();
    auto fail = [&](const std::string& why) {
        throw std::invalid_argument("polynomial parse error at position " + std::to_string(i) +
                                    ": " + why + " in \"" + s + "\"");
    };
    auto read_uint = [&](unsigned long long cap) -> unsigned long long {
        if (i >= n || !std::isdigit(static_cast<unsigned char>(s[i]))) fail("expected a number");
        unsigned long long v = 0;
        while (i < n && std::isdigit(static_cast<unsigned char>(s[i]))) {
            v = v * 10 + static_cast<unsigned long long>(s[i] - '0');
            if (v > cap) fail("number too large");
            ++i;
        }
        return v;
    };

    while (i < n) {
        long long sign = 1;
        while (i < n && (s[i] == '+' || s[i] == '-')) {
            if (s[i] == '-') sign = -sign;
            ++i;
        }
        if (i >= n) fail("dangling sign");

        long long coeff = 1;
        bool saw_number = false;
        if (std::isdigit(static_cast<unsigned char>(s[i]))) {
            coeff = static_cast<long long>(read_uint(1'000'000'000'000'000'000ULL));
            saw_number = true;
        }
        RawTerm term{sign * coeff, {}};

        bool expect_factor = !saw_number;
        while (i < n) {
            if (s[i] == '*') {
                ++i;
                expect_factor = true;
                continue;
            }
            if (s[i] == 'x' || s[i] == 'X') {
                ++i;
                u32 var = static_cast<u32>(read_uint(64));
                if (var == 0) fail("variable indices start at X1");
                u32 exp = 1;
                if (i < n && s[i] == '^') {
                    ++i;
                    exp = static_cast<u32>(read_uint(kMaxTotalDegree));
                }
                term.factors.emplace_back(var, exp);
                max_var = std::max(max_var, var);
                expect_factor = false;
                continue;
            }
            if (expect_factor && std::isdigit(static_cast<unsigned char>(s[i]))) {
                // allow products like 2*3*X1
                long long extra = static_cast<long long>(read_uint(1'000'000'000'000'000'000ULL));
                term.coeff *= extra;
                expect_factor = false;
                continue;
            }
            break;  // +, -, or junk: end of this term
        }
        if (expect_factor) fail("expected a factor after '*'");
        if (i < n && s[i] != '+' && s[i] != '-') fail(std::string("unexpected character '") + s[i] + "'");
        raw.push_back(std::move(term));
        if (raw.size() > kMaxTerms) fail("term count exceeds cap");
    }

    int m = var_count;
    if (m == 0) m = static_cast<int>(max_var);
    if (static_cast<int>(max_var) > m)
        throw std::invalid_argument("polynomial uses X" + std::to_string(max_var) +
                                    " but the system has only " + std::to_string(m) + " variables");

    MvPolynomial out(m);
    for (auto& t : raw) {
        std::vector<u32> exps(static_cast<std::size_t>(m), 0);
        u64 total = 0;
        for (auto [var, e] : t.factors) {
            exps[var - 1] += e;
            total += e;
        }
        if (total > kMaxTotalDegree)
            throw std::invalid_argument("term exceeds the total-degree cap of " +
                                        std::to_string(kMaxTotalDegree));
        out.add_term(std::move(exps), t.coeff);
    }
    if (out.term_count() > kMaxTerms) throw std::invalid_argument("term count exceeds cap");
    return out;
}

namespace {

PolySystem make_system(int m, SystemKind kind, const std::vector<std::string>& texts) {
    if (m <= 0) throw std::invalid_argument("system needs at least one variable");
    if (texts.empty()) throw std::invalid_argument("system needs at least one polynomial");
    PolySystem sys;
    sys.m = m;
    sys.kind = kind;
    for (const auto& t : texts) sys.polys.push_back(MvPolynomial::parse(t, m));
    if (kind == SystemKind::Zero && m < sys.n() + 1)
        throw std::invalid_argument("zero systems require m >= n + 1 variables");
    return sys;
}

}  // namespace

PolySystem PolySystem::value_system(int m, const std::vector<std::string>& texts) {
    return make_system(m, SystemKind::Value, texts);
}

PolySystem PolySystem::zero_system(int m, const std::vector<std::string>& texts) {
    return make_system(m, SystemKind::Zero, texts);
}

std::string PolySystem::to_string() const {
    std::ostringstream os;
    os << (kind == SystemKind::Value ? "G" : "F") << "[m=" << m << "]{";
    for (std::size_t j = 0; j < polys.size(); ++j) {
        if (j) os << "; ";
        os << polys[j].to_string();
    }
    os << "}";
    return os.str();
}

u64 PolySystem::hash() const {
    std::string s = to_string();
    u64 h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

MvPolynomial linear_combination(const PolySystem& system, std::span<const u64> a,
                                const PrimeModulus& p) {
    if (static_cast<int>(a.size()) != system.n())
        throw std::invalid_argument("coefficient vector length does not match system size");
    MvPolynomial out(system.m);
    const u64 pv = p.value();
    for (int j = 0; j < system.n(); ++j) {
        u64 aj = a[j] % pv;
        if (aj == 0) continue;
        MvPolynomial red = system.polys[static_cast<std::size_t>(j)].reduced_mod(p);
        for (const auto& [exps, c] : red.terms()) {
            u64 scaled = mulmod(static_cast<u64>(c), aj, pv);
            out.add_term(exps, static_cast<MvPolynomial::Coeff>(scaled));
        }
    }
    // renormalize into [0, p)
    return out.reduced_mod(p);
}

IndependenceResult degree2_independent(const PolySystem& system, const PrimeModulus& p) {
    if (system.kind != SystemKind::Value)
        throw std::invalid_argument("degree-2 independence applies to value systems");
    const u64 pv = p.value();
    const int n = system.n();

    // columns = all monomials of total degree >= 2 present in any reduced G_j
    std::map<std::vector<u32>, int> col_index;
    std::vector<MvPolynomial> reduced;
    reduced.reserve(static_cast<std::size_t>(n));
    for (const auto& g : system.polys) reduced.push_back(g.reduced_mod(p));
    for (const auto& g : reduced)
        for (const auto& [exps, c] : g.terms()) {
            u64 td = std::accumulate(exps.begin(), exps.end(), u64{0});
            if (td >= 2) col_index.emplace(exps, 0);
        }
    int ncols = 0;
    for (auto& [k, v] : col_index) v = ncols++;

    // rows augmented with the identity to read combinations back off
    std::vector<std::vector<u64>> mat(static_cast<std::size_t>(n),
                                      std::vector<u64>(static_cast<std::size_t>(ncols + n), 0));
    for (int j = 0; j < n; ++j) {
        for (const auto& [exps, c] : reduced[static_cast<std::size_t>(j)].terms()) {
            u64 td = std::accumulate(exps.begin(), exps.end(), u64{0});
            if (td >= 2) mat[static_cast<std::size_t>(j)][static_cast<std::size_t>(col_index[exps])] = static_cast<u64>(c);
        }
        mat[static_cast<std::size_t>(j)][static_cast<std::size_t>(ncols + j)] = 1;
    }

    // Gaussian elimination on the monomial columns only
    int rank = 0;
    for (int col = 0; col < ncols && rank < n; ++col) {
        int pivot = -1;
        for (int r = rank; r < n; ++r)
            if (mat[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        std::swap(mat[static_cast<std::size_t>(pivot)], mat[static_cast<std::size_t>(rank)]);
        u64 inv = invmod(mat[static_cast<std::size_t>(rank)][static_cast<std::size_t>(col)], pv);
        for (auto& v : mat[static_cast<std::size_t>(rank)]) v = mulmod(v, inv, pv);
        for (int r = 0; r < n; ++r) {
            if (r == rank) continue;
            u64 f = mat[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
            if (f == 0) continue;
            for (int c2 = 0; c2 < ncols + n; ++c2) {
                auto& cell = mat[static_cast<std::size_t>(r)][static_cast<std::size_t>(c2)];
                cell = submod(cell, mulmod(f, mat[static_cast<std::size_t>(rank)][static_cast<std::size_t>(c2)], pv), pv);
            }
        }
        ++rank;
    }

    if (rank == n) return {true, std::nullopt};

    // any row with all monomial columns zero carries a kernel vector in the
    // augmented part
    for (int r = rank; r < n; ++r) {
        bool zero = true;
        for (int c = 0; c < ncols; ++c)
            if (mat[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] != 0) zero = false;
        if (!zero) continue;
        std::vector<u64> witness(static_cast<std::size_t>(n));
        bool nonzero = false;
        for (int j = 0; j < n; ++j) {
            witness[static_cast<std::size_t>(j)] = mat[static_cast<std::size_t>(r)][static_cast<std::size_t>(ncols + j)];
            nonzero = nonzero || witness[static_cast<std::size_t>(j)] != 0;
        }
        if (nonzero) return {false, std::move(witness)};
    }
    // unreachable: rank < n guarantees a zero row with nonzero augmentation
    throw std::logic_error("rank deficiency without witness");
}

}  // namespace equilab::poly
