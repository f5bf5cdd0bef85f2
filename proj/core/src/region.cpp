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

#include "equilab/region.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

#include "equilab/errors.hpp"
#include "equilab/parallel.hpp"
#include "equilab/rng.hpp"

namespace equilab::region {

using i256 = boost::multiprecision::int256_t;

namespace {

constexpr double kZ99 = 2.5758293035489004;  // 99% two-sided normal quantile

i256 to_i256(u128 v) {
    i256 r = static_cast<u64>(v >> 64);
    r <<= 64;
    r += static_cast<u64>(v);
    return r;
}

// torus distance between numerators a, b over denominator den, result <= den/2
u128 torus_dist(u128 a, u128 b, u128 den) {
    u128 d = a >= b ? a - b : b - a;
    return d <= den - d ? d : den - d;
}

// max over t in the interval [lo, lo+width] (mod den) of torus_dist(t, c)
u128 interval_max_dist(u128 lo, u128 width, u128 den, u128 c) {
    if (width >= den) return den / 2;
    u128 anti = (c + den / 2) % den;
    u128 rel = anti >= lo ? anti - lo : anti + den - lo;
    if (rel <= width) return den / 2;
    u128 hi = (lo + width) % den;
    return std::max(torus_dist(lo, c, den), torus_dist(hi, c, den));
}

// min over t in [lo, lo+width] (mod den) of torus_dist(t, c)
u128 interval_min_dist(u128 lo, u128 width, u128 den, u128 c) {
    if (width >= den) return 0;
    u128 rel = c >= lo ? c - lo : c + den - lo;
    if (rel <= width) return 0;
    u128 hi = (lo + width) % den;
    return std::min(torus_dist(lo, c, den), torus_dist(hi, c, den));
}

// [lo, lo+width] (mod den) subset of the half-open arc [a, b)?
bool interval_in_box_side(u128 lo, u128 width, u128 den, u128 a, u128 b) {
    if (a == 0 && b == den) return true;  // full circle
    if (width >= den) return false;
    u128 hi = lo + width;
    if (hi >= den) return false;  // straddles the seam, side does not
    return a <= lo && hi < b;
}

// [lo, lo+width] (mod den) disjoint from [a, b)?
bool interval_disjoint_box_side(u128 lo, u128 width, u128 den, u128 a, u128 b) {
    if (a == b) return true;  // empty side
    if (a == 0 && b == den) return false;
    if (width >= den) return false;
    u128 hi = lo + width;
    if (hi < den) return hi < a || lo >= b;
    u128 rem = hi - den;  // wraps: pieces [lo, den] and [0, rem]
    return b <= lo && a > rem;
}

int sign_of(const i256& v) { return v < 0 ? -1 : (v > 0 ? 1 : 0); }

// orientation of c relative to the directed segment a->b
int orient(const std::array<i256, 2>& a, const std::array<i256, 2>& b,
           const std::array<i256, 2>& c) {
    i256 cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
    return sign_of(cross);
}

bool on_segment(const std::array<i256, 2>& a, const std::array<i256, 2>& b,
                const std::array<i256, 2>& c) {
    return orient(a, b, c) == 0 && std::min(a[0], b[0]) <= c[0] && c[0] <= std::max(a[0], b[0]) &&
           std::min(a[1], b[1]) <= c[1] && c[1] <= std::max(a[1], b[1]);
}

bool segments_intersect(const std::array<i256, 2>& p1, const std::array<i256, 2>& p2,
                        const std::array<i256, 2>& q1, const std::array<i256, 2>& q2) {
    int d1 = orient(q1, q2, p1), d2 = orient(q1, q2, p2);
    int d3 = orient(p1, p2, q1), d4 = orient(p1, p2, q2);
    if (d1 * d2 < 0 && d3 * d4 < 0) return true;
    if (d1 == 0 && on_segment(q1, q2, p1)) return true;
    if (d2 == 0 && on_segment(q1, q2, p2)) return true;
    if (d3 == 0 && on_segment(p1, p2, q1)) return true;
    if (d4 == 0 && on_segment(p1, p2, q2)) return true;
    return false;
}

double unit_ball_volume(int m) {
    return std::pow(std::numbers::pi, m / 2.0) / std::tgamma(m / 2.0 + 1.0);
}

double torus_coord_dist(double a, double b) {
    double d = std::fabs(a - b);
    return std::min(d, 1.0 - d);
}

double point_segment_dist(double px, double py, double ax, double ay, double bx, double by) {
    double vx = bx - ax, vy = by - ay;
    double wx = px - ax, wy = py - ay;
    double c1 = vx * wx + vy * wy;
    double c2 = vx * vx + vy * vy;
    double t = c2 > 0 ? std::clamp(c1 / c2, 0.0, 1.0) : 0.0;
    double dx = px - (ax + t * vx), dy = py - (ay + t * vy);
    return std::hypot(dx, dy);
}

}  // namespace

double ExactCube::lo_double(int j) const {
    return static_cast<double>(lo[static_cast<std::size_t>(j)]) / static_cast<double>(den());
}

double ExactCube::width_double() const {
    return static_cast<double>(width) / static_cast<double>(den());
}

void Region::require_dim(std::size_t got) const {
    if (static_cast<int>(got) != m_)
        throw std::invalid_argument("point dimension " + std::to_string(got) +
                                    " does not match region dimension " + std::to_string(m_));
}

Region Region::full_torus(int m) {
    if (m < 1) throw std::invalid_argument("region dimension must be positive");
    Region r;
    r.m_ = m;
    r.kind_ = Kind::FullTorus;
    return r;
}

Region Region::axis_box(std::vector<Fixed64> lo, std::vector<Fixed64> hi) {
    if (lo.empty() || lo.size() != hi.size())
        throw std::invalid_argument("axis box needs matching nonempty corner vectors");
    for (std::size_t j = 0; j < lo.size(); ++j) {
        if (lo[j].raw > hi[j].raw) throw std::invalid_argument("axis box needs lo <= hi");
        if (hi[j].raw > kFixedOne) throw std::invalid_argument("axis box corners must lie in [0, 1]");
    }
    Region r;
    r.m_ = static_cast<int>(lo.size());
    r.kind_ = Kind::AxisBox;
    r.lo_ = std::move(lo);
    r.hi_ = std::move(hi);
    return r;
}

Region Region::ball(std::vector<Fixed64> center, Fixed64 radius) {
    if (center.empty()) throw std::invalid_argument("ball needs a center");
    for (auto c : center)
        if (c.raw >= kFixedOne) throw std::invalid_argument("ball center must lie in [0, 1)");
    if (radius.raw > kFixedOne / 2)
        throw std::invalid_argument("ball radius must be <= 1/2 so torus balls never self-overlap");
    Region r;
    r.m_ = static_cast<int>(center.size());
    r.kind_ = Kind::Ball;
    r.center_ = std::move(center);
    r.radius_ = radius;
    return r;
}

Region Region::polytope(std::vector<std::array<Fixed64, 2>> vertices, u64 mc_seed, u64 mc_samples) {
    if (vertices.size() < 3) throw std::invalid_argument("polytope needs at least 3 vertices");
    for (auto& v : vertices)
        if (v[0].raw > kFixedOne || v[1].raw > kFixedOne)
            throw std::invalid_argument("polytope vertices must lie in [0, 1]^2");
    // normalize to counterclockwise; verify convexity exactly
    auto cross_at = [&](std::size_t i) {
        std::size_t n = vertices.size();
        auto& a = vertices[i];
        auto& b = vertices[(i + 1) % n];
        auto& c = vertices[(i + 2) % n];
        i256 abx = i256(b[0].raw) - i256(a[0].raw), aby = i256(b[1].raw) - i256(a[1].raw);
        i256 bcx = i256(c[0].raw) - i256(b[0].raw), bcy = i256(c[1].raw) - i256(b[1].raw);
        return abx * bcy - aby * bcx;
    };
    int pos = 0, neg = 0;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        int s = sign_of(cross_at(i));
        pos += s > 0;
        neg += s < 0;
    }
    if (pos > 0 && neg > 0) throw std::invalid_argument("polytope vertex list is not convex");
    if (pos == 0 && neg == 0) throw std::invalid_argument("polytope is degenerate");
    if (neg > 0) std::reverse(vertices.begin(), vertices.end());

    Region r;
    r.m_ = 2;
    r.kind_ = Kind::Polytope;
    r.verts_ = std::move(vertices);
    r.mc_seed_ = mc_seed;
    r.mc_samples_ = mc_samples == 0 ? 1'000'000 : mc_samples;
    return r;
}

Region Region::complement(Region inner) {
    Region r;
    r.m_ = inner.m_;
    r.kind_ = Kind::Complement;
    r.inner_ = std::make_shared<Region>(std::move(inner));
    return r;
}

const Region& Region::inner() const {
    if (kind_ != Kind::Complement) throw std::logic_error("inner() on a non-complement region");
    return *inner_;
}

bool Region::contains_lattice(std::span<const u64> x, const PrimeModulus& p) const {
    require_dim(x.size());
    const u64 pv = p.value();
    const u128 den = static_cast<u128>(pv) << kFixedBits;
    switch (kind_) {
        case Kind::FullTorus:
            return true;
        case Kind::AxisBox:
            for (int j = 0; j < m_; ++j) {
                u128 num = static_cast<u128>(x[static_cast<std::size_t>(j)] % pv) << kFixedBits;
                u128 a = static_cast<u128>(lo_[static_cast<std::size_t>(j)].raw) * pv;
                u128 b = static_cast<u128>(hi_[static_cast<std::size_t>(j)].raw) * pv;
                if (num < a || num >= b) return false;
            }
            return true;
        case Kind::Ball: {
            i256 acc = 0;
            for (int j = 0; j < m_; ++j) {
                u128 num = static_cast<u128>(x[static_cast<std::size_t>(j)] % pv) << kFixedBits;
                u128 c = static_cast<u128>(center_[static_cast<std::size_t>(j)].raw) * pv;
                i256 d = to_i256(torus_dist(num, c, den));
                acc += d * d;
            }
            i256 rnum = to_i256(static_cast<u128>(radius_.raw) * pv);
            return acc <= rnum * rnum;
        }
        case Kind::Polytope: {
            std::array<i256, 2> pt = {to_i256(static_cast<u128>(x[0] % pv) << kFixedBits),
                                      to_i256(static_cast<u128>(x[1] % pv) << kFixedBits)};
            std::size_t n = verts_.size();
            for (std::size_t i = 0; i < n; ++i) {
                std::array<i256, 2> a = {to_i256(static_cast<u128>(verts_[i][0].raw) * pv),
                                         to_i256(static_cast<u128>(verts_[i][1].raw) * pv)};
                std::array<i256, 2> b = {
                    to_i256(static_cast<u128>(verts_[(i + 1) % n][0].raw) * pv),
                    to_i256(static_cast<u128>(verts_[(i + 1) % n][1].raw) * pv)};
                if (orient(a, b, pt) < 0) return false;
            }
            return true;
        }
        case Kind::Complement:
            return !inner_->contains_lattice(x, p);
    }
    return false;
}

bool Region::contains(std::span<const double> u) const {
    require_dim(u.size());
    switch (kind_) {
        case Kind::FullTorus:
            return true;
        case Kind::AxisBox:
            for (int j = 0; j < m_; ++j) {
                double v = u[static_cast<std::size_t>(j)];
                if (v < lo_[static_cast<std::size_t>(j)].to_double() ||
                    v >= hi_[static_cast<std::size_t>(j)].to_double())
                    return false;
            }
            return true;
        case Kind::Ball: {
            double acc = 0, r = radius_.to_double();
            for (int j = 0; j < m_; ++j) {
                double d = torus_coord_dist(u[static_cast<std::size_t>(j)],
                                            center_[static_cast<std::size_t>(j)].to_double());
                acc += d * d;
            }
            return acc <= r * r;
        }
        case Kind::Polytope: {
            std::size_t n = verts_.size();
            for (std::size_t i = 0; i < n; ++i) {
                double ax = verts_[i][0].to_double(), ay = verts_[i][1].to_double();
                double bx = verts_[(i + 1) % n][0].to_double(), by = verts_[(i + 1) % n][1].to_double();
                if ((bx - ax) * (u[1] - ay) - (by - ay) * (u[0] - ax) < 0) return false;
            }
            return true;
        }
        case Kind::Complement:
            return !inner_->contains(u);
    }
    return false;
}

double Region::measure() const {
    switch (kind_) {
        case Kind::FullTorus:
            return 1.0;
        case Kind::AxisBox: {
            double v = 1.0;
            for (int j = 0; j < m_; ++j)
                v *= (hi_[static_cast<std::size_t>(j)].to_double() -
                      lo_[static_cast<std::size_t>(j)].to_double());
            return v;
        }
        case Kind::Ball:
            return unit_ball_volume(m_) * std::pow(radius_.to_double(), m_);
        case Kind::Polytope:
            return polytope_area_mc();
        case Kind::Complement:
            return 1.0 - inner_->measure();
    }
    return 0.0;
}

double Region::measure_half_width() const {
    switch (kind_) {
        case Kind::Polytope:
            polytope_area_mc();
            return mc_half_width_;
        case Kind::Complement:
            return inner_->measure_half_width();
        default:
            return 0.0;
    }
}

double Region::polytope_area_mc() const {
    if (!mc_cached_) {
        mc_measure_ = monte_carlo_measure(mc_samples_, mc_seed_, &mc_half_width_);
        mc_cached_ = true;
    }
    return mc_measure_;
}

double Region::monte_carlo_measure(u64 samples, u64 seed, double* half_width) const {
    if (samples == 0) throw std::invalid_argument("sample count must be positive");
    std::mt19937_64 gen(seed);
    std::vector<double> u(static_cast<std::size_t>(m_));
    u64 hits = 0;
    for (u64 s = 0; s < samples; ++s) {
        for (auto& v : u) v = rng_unit(gen);
        hits += contains(u) ? 1 : 0;
    }
    double est = static_cast<double>(hits) / static_cast<double>(samples);
    if (half_width) {
        double var = est * (1.0 - est) / static_cast<double>(samples);
        *half_width = std::max(kZ99 * std::sqrt(var), kZ99 / static_cast<double>(samples));
    }
    return est;
}

PointList Region::lattice_points(const PrimeModulus& p) const {
    const u64 pv = p.value();
    u128 total = 1;
    for (int j = 0; j < m_; ++j) {
        total *= pv;
        if (total > kLatticeEnumGuard)
            throw guard_error("lattice enumeration guard exceeded: p^m > 10^9");
    }
    const std::size_t count = static_cast<std::size_t>(total);
    const std::size_t inner_count = count / pv;  // points per first-coordinate slice

    std::vector<std::vector<u64>> partial(static_cast<std::size_t>(pv));
    parallel_chunks(pv, [&](std::size_t, std::size_t begin, std::size_t end) {
        std::vector<u64> x(static_cast<std::size_t>(m_), 0);
        for (std::size_t x0 = begin; x0 < end; ++x0) {
            auto& out = partial[x0];
            x[0] = static_cast<u64>(x0);
            std::fill(x.begin() + 1, x.end(), 0);
            for (std::size_t i = 0; i < inner_count; ++i) {
                if (contains_lattice(x, p)) out.insert(out.end(), x.begin(), x.end());
                for (int j = m_ - 1; j >= 1; --j) {
                    if (++x[static_cast<std::size_t>(j)] < pv) break;
                    x[static_cast<std::size_t>(j)] = 0;
                }
            }
        }
    });

    PointList pl;
    pl.m = m_;
    for (auto& part : partial) pl.coords.insert(pl.coords.end(), part.begin(), part.end());
    return pl;
}

ShellEstimate Region::shell_measure(double epsilon, u64 samples, u64 seed) const {
    if (!(epsilon > 0.0) || epsilon >= 0.5)
        throw std::invalid_argument("shell epsilon must lie in (0, 1/2)");
    const double mu = measure();
    const int m = m_;
    auto finish = [&](ShellEstimate est) {
        est.epsilon = epsilon;
        double denom = std::pow(mu, 1.0 - 1.0 / m) * epsilon + std::pow(epsilon, m);
        est.vws_ratio_plus = denom > 0 ? est.plus_measure / denom : 0.0;
        est.vws_ratio_minus = denom > 0 ? est.minus_measure / denom : 0.0;
        return est;
    };

    switch (kind_) {
        case Kind::FullTorus: {
            ShellEstimate est;
            return finish(est);  // no boundary
        }
        case Kind::Ball: {
            double r = radius_.to_double();
            if (r + epsilon <= 0.5) {
                ShellEstimate est;
                double vm = unit_ball_volume(m);
                est.plus_measure = vm * (std::pow(r + epsilon, m) - std::pow(r, m));
                est.minus_measure = vm * (std::pow(r, m) - std::pow(std::max(r - epsilon, 0.0), m));
                return finish(est);
            }
            break;  // fall through to Monte-Carlo
        }
        case Kind::AxisBox: {
            bool ok = true;
            std::vector<double> s(static_cast<std::size_t>(m));
            for (int j = 0; j < m; ++j) {
                s[static_cast<std::size_t>(j)] = hi_[static_cast<std::size_t>(j)].to_double() -
                                                 lo_[static_cast<std::size_t>(j)].to_double();
                ok = ok && s[static_cast<std::size_t>(j)] + 2 * epsilon <= 1.0 &&
                     s[static_cast<std::size_t>(j)] > 0.0;
            }
            if (ok) {
                // Minkowski dilation of a box by an eps-ball: sum over k of
                // e_k(sides) * V_k * eps^k (e_k = elementary symmetric poly)
                std::vector<double> e(static_cast<std::size_t>(m) + 1, 0.0);
                e[0] = 1.0;
                for (int j = 0; j < m; ++j)
                    for (int k = j + 1; k >= 1; --k)
                        e[static_cast<std::size_t>(k)] += e[static_cast<std::size_t>(k - 1)] * s[static_cast<std::size_t>(j)];
                double dilated = 0.0;
                for (int k = 0; k <= m; ++k)
                    dilated += e[static_cast<std::size_t>(m - k)] * unit_ball_volume(k) * std::pow(epsilon, k);
                double vol = e[static_cast<std::size_t>(m)];
                double eroded = 1.0;
                for (int j = 0; j < m; ++j)
                    eroded *= std::max(s[static_cast<std::size_t>(j)] - 2 * epsilon, 0.0);
                ShellEstimate est;
                est.plus_measure = dilated - vol;
                est.minus_measure = vol - eroded;
                return finish(est);
            }
            break;
        }
        case Kind::Complement: {
            ShellEstimate in = inner_->shell_measure(epsilon, samples, seed);
            ShellEstimate est;
            est.plus_measure = in.minus_measure;  // (T\O)+ shell == O- shell
            est.minus_measure = in.plus_measure;
            est.half_width = in.half_width;
            est.sample_count = in.sample_count;
            return finish(est);
        }
        case Kind::Polytope:
            break;
    }

    // Monte-Carlo shells via distance-to-boundary classification
    if (samples == 0) throw std::invalid_argument("sample count must be positive");
    std::mt19937_64 gen(seed);
    std::vector<double> u(static_cast<std::size_t>(m));
    u64 plus = 0, minus = 0;
    for (u64 s = 0; s < samples; ++s) {
        for (auto& v : u) v = rng_unit(gen);
        double d = dist_to_boundary(u);
        if (d >= epsilon) continue;
        if (contains(u))
            ++minus;
        else
            ++plus;
    }
    ShellEstimate est;
    est.plus_measure = static_cast<double>(plus) / static_cast<double>(samples);
    est.minus_measure = static_cast<double>(minus) / static_cast<double>(samples);
    est.sample_count = samples;
    double hw = 0;
    for (double p_hat : {est.plus_measure, est.minus_measure})
        hw = std::max(hw, kZ99 * std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(samples)));
    est.half_width = std::max(hw, kZ99 / static_cast<double>(samples));
    return finish(est);
}

double Region::dist_to_boundary(std::span<const double> u) const {
    require_dim(u.size());
    switch (kind_) {
        case Kind::FullTorus:
            return std::numeric_limits<double>::infinity();
        case Kind::Ball: {
            double acc = 0;
            for (int j = 0; j < m_; ++j) {
                double d = torus_coord_dist(u[static_cast<std::size_t>(j)],
                                            center_[static_cast<std::size_t>(j)].to_double());
                acc += d * d;
            }
            return std::fabs(std::sqrt(acc) - radius_.to_double());
        }
        case Kind::AxisBox: {
            bool inside = true;
            double inner_min = std::numeric_limits<double>::infinity();
            double outer_sq = 0;
            for (int j = 0; j < m_; ++j) {
                double lo = lo_[static_cast<std::size_t>(j)].to_double();
                double hi = hi_[static_cast<std::size_t>(j)].to_double();
                double v = u[static_cast<std::size_t>(j)];
                if (v >= lo && v < hi) {
                    inner_min = std::min(inner_min, std::min(v - lo, hi - v));
                } else {
                    inside = false;
                    double gap = std::min(torus_coord_dist(v, lo), torus_coord_dist(v, hi));
                    outer_sq += gap * gap;
                }
            }
            return inside ? inner_min : std::sqrt(outer_sq);
        }
        case Kind::Polytope: {
            double best = std::numeric_limits<double>::infinity();
            std::size_t n = verts_.size();
            for (int sx = -1; sx <= 1; ++sx)
                for (int sy = -1; sy <= 1; ++sy) {
                    double px = u[0] + sx, py = u[1] + sy;
                    for (std::size_t i = 0; i < n; ++i) {
                        best = std::min(best, point_segment_dist(
                                                  px, py, verts_[i][0].to_double(),
                                                  verts_[i][1].to_double(),
                                                  verts_[(i + 1) % n][0].to_double(),
                                                  verts_[(i + 1) % n][1].to_double()));
                    }
                }
            return best;
        }
        case Kind::Complement:
            return inner_->dist_to_boundary(u);
    }
    return 0;
}

bool Region::cube_inside(const ExactCube& cube) const {
    require_dim(cube.lo.size());
    const u128 den = cube.den();
    const u64 q = cube.den_factor;
    switch (kind_) {
        case Kind::FullTorus:
            return true;
        case Kind::AxisBox:
            for (int j = 0; j < m_; ++j) {
                u128 a = static_cast<u128>(lo_[static_cast<std::size_t>(j)].raw) * q;
                u128 b = static_cast<u128>(hi_[static_cast<std::size_t>(j)].raw) * q;
                if (!interval_in_box_side(cube.lo[static_cast<std::size_t>(j)], cube.width, den, a, b))
                    return false;
            }
            return true;
        case Kind::Ball: {
            i256 acc = 0;
            for (int j = 0; j < m_; ++j) {
                u128 c = static_cast<u128>(center_[static_cast<std::size_t>(j)].raw) * q;
                i256 d = to_i256(interval_max_dist(cube.lo[static_cast<std::size_t>(j)], cube.width, den, c));
                acc += d * d;
            }
            i256 rnum = to_i256(static_cast<u128>(radius_.raw) * q);
            return acc <= rnum * rnum;
        }
        case Kind::Polytope: {
            for (int j = 0; j < m_; ++j)
                if (cube.lo[static_cast<std::size_t>(j)] + cube.width >= den)
                    return false;  // straddles the seam
            for (int corner = 0; corner < (1 << m_); ++corner) {
                std::array<i256, 2> pt;
                for (int j = 0; j < m_; ++j) {
                    u128 v = cube.lo[static_cast<std::size_t>(j)] + ((corner >> j) & 1 ? cube.width : 0);
                    pt[static_cast<std::size_t>(j)] = to_i256(v);
                }
                std::size_t n = verts_.size();
                for (std::size_t i = 0; i < n; ++i) {
                    std::array<i256, 2> a = {to_i256(static_cast<u128>(verts_[i][0].raw) * q),
                                             to_i256(static_cast<u128>(verts_[i][1].raw) * q)};
                    std::array<i256, 2> b = {
                        to_i256(static_cast<u128>(verts_[(i + 1) % n][0].raw) * q),
                        to_i256(static_cast<u128>(verts_[(i + 1) % n][1].raw) * q)};
                    if (orient(a, b, pt) < 0) return false;
                }
            }
            return true;
        }
        case Kind::Complement:
            return inner_->cube_disjoint(cube);
    }
    return false;
}

bool Region::cube_disjoint(const ExactCube& cube) const {
    require_dim(cube.lo.size());
    const u128 den = cube.den();
    const u64 q = cube.den_factor;
    switch (kind_) {
        case Kind::FullTorus:
            return false;
        case Kind::AxisBox:
            for (int j = 0; j < m_; ++j) {
                u128 a = static_cast<u128>(lo_[static_cast<std::size_t>(j)].raw) * q;
                u128 b = static_cast<u128>(hi_[static_cast<std::size_t>(j)].raw) * q;
                if (interval_disjoint_box_side(cube.lo[static_cast<std::size_t>(j)], cube.width, den, a, b))
                    return true;
            }
            return false;
        case Kind::Ball: {
            i256 acc = 0;
            for (int j = 0; j < m_; ++j) {
                u128 c = static_cast<u128>(center_[static_cast<std::size_t>(j)].raw) * q;
                i256 d = to_i256(interval_min_dist(cube.lo[static_cast<std::size_t>(j)], cube.width, den, c));
                acc += d * d;
            }
            i256 rnum = to_i256(static_cast<u128>(radius_.raw) * q);
            return acc > rnum * rnum;
        }
        case Kind::Polytope: {
            // split a wrapping cube into flat rectangles, then exact
            // rectangle-vs-convex-polygon disjointness per piece
            std::vector<std::array<u128, 2>> xr, yr;  // [lo, hi] pieces per axis
            auto split = [&](u128 lo, std::vector<std::array<u128, 2>>& out) {
                u128 hi = lo + cube.width;
                if (hi <= den) {
                    out.push_back({lo, hi});
                } else {
                    out.push_back({lo, den});
                    out.push_back({0, hi - den});
                }
            };
            split(cube.lo[0], xr);
            split(cube.lo[1], yr);

            std::size_t n = verts_.size();
            std::vector<std::array<i256, 2>> poly(n);
            for (std::size_t i = 0; i < n; ++i)
                poly[i] = {to_i256(static_cast<u128>(verts_[i][0].raw) * q),
                           to_i256(static_cast<u128>(verts_[i][1].raw) * q)};

            auto point_in_poly = [&](const std::array<i256, 2>& pt) {
                for (std::size_t i = 0; i < n; ++i)
                    if (orient(poly[i], poly[(i + 1) % n], pt) < 0) return false;
                return true;
            };

            for (auto& rx : xr)
                for (auto& ry : yr) {
                    std::array<i256, 2> r00 = {to_i256(rx[0]), to_i256(ry[0])};
                    std::array<i256, 2> r10 = {to_i256(rx[1]), to_i256(ry[0])};
                    std::array<i256, 2> r11 = {to_i256(rx[1]), to_i256(ry[1])};
                    std::array<i256, 2> r01 = {to_i256(rx[0]), to_i256(ry[1])};
                    bool hit = point_in_poly(r00) || point_in_poly(r10) || point_in_poly(r11) ||
                               point_in_poly(r01);
                    if (!hit) {
                        // any polygon vertex inside the rectangle?
                        for (std::size_t i = 0; i < n && !hit; ++i)
                            hit = poly[i][0] >= r00[0] && poly[i][0] <= r11[0] &&
                                  poly[i][1] >= r00[1] && poly[i][1] <= r11[1];
                    }
                    if (!hit) {
                        std::array<std::array<std::array<i256, 2>, 2>, 4> edges = {
                            {{r00, r10}, {r10, r11}, {r11, r01}, {r01, r00}}};
                        for (std::size_t i = 0; i < n && !hit; ++i)
                            for (auto& e : edges) {
                                if (segments_intersect(poly[i], poly[(i + 1) % n], e[0], e[1])) {
                                    hit = true;
                                    break;
                                }
                            }
                    }
                    if (hit) return false;
                }
            return true;
        }
        case Kind::Complement:
            return inner_->cube_inside(cube);
    }
    return false;
}

std::string Region::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::FullTorus:
            os << "full-torus(m=" << m_ << ")";
            break;
        case Kind::AxisBox:
            os << "axis-box(lo=(";
            for (int j = 0; j < m_; ++j) os << (j ? "," : "") << format_double(lo_[static_cast<std::size_t>(j)].to_double());
            os << "),hi=(";
            for (int j = 0; j < m_; ++j) os << (j ? "," : "") << format_double(hi_[static_cast<std::size_t>(j)].to_double());
            os << "))";
            break;
        case Kind::Ball:
            os << "euclidean-ball(center=(";
            for (int j = 0; j < m_; ++j) os << (j ? "," : "") << format_double(center_[static_cast<std::size_t>(j)].to_double());
            os << "),radius=" << format_double(radius_.to_double()) << ")";
            break;
        case Kind::Polytope:
            os << "convex-polytope(";
            for (std::size_t i = 0; i < verts_.size(); ++i)
                os << (i ? "," : "") << "(" << format_double(verts_[i][0].to_double()) << ","
                   << format_double(verts_[i][1].to_double()) << ")";
            os << ")";
            break;
        case Kind::Complement:
            os << "complement-of(" << inner_->describe() << ")";
            break;
    }
    return os.str();
}

}  // namespace equilab::region
