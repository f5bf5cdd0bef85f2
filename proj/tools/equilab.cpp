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

// equilab: fractional-part point sets of polynomial systems mod p, torus
// region decompositions, exponential sums, discrepancy, and congruence
// solution counts.  Batch experiments run from a JSON config (`equilab run`);
// the other subcommands are one-shot probes that mirror config fields as
// flags.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "equilab/discrepancy.hpp"
#include "equilab/dyadic.hpp"
#include "equilab/expsum.hpp"
#include "equilab/harness.hpp"
#include "equilab/variety.hpp"
#include "equilab/version.hpp"

using namespace equilab;

namespace {

// exit codes: 0 pass, 1 validation / usage, 2 baseline mismatch
constexpr int kExitValidation = 1;

region::Region region_from_flags(int m, const std::string& kind, const std::string& center,
                                 const std::string& radius, const std::string& lo,
                                 const std::string& hi) {
    auto split = [](const std::string& csv) {
        std::vector<Fixed64> out;
        std::stringstream ss(csv);
        for (std::string tok; std::getline(ss, tok, ',');) out.push_back(parse_unit_decimal(tok));
        return out;
    };
    if (kind == "full-torus") return region::Region::full_torus(m);
    if (kind == "euclidean-ball") return region::Region::ball(split(center), parse_unit_decimal(radius));
    if (kind == "axis-box") return region::Region::axis_box(split(lo), split(hi));
    if (kind == "complement-of-ball")
        return region::Region::complement(
            region::Region::ball(split(center), parse_unit_decimal(radius)));
    throw std::invalid_argument("unsupported --region kind '" + kind +
                                "' (full-torus, euclidean-ball, axis-box, complement-of-ball)");
}

std::optional<std::filesystem::path> cache_dir_from_env() {
    if (const char* env = std::getenv("EQUILAB_CACHE_DIR"); env && *env)
        return std::filesystem::path(env);
    return std::nullopt;
}

int cmd_run(const std::string& config_path) {
    auto [cfg, errs] = harness::load_config_file(config_path);
    if (!cfg) {
        std::cerr << "configuration is invalid:\n";
        for (const auto& e : errs) std::cerr << "  " << e.field << ": " << e.message << "\n";
        return kExitValidation;
    }
    harness::ExperimentResult result;
    harness::BaselineReport baseline;
    int code = harness::run_and_persist(*cfg, &result, &baseline);
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
    std::cerr << "ran " << result.cells.size() << " cell(s) in " << result.wall_seconds << " s\n";
    if (cfg->result_path.empty()) std::cout << harness::to_json_string(result);
    for (const auto& msg : baseline.messages) std::cerr << msg << "\n";
    if (baseline.recorded > 0)
        std::cerr << "baseline: " << baseline.recorded << " cell(s) recorded\n";
    else if (baseline.passed + baseline.failed + baseline.seed_flagged > 0)
        std::cerr << "baseline: " << baseline.passed << " passed, " << baseline.failed
                  << " failed, " << baseline.seed_flagged << " seed-sensitive skipped\n";
    return code;
}

int cmd_check(const std::string& result_path, const std::string& baseline_path) {
    auto read = [](const std::string& path) {
        std::ifstream is(path);
        if (!is) throw std::runtime_error("cannot read " + path);
        std::stringstream ss;
        ss << is.rdbuf();
        return harness::result_from_json(ss.str());
    };
    auto result = read(result_path);
    auto baseline = read(baseline_path);
    auto rep = harness::check_baselines(result, baseline);
    for (const auto& msg : rep.messages) std::cout << msg << "\n";
    std::cout << rep.passed << " passed, " << rep.failed << " failed, " << rep.seed_flagged
              << " seed-sensitive skipped\n";
    return rep.ok() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"equilab: equidistribution experiments for polynomial systems mod p"};
    app.set_version_flag("--version", kLibraryVersion);
    app.require_subcommand(1);

    // shared one-shot flags
    std::string system_text, system_kind = "value", region_kind = "full-torus";
    std::string center = "0.5,0.5", radius = "0.25", box_lo = "0,0", box_hi = "0.5,0.5";
    int m = 2;
    u64 p = 101, seed = 1;

    // ---- run ----
    std::string config_path;
    auto* run = app.add_subcommand("run", "run a JSON experiment config");
    run->add_option("config", config_path, "config file")->required();

    // ---- check ----
    std::string result_path, baseline_path;
    auto* check = app.add_subcommand("check", "compare a result file against a baseline");
    check->add_option("result", result_path)->required();
    check->add_option("baseline", baseline_path)->required();

    auto add_region_flags = [&](CLI::App* cmd) {
        cmd->add_option("--region", region_kind,
                        "full-torus | euclidean-ball | axis-box | complement-of-ball");
        cmd->add_option("--center", center, "ball center, comma-separated decimals");
        cmd->add_option("--radius", radius, "ball radius decimal");
        cmd->add_option("--lo", box_lo, "box lower corner decimals");
        cmd->add_option("--hi", box_hi, "box upper corner decimals");
    };

    // ---- solve ----
    u64 nu = 1;
    auto* solve = app.add_subcommand("solve", "enumerate solutions of a congruence system");
    solve->add_option("--system", system_text, "polynomials, ';'-separated")->required();
    solve->add_option("--m", m, "variable count")->required();
    solve->add_option("--p", p, "prime modulus")->required();
    solve->add_option("--nu", nu, "asserted component count (for the count residual)");
    add_region_flags(solve);

    // ---- points ----
    auto* points = app.add_subcommand("points", "list lattice points of p * region");
    points->add_option("--m", m)->required();
    points->add_option("--p", p)->required();
    add_region_flags(points);

    // ---- cover ----
    u64 depth = 6;
    auto* cover = app.add_subcommand("cover", "build an anchored dyadic cover of a region");
    cover->add_option("--m", m);
    cover->add_option("--depth", depth, "number of dyadic layers");
    cover->add_option("--seed", seed, "anchor seed");
    cover->add_option("--p", p, "prime whose lattice the anchor must avoid (0 = none)");
    add_region_flags(cover);

    // ---- expsum ----
    std::string coeffs = "1";
    i64 corner = 0;
    u64 width = 0, L = 0;
    auto* expsum_cmd = app.add_subcommand("expsum", "exponential sums over a cube or region");
    expsum_cmd->add_option("--system", system_text)->required();
    expsum_cmd->add_option("--m", m)->required();
    expsum_cmd->add_option("--p", p)->required();
    expsum_cmd->add_option("--a", coeffs, "coefficient vector, comma-separated (empty = scan)");
    expsum_cmd->add_option("--corner", corner, "cube corner (same for every axis)");
    expsum_cmd->add_option("--width", width, "cube width; 0 = use the region instead");
    expsum_cmd->add_option("--L", L, "scan bound (0 = largest admissible)");
    add_region_flags(expsum_cmd);

    // ---- disc ----
    u64 trials = 10'000;
    auto* disc = app.add_subcommand("disc", "discrepancy report for a system over a region");
    disc->add_option("--system", system_text)->required();
    disc->add_option("--m", m)->required();
    disc->add_option("--p", p)->required();
    disc->add_option("--L", L, "scan bound (0 = largest admissible)");
    disc->add_option("--seed", seed, "seed for the sampled fallback");
    disc->add_option("--trials", trials, "sampled fallback candidates");
    add_region_flags(disc);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return cmd_run(config_path);
        if (*check) return cmd_check(result_path, baseline_path);

        auto split_polys = [&](const std::string& text) {
            std::vector<std::string> polys;
            std::stringstream ss(text);
            for (std::string tok; std::getline(ss, tok, ';');)
                if (!tok.empty()) polys.push_back(tok);
            return polys;
        };

        if (*solve) {
            PrimeModulus pm(p);
            auto sys = poly::PolySystem::zero_system(m, split_polys(system_text));
            auto sol = variety::solve_system_cached(sys, pm, cache_dir_from_env());
            sol.nu = nu;
            auto reg = region_from_flags(m, region_kind, center, radius, box_lo, box_hi);
            std::cout << "solutions: " << sol.count() << "\n";
            std::cout << "T_p(region): " << variety::count_in_region(sol, reg) << "\n";
            std::cout << "lang_weil_residual: " << format_double(variety::lang_weil_residual(sol))
                      << "\n";
            return 0;
        }
        if (*points) {
            PrimeModulus pm(p);
            auto reg = region_from_flags(m, region_kind, center, radius, box_lo, box_hi);
            auto pts = reg.lattice_points(pm);
            for (std::size_t i = 0; i < pts.size(); ++i) {
                auto row = pts.row(i);
                for (int j = 0; j < m; ++j) std::cout << (j ? " " : "") << row[j];
                std::cout << "\n";
            }
            std::cerr << pts.size() << " point(s)\n";
            return 0;
        }
        if (*cover) {
            auto reg = region_from_flags(m, region_kind, center, radius, box_lo, box_hi);
            std::vector<u64> primes;
            if (p != 0) primes.push_back(p);
            auto anchor = dyadic::draw_anchor(reg.dim(), seed,
                                              dyadic::forbidden_denominators(depth, primes));
            auto cov = dyadic::build_cover(reg, depth, anchor);
            dyadic::export_cover_jsonl(cov, std::cout);
            auto diag = dyadic::cover_diagnostics(cov, reg);
            dyadic::export_diagnostics_csv(diag, std::cerr);
            std::cerr << "union=" << format_double(diag.union_measure)
                      << " deficiency=" << format_double(diag.deficiency) << "\n";
            return 0;
        }
        if (*expsum_cmd) {
            PrimeModulus pm(p);
            auto sys = poly::PolySystem::value_system(m, split_polys(system_text));
            if (width > 0) {
                std::vector<i64> corners(static_cast<std::size_t>(m), corner);
                if (!coeffs.empty()) {
                    std::vector<i64> a;
                    std::stringstream ss(coeffs);
                    for (std::string tok; std::getline(ss, tok, ',');) a.push_back(std::stoll(tok));
                    auto s = expsum::exp_sum_cube(sys, a, pm, corners, width);
                    std::cout << "re=" << format_double(s.value.real())
                              << " im=" << format_double(s.value.imag())
                              << " abs=" << format_double(s.abs()) << " over " << s.range << "\n";
                } else {
                    auto table = expsum::ValueTable::over_cube(sys, pm, corners, width);
                    u64 bound = L != 0 ? L : expsum::admissible_scan_bound(pm, sys.n());
                    expsum::export_scan_csv(table, bound,
                                            expsum::fk_envelope(pm, width, m), std::cout);
                }
            } else {
                auto reg = region_from_flags(m, region_kind, center, radius, box_lo, box_hi);
                auto table = expsum::ValueTable::over_region(sys, pm, reg);
                u64 bound = L != 0 ? L : expsum::admissible_scan_bound(pm, sys.n());
                auto scan = expsum::max_exp_sum(table, bound);
                std::cout << "s_star=" << format_double(scan.s_star) << " L=" << bound
                          << " points=" << table.point_count() << "\n";
            }
            return 0;
        }
        if (*disc) {
            PrimeModulus pm(p);
            auto sys = poly::PolySystem::value_system(m, split_polys(system_text));
            auto reg = region_from_flags(m, region_kind, center, radius, box_lo, box_hi);
            discrepancy::DiscOptions opts;
            opts.L = L;
            opts.trials = trials;
            opts.seed = seed;
            auto rep = discrepancy::discrepancy_of_system(sys, pm, reg, opts);
            std::cout << "{\"p\":" << rep.p << ",\"system_hash\":\"" << std::hex << rep.system_hash
                      << std::dec << "\",\"region\":\"" << rep.region << "\",\"N\":" << rep.N
                      << ",\"exact_D\":" << (rep.exact_D ? format_double(*rep.exact_D) : "null")
                      << ",\"sampled_D\":"
                      << (rep.sampled_D ? format_double(*rep.sampled_D) : "null")
                      << ",\"S_star\":" << format_double(rep.s_star) << ",\"L\":" << rep.L_used
                      << ",\"ks_bound\":" << format_double(rep.ks)
                      << ",\"thm1_ratio\":" << format_double(rep.thm1_ratio)
                      << ",\"thm2_ratio\":" << format_double(rep.thm2_ratio) << "}\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitValidation;
}
