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

#include "equilab/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "equilab/discrepancy.hpp"
#include "equilab/errors.hpp"
#include "equilab/expsum.hpp"
#include "equilab/parallel.hpp"
#include "equilab/rng.hpp"
#include "equilab/variety.hpp"
#include "equilab/version.hpp"

namespace equilab::harness {

using nlohmann::json;

namespace {

std::string hex16(u64 v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

u64 fnv1a(const std::string& s) {
    u64 h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string kind_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::Discrepancy: return "discrepancy";
        case ExperimentKind::ExpSum: return "expsum";
        case ExperimentKind::Cover: return "cover";
        case ExperimentKind::Variety: return "variety";
        case ExperimentKind::Sweep: return "sweep";
    }
    return "?";
}

// ---- region descriptors ----------------------------------------------------

Fixed64 parse_coord(const json& j, std::vector<ValidationError>& errs, const std::string& where) {
    try {
        if (j.is_string()) return parse_unit_decimal(j.get<std::string>());
        if (j.is_number()) return parse_unit_decimal(j.dump());
        errs.push_back({where, "coordinate must be a decimal string"});
    } catch (const std::exception& e) {
        errs.push_back({where, e.what()});
    }
    return Fixed64::zero();
}

std::optional<region::Region> region_from_json(const json& j, u64 polytope_seed,
                                               std::vector<ValidationError>& errs,
                                               const std::string& where) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
        errs.push_back({where, "region needs a string 'kind'"});
        return std::nullopt;
    }
    std::string kind = j["kind"].get<std::string>();
    try {
        if (kind == "full-torus") {
            int m = j.value("m", 0);
            if (m < 1) {
                errs.push_back({where, "full-torus needs a positive 'm'"});
                return std::nullopt;
            }
            return region::Region::full_torus(m);
        }
        if (kind == "axis-box") {
            std::vector<Fixed64> lo, hi;
            for (const auto& c : j.at("lo")) lo.push_back(parse_coord(c, errs, where + ".lo"));
            for (const auto& c : j.at("hi")) hi.push_back(parse_coord(c, errs, where + ".hi"));
            return region::Region::axis_box(std::move(lo), std::move(hi));
        }
        if (kind == "euclidean-ball") {
            std::vector<Fixed64> center;
            for (const auto& c : j.at("center")) center.push_back(parse_coord(c, errs, where + ".center"));
            Fixed64 r = parse_coord(j.at("radius"), errs, where + ".radius");
            return region::Region::ball(std::move(center), r);
        }
        if (kind == "convex-polytope") {
            std::vector<std::array<Fixed64, 2>> verts;
            for (const auto& v : j.at("vertices")) {
                if (!v.is_array() || v.size() != 2) {
                    errs.push_back({where + ".vertices", "each vertex is a [x, y] pair"});
                    return std::nullopt;
                }
                verts.push_back({parse_coord(v[0], errs, where + ".vertices"),
                                 parse_coord(v[1], errs, where + ".vertices")});
            }
            u64 seed = j.value("mc_seed", polytope_seed);
            u64 samples = j.value("mc_samples", u64{1'000'000});
            return region::Region::polytope(std::move(verts), seed, samples);
        }
        if (kind == "complement-of") {
            auto inner = region_from_json(j.at("inner"), polytope_seed, errs, where + ".inner");
            if (!inner) return std::nullopt;
            return region::Region::complement(std::move(*inner));
        }
        errs.push_back({where, "unknown region kind '" + kind + "'"});
    } catch (const std::exception& e) {
        errs.push_back({where, e.what()});
    }
    return std::nullopt;
}

// ---- field helpers ---------------------------------------------------------

FieldValue int_field(std::string name, u64 v, bool seed_sensitive = false) {
    FieldValue f;
    f.name = std::move(name);
    f.is_int = true;
    f.ival = v;
    f.cls = 'i';
    f.seed_sensitive = seed_sensitive;
    return f;
}

FieldValue float_field(std::string name, double v, char cls, bool seed_sensitive = false) {
    FieldValue f;
    f.name = std::move(name);
    f.fval = v;
    f.cls = cls;
    f.seed_sensitive = seed_sensitive;
    return f;
}

std::string cell_key(std::optional<u64> p, const std::string& range) {
    std::string key = "p=";
    key += p ? std::to_string(*p) : "-";
    key += "|range=" + range;
    return key;
}

// ---- executors -------------------------------------------------------------

CellRecord run_discrepancy_cell(const ExperimentConfig& cfg, u64 pv, std::size_t region_idx) {
    const auto& region = cfg.regions[region_idx];
    PrimeModulus p(pv);
    discrepancy::DiscOptions opts;
    opts.L = cfg.L;
    opts.trials = cfg.trials;
    opts.seed = derive_seed(cfg.seed, {pv, region_idx});
    auto rep = discrepancy::discrepancy_of_system(*cfg.system, p, region, opts);

    CellRecord cell;
    cell.key = cell_key(pv, region.describe());
    cell.fields.push_back(int_field("N", rep.N));
    if (rep.exact_D) cell.fields.push_back(float_field("exact_D", *rep.exact_D, 'd'));
    if (rep.sampled_D) cell.fields.push_back(float_field("sampled_D", *rep.sampled_D, 'd', true));
    cell.fields.push_back(float_field("s_star", rep.s_star, 's'));
    cell.fields.push_back(int_field("L_used", rep.L_used));
    cell.fields.push_back(float_field("ks_bound", rep.ks, 's'));
    bool seed_dep = !rep.exact_D.has_value();
    cell.fields.push_back(float_field("thm1_ratio", rep.thm1_ratio, 'd', seed_dep));
    cell.fields.push_back(float_field("thm2_ratio", rep.thm2_ratio, 'd', seed_dep));
    return cell;
}

CellRecord run_expsum_cell(const ExperimentConfig& cfg, u64 pv,
                           std::optional<std::size_t> region_idx) {
    PrimeModulus p(pv);
    const auto& sys = *cfg.system;
    expsum::ValueTable table;
    std::string range;
    if (region_idx) {
        table = expsum::ValueTable::over_region(sys, p, cfg.regions[*region_idx]);
        range = cfg.regions[*region_idx].describe();
    } else {
        u64 w = std::min<u64>(*cfg.cube_width, pv - 1);
        table = expsum::over_cube_cached(sys, p, *cfg.cube_corner, w, cfg.cache_dir);
        range = table.range();
    }
    u64 L = cfg.L != 0 ? cfg.L : expsum::admissible_scan_bound(p, sys.n());
    auto scan = expsum::max_exp_sum(table, L);

    CellRecord cell;
    cell.key = cell_key(pv, range);
    cell.fields.push_back(int_field("point_count", table.point_count()));
    cell.fields.push_back(float_field("s_star", scan.s_star, 's'));
    cell.fields.push_back(int_field("L_used", L));
    for (std::size_t j = 0; j < scan.argmax.a.size(); ++j)
        cell.fields.push_back(int_field("argmax_" + std::to_string(j + 1),
                                        static_cast<u64>(scan.argmax.a[j] < 0
                                                             ? static_cast<u64>(-scan.argmax.a[j])
                                                             : static_cast<u64>(scan.argmax.a[j]))));
    if (!region_idx) {
        u64 w = std::min<u64>(*cfg.cube_width, pv - 1);
        auto ind = poly::degree2_independent(sys, p);
        if (ind.independent)
            cell.fields.push_back(float_field(
                "fk_ratio", scan.s_star / expsum::fk_envelope(p, w, sys.m), 's'));
    }
    return cell;
}

CellRecord run_cover_cell(const ExperimentConfig& cfg, std::optional<u64> pv,
                          std::size_t region_idx, std::size_t cell_idx) {
    const auto& region = cfg.regions[region_idx];
    u64 depth;
    std::vector<u64> primes_for_anchor;
    if (pv) {
        PrimeModulus p(*pv);
        depth = dyadic::depth_for_policy(cfg.depth_policy, p,
                                         cfg.system ? cfg.system->n() : 1, cfg.explicit_depth);
        primes_for_anchor.push_back(*pv);
    } else {
        depth = cfg.explicit_depth;
    }
    auto forb = dyadic::forbidden_denominators(depth, primes_for_anchor);
    auto anchor = dyadic::draw_anchor(region.dim(),
                                      derive_seed(cfg.seed, {pv.value_or(0), region_idx}), forb);
    auto cover = dyadic::build_cover(region, depth, anchor);
    auto diag = dyadic::cover_diagnostics(cover, region);

    CellRecord cell;
    cell.key = cell_key(pv, region.describe());
    cell.fields.push_back(int_field("depth", depth));
    cell.fields.push_back(int_field("total_cubes", cover.total_cubes(), true));
    double max_ws = 0, max_vws = 0;
    for (const auto& ld : diag.layers) {
        cell.fields.push_back(int_field("count_" + std::to_string(ld.layer), ld.count, true));
        max_ws = std::max(max_ws, ld.ratio_ws);
        max_vws = std::max(max_vws, ld.ratio_vws);
    }
    cell.fields.push_back(float_field("union_measure", diag.union_measure, 's', true));
    cell.fields.push_back(float_field("deficiency", diag.deficiency, 's', true));
    cell.fields.push_back(float_field("deficiency_ratio_ws", diag.deficiency_ratio_ws, 's', true));
    cell.fields.push_back(float_field("deficiency_ratio_vws", diag.deficiency_ratio_vws, 's', true));
    cell.fields.push_back(float_field("max_ratio_ws", max_ws, 's', true));
    cell.fields.push_back(float_field("max_ratio_vws", max_vws, 's', true));

    if (!cfg.cover_export_dir.empty()) {
        std::filesystem::create_directories(cfg.cover_export_dir);
        auto base = std::filesystem::path(cfg.cover_export_dir);
        std::ofstream jl(base / ("cover_" + std::to_string(cell_idx) + ".jsonl"));
        dyadic::export_cover_jsonl(cover, jl);
        std::ofstream dc(base / ("diagnostics_" + std::to_string(cell_idx) + ".csv"));
        dyadic::export_diagnostics_csv(diag, dc);
    }
    return cell;
}

CellRecord run_variety_cell(const ExperimentConfig& cfg, u64 pv, std::size_t region_idx) {
    const auto& region = cfg.regions[region_idx];
    PrimeModulus p(pv);
    auto sol = variety::solve_system_cached(*cfg.system, p, cfg.cache_dir);
    sol.nu = cfg.nu;

    CellRecord cell;
    cell.key = cell_key(pv, region.describe());
    cell.fields.push_back(int_field("solution_count", sol.count()));
    cell.fields.push_back(int_field("T_p", variety::count_in_region(sol, region)));
    double lw = variety::lang_weil_residual(sol);
    cell.fields.push_back(float_field("lw_residual", lw, 's'));
    // a configured nu that misdescribes X_p at a small prime shows up as a
    // blown residual: flag it instead of failing the run
    if (std::fabs(lw) > 10.0) cell.fields.push_back(int_field("suspected_bad_reduction", 1));

    using Kind = region::Region::Kind;
    Kind k = region.kind();
    bool thm3_ok = sol.count() > 0 &&
                   (k == Kind::Ball || k == Kind::FullTorus ||
                    (k == Kind::Complement && region.inner().kind() == Kind::Ball));
    if (thm3_ok)
        cell.fields.push_back(
            float_field("thm3_residual", variety::theorem3_residual(sol, region), 's'));

    if (cfg.fouvry_k) {
        u64 k_grid = *cfg.fouvry_k;
        auto forb = dyadic::forbidden_denominators(20, std::vector<u64>{pv});
        auto anchor = dyadic::draw_anchor(region.dim(),
                                          derive_seed(cfg.seed, {pv, region_idx, 0xf0}), forb);
        double max_abs = 0;
        std::vector<u64> coords(static_cast<std::size_t>(sol.m), 0);
        u64 total = 1;
        for (int j = 0; j < sol.m; ++j) total *= k_grid;
        dyadic::AnchoredCube cube;
        cube.level = k_grid;
        cube.coords = coords;
        for (u64 i = 0; i < total; ++i) {
            max_abs = std::max(max_abs,
                               std::fabs(variety::fouvry_cube_residual(sol, cube, anchor)));
            for (int j = sol.m - 1; j >= 0; --j) {
                if (++cube.coords[static_cast<std::size_t>(j)] < k_grid) break;
                cube.coords[static_cast<std::size_t>(j)] = 0;
            }
        }
        cell.fields.push_back(float_field("fouvry_max_abs", max_abs, 's', true));
    }
    return cell;
}

}  // namespace

const FieldValue* CellRecord::find(const std::string& name) const {
    for (const auto& f : fields)
        if (f.name == name) return &f;
    return nullptr;
}

// ---- config loading ---------------------------------------------------------

std::pair<std::optional<ExperimentConfig>, std::vector<ValidationError>> load_config_string(
    const std::string& json_text) {
    std::vector<ValidationError> errs;
    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& e) {
        errs.push_back({"config", std::string("invalid JSON: ") + e.what()});
        return {std::nullopt, errs};
    }
    if (!j.is_object()) {
        errs.push_back({"config", "top level must be an object"});
        return {std::nullopt, errs};
    }

    ExperimentConfig cfg;

    // kind
    std::string kind = j.value("kind", std::string{});
    if (kind == "discrepancy") cfg.kind = ExperimentKind::Discrepancy;
    else if (kind == "expsum") cfg.kind = ExperimentKind::ExpSum;
    else if (kind == "cover") cfg.kind = ExperimentKind::Cover;
    else if (kind == "variety") cfg.kind = ExperimentKind::Variety;
    else if (kind == "sweep") cfg.kind = ExperimentKind::Sweep;
    else errs.push_back({"kind", "must be one of discrepancy|expsum|cover|variety|sweep"});

    // seed is mandatory: reproducibility beats convenience
    if (!j.contains("seed") || !j["seed"].is_number_unsigned())
        errs.push_back({"seed", "a non-negative integer seed is mandatory"});
    else
        cfg.seed = j["seed"].get<u64>();

    // system
    bool needs_value_system = cfg.kind == ExperimentKind::Discrepancy ||
                              cfg.kind == ExperimentKind::ExpSum ||
                              cfg.kind == ExperimentKind::Sweep;
    bool needs_zero_system = cfg.kind == ExperimentKind::Variety;
    if (j.contains("system")) {
        try {
            const auto& js = j["system"];
            int m = js.at("m").get<int>();
            std::vector<std::string> texts = js.at("polys").get<std::vector<std::string>>();
            std::string sk = js.value("kind", needs_zero_system ? "zero" : "value");
            if (sk == "value")
                cfg.system = poly::PolySystem::value_system(m, texts);
            else if (sk == "zero")
                cfg.system = poly::PolySystem::zero_system(m, texts);
            else
                errs.push_back({"system.kind", "must be 'value' or 'zero'"});
        } catch (const std::exception& e) {
            errs.push_back({"system", e.what()});
        }
    }
    if ((needs_value_system || needs_zero_system) && !cfg.system)
        errs.push_back({"system", "this experiment kind needs a polynomial system"});
    if (cfg.system) {
        if (needs_value_system && cfg.system->kind != poly::SystemKind::Value)
            errs.push_back({"system.kind", "this experiment kind needs a value system"});
        if (needs_zero_system && cfg.system->kind != poly::SystemKind::Zero)
            errs.push_back({"system.kind", "variety experiments need a zero system"});
    }

    // primes
    if (j.contains("primes")) {
        const auto& jp = j["primes"];
        if (jp.is_array()) {
            for (const auto& e : jp) {
                if (!e.is_number_unsigned()) {
                    errs.push_back({"primes", "prime list entries must be non-negative integers"});
                    continue;
                }
                u64 p = e.get<u64>();
                if (p >= (u64{1} << 31) || !is_prime(p))
                    errs.push_back({"primes", std::to_string(p) + " is not a prime below 2^31"});
                else
                    cfg.primes.push_back(p);
            }
        } else if (jp.is_object() && jp.contains("range")) {
            auto range = jp["range"].get<std::vector<u64>>();
            if (range.size() != 2 || range[0] > range[1] || range[1] >= (u64{1} << 31)) {
                errs.push_back({"primes.range", "range must be [lo, hi] with hi < 2^31"});
            } else {
                auto all = primes_in_range(range[0], range[1]);
                u64 count = jp.value("count", static_cast<u64>(all.size()));
                if (count >= all.size() || count == 0) {
                    cfg.primes = all;
                } else if (count == 1) {
                    cfg.primes.push_back(all.front());
                } else {
                    for (u64 i = 0; i < count; ++i)
                        cfg.primes.push_back(all[(i * (all.size() - 1)) / (count - 1)]);
                    cfg.primes.erase(std::unique(cfg.primes.begin(), cfg.primes.end()),
                                     cfg.primes.end());
                }
            }
        } else {
            errs.push_back({"primes", "must be a list of primes or {\"range\": [lo, hi]}"});
        }
    }

    // regions
    if (j.contains("regions")) {
        if (!j["regions"].is_array()) {
            errs.push_back({"regions", "must be an array of region descriptors"});
        } else {
            std::size_t idx = 0;
            for (const auto& jr : j["regions"]) {
                auto r = region_from_json(jr, derive_seed(cfg.seed, {0xbeef, idx}), errs,
                                          "regions[" + std::to_string(idx) + "]");
                if (r) cfg.regions.push_back(std::move(*r));
                ++idx;
            }
        }
    }

    // expsum cube range
    if (j.contains("cube")) {
        try {
            cfg.cube_corner = j["cube"].at("corner").get<std::vector<i64>>();
            cfg.cube_width = j["cube"].at("width").get<u64>();
            if (*cfg.cube_width < 1) errs.push_back({"cube.width", "must be >= 1"});
        } catch (const std::exception& e) {
            errs.push_back({"cube", e.what()});
        }
    }
    bool needs_regions = cfg.kind != ExperimentKind::ExpSum || !cfg.cube_corner;
    if (needs_regions && cfg.regions.empty())
        errs.push_back({"regions", "at least one region is required"});
    if (cfg.system && cfg.cube_corner &&
        static_cast<int>(cfg.cube_corner->size()) != cfg.system->m)
        errs.push_back({"cube.corner", "corner dimension must match the system"});

    // depth policy
    if (j.contains("depth_policy")) {
        const auto& jd = j["depth_policy"];
        if (jd.is_string()) {
            std::string d = jd.get<std::string>();
            if (d == "thm1") cfg.depth_policy = dyadic::DepthPolicy::Thm1;
            else if (d == "thm2") cfg.depth_policy = dyadic::DepthPolicy::Thm2;
            else if (d == "thm3") cfg.depth_policy = dyadic::DepthPolicy::Thm3;
            else errs.push_back({"depth_policy", "must be thm1|thm2|thm3 or {\"explicit\": M}"});
        } else if (jd.is_object() && jd.contains("explicit")) {
            cfg.depth_policy = dyadic::DepthPolicy::Explicit;
            cfg.explicit_depth = jd["explicit"].get<u64>();
            if (cfg.explicit_depth < 1 || cfg.explicit_depth > 20)
                errs.push_back({"depth_policy.explicit", "must lie in [1, 20]"});
        } else {
            errs.push_back({"depth_policy", "must be thm1|thm2|thm3 or {\"explicit\": M}"});
        }
    }
    if (cfg.kind == ExperimentKind::Cover && cfg.primes.empty() &&
        cfg.depth_policy != dyadic::DepthPolicy::Explicit)
        errs.push_back({"depth_policy", "cover without primes needs an explicit depth"});

    cfg.L = j.value("L", u64{0});
    cfg.trials = j.value("trials", u64{10'000});
    if (cfg.trials < 1) errs.push_back({"trials", "must be >= 1"});

    // nu is configuration, never computed
    if (j.contains("nu")) cfg.nu = j["nu"].get<u64>();
    cfg.nu_justification = j.value("nu_justification", std::string{});
    if (cfg.kind == ExperimentKind::Variety) {
        if (!cfg.nu || *cfg.nu < 1)
            errs.push_back({"nu", "variety experiments need nu >= 1"});
        if (cfg.nu_justification.empty())
            errs.push_back({"nu_justification",
                            "state why the system qualifies (component count is asserted, not computed)"});
    }

    if (j.contains("fouvry_k")) {
        cfg.fouvry_k = j["fouvry_k"].get<u64>();
        if (*cfg.fouvry_k < 1 || *cfg.fouvry_k > dyadic::kMaxGridSide)
            errs.push_back({"fouvry_k", "must lie in [1, 2^20]"});
    }

    if (j.contains("output")) {
        const auto& jo = j["output"];
        cfg.result_path = jo.value("result", std::string{});
        cfg.csv_path = jo.value("csv", std::string{});
        cfg.baseline_path = jo.value("baseline", std::string{});
        cfg.cover_export_dir = jo.value("cover_dir", std::string{});
    }

    if (j.contains("cache_dir")) {
        cfg.cache_dir = std::filesystem::path(j["cache_dir"].get<std::string>());
    } else if (const char* env = std::getenv("EQUILAB_CACHE_DIR"); env && *env) {
        cfg.cache_dir = std::filesystem::path(env);
    }

    // guards: config may tighten, never loosen
    u64 guard_lattice = region::kLatticeEnumGuard;
    if (j.contains("guards")) {
        const auto& jg = j["guards"];
        if (jg.contains("lattice_enum")) {
            u64 g = jg["lattice_enum"].get<u64>();
            if (g > region::kLatticeEnumGuard)
                errs.push_back({"guards.lattice_enum", "exceeds the global hard cap 10^9"});
            else
                guard_lattice = g;
        }
        if (jg.contains("scan")) {
            u64 g = jg["scan"].get<u64>();
            if (g > expsum::kScanGuard)
                errs.push_back({"guards.scan", "exceeds the global hard cap 10^7"});
        }
    }

    // exhaustive pre-run size validation: no cell may trip a guard later
    bool needs_lattice = cfg.kind == ExperimentKind::Discrepancy ||
                         cfg.kind == ExperimentKind::Sweep ||
                         cfg.kind == ExperimentKind::Variety ||
                         (cfg.kind == ExperimentKind::ExpSum && !cfg.cube_corner);
    if (needs_lattice && cfg.system) {
        for (u64 p : cfg.primes) {
            u128 total = 1;
            bool over = false;
            for (int i = 0; i < cfg.system->m; ++i) {
                total *= p;
                if (total > guard_lattice) over = true;
            }
            if (over)
                errs.push_back({"primes", "p=" + std::to_string(p) +
                                              " makes p^m exceed the enumeration guard"});
        }
    }

    if (!errs.empty()) return {std::nullopt, errs};

    cfg.canonical_json = j.dump();
    return {cfg, errs};
}

std::pair<std::optional<ExperimentConfig>, std::vector<ValidationError>> load_config_file(
    const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) {
        return {std::nullopt, {{"config", "cannot read " + path.string()}}};
    }
    std::stringstream ss;
    ss << is.rdbuf();
    return load_config_string(ss.str());
}

// ---- run ---------------------------------------------------------------------

ExperimentResult run(const ExperimentConfig& config) {
    auto t0 = std::chrono::steady_clock::now();

    ExperimentResult result;
    result.config_hash = hex16(fnv1a(config.canonical_json));
    result.library_version = kLibraryVersion;
    result.kind = kind_name(config.kind);
    result.seed = config.seed;
    result.system = config.system ? config.system->to_string() : "";
    result.nu_justification = config.nu_justification;

    struct CellSpec {
        std::optional<u64> p;
        std::optional<std::size_t> region_idx;
    };
    std::vector<CellSpec> specs;
    if (config.kind == ExperimentKind::Cover) {
        if (config.primes.empty()) {
            for (std::size_t r = 0; r < config.regions.size(); ++r)
                specs.push_back({std::nullopt, r});
        } else {
            for (u64 p : config.primes)
                for (std::size_t r = 0; r < config.regions.size(); ++r) specs.push_back({p, r});
        }
    } else if (config.kind == ExperimentKind::ExpSum && config.cube_corner) {
        for (u64 p : config.primes) specs.push_back({p, std::nullopt});
    } else {
        for (u64 p : config.primes)
            for (std::size_t r = 0; r < config.regions.size(); ++r) specs.push_back({p, r});
    }

    if (specs.empty())
        result.warnings.push_back("empty cell grid (no primes?); nothing to run");

    std::vector<CellRecord> cells(specs.size());
    std::vector<std::string> cell_errors(specs.size());
    parallel_chunks(specs.size(), [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const auto& spec = specs[i];
            try {
                switch (config.kind) {
                    case ExperimentKind::Discrepancy:
                    case ExperimentKind::Sweep:
                        cells[i] = run_discrepancy_cell(config, *spec.p, *spec.region_idx);
                        break;
                    case ExperimentKind::ExpSum:
                        cells[i] = run_expsum_cell(config, *spec.p, spec.region_idx);
                        break;
                    case ExperimentKind::Cover:
                        cells[i] = run_cover_cell(config, spec.p, *spec.region_idx, i);
                        break;
                    case ExperimentKind::Variety:
                        cells[i] = run_variety_cell(config, *spec.p, *spec.region_idx);
                        break;
                }
            } catch (const std::exception& e) {
                cells[i].key = cell_key(spec.p, spec.region_idx
                                                    ? config.regions[*spec.region_idx].describe()
                                                    : "cube");
                cell_errors[i] = e.what();
            }
        }
    });
    for (std::size_t i = 0; i < specs.size(); ++i) {
        if (!cell_errors[i].empty())
            result.warnings.push_back("cell " + cells[i].key + ": " + cell_errors[i]);
        result.cells.push_back(std::move(cells[i]));
    }

    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

// ---- serialization -----------------------------------------------------------

std::string to_json_string(const ExperimentResult& result) {
    json j;
    j["config_hash"] = result.config_hash;
    j["library_version"] = result.library_version;
    j["kind"] = result.kind;
    j["seed"] = result.seed;
    j["system"] = result.system;
    if (!result.nu_justification.empty()) j["nu_justification"] = result.nu_justification;
    j["warnings"] = result.warnings;
    json cells = json::array();
    for (const auto& cell : result.cells) {
        json jc;
        jc["key"] = cell.key;
        json jf;
        for (const auto& f : cell.fields) {
            json v;
            if (f.is_int)
                v["v"] = f.ival;
            else
                v["v"] = f.fval;
            v["c"] = std::string(1, f.cls);
            if (f.seed_sensitive) v["ss"] = true;
            jf[f.name] = v;
        }
        jc["fields"] = jf;
        cells.push_back(jc);
    }
    j["cells"] = cells;
    return j.dump(2) + "\n";
}

ExperimentResult result_from_json(const std::string& json_text) {
    json j = json::parse(json_text);
    ExperimentResult r;
    r.config_hash = j.value("config_hash", std::string{});
    r.library_version = j.value("library_version", std::string{});
    r.kind = j.value("kind", std::string{});
    r.seed = j.value("seed", u64{0});
    r.system = j.value("system", std::string{});
    r.nu_justification = j.value("nu_justification", std::string{});
    if (j.contains("warnings")) r.warnings = j["warnings"].get<std::vector<std::string>>();
    for (const auto& jc : j.value("cells", json::array())) {
        CellRecord cell;
        cell.key = jc.value("key", std::string{});
        for (auto it = jc["fields"].begin(); it != jc["fields"].end(); ++it) {
            FieldValue f;
            f.name = it.key();
            const auto& v = it.value();
            f.cls = v.value("c", std::string{"s"})[0];
            f.seed_sensitive = v.value("ss", false);
            if (f.cls == 'i') {
                f.is_int = true;
                f.ival = v["v"].get<u64>();
            } else {
                f.fval = v["v"].get<double>();
            }
            cell.fields.push_back(std::move(f));
        }
        r.cells.push_back(std::move(cell));
    }
    return r;
}

std::string to_csv_string(const ExperimentResult& result) {
    // union of field names, sorted, one column each
    std::vector<std::string> names;
    for (const auto& cell : result.cells)
        for (const auto& f : cell.fields) names.push_back(f.name);
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());

    std::ostringstream os;
    os << "key";
    for (const auto& n : names) os << "," << n;
    os << "\n";
    for (const auto& cell : result.cells) {
        os << cell.key;
        for (const auto& n : names) {
            os << ",";
            if (const FieldValue* f = cell.find(n)) {
                if (f->is_int)
                    os << f->ival;
                else
                    os << format_double(f->fval);
            }
        }
        os << "\n";
    }
    return os.str();
}

// ---- baselines -----------------------------------------------------------------

BaselineReport check_baselines(const ExperimentResult& result, const ExperimentResult& baseline,
                               double tol_sum, double tol_disc) {
    BaselineReport rep;
    const bool same_seed = result.seed == baseline.seed;
    for (const auto& bcell : baseline.cells) {
        const CellRecord* rcell = nullptr;
        for (const auto& c : result.cells)
            if (c.key == bcell.key) {
                rcell = &c;
                break;
            }
        if (!rcell) {
            ++rep.failed;
            rep.messages.push_back("missing cell: " + bcell.key);
            continue;
        }
        for (const auto& bf : bcell.fields) {
            const FieldValue* rf = rcell->find(bf.name);
            if (!rf) {
                ++rep.failed;
                rep.messages.push_back(bcell.key + ": missing field " + bf.name);
                continue;
            }
            if (bf.seed_sensitive && !same_seed) {
                ++rep.seed_flagged;
                rep.messages.push_back(bcell.key + "." + bf.name + ": seed-sensitive, skipped");
                continue;
            }
            bool ok;
            if (bf.is_int) {
                ok = rf->is_int && rf->ival == bf.ival;
            } else {
                double tol = bf.cls == 'd' ? tol_disc : tol_sum;
                double scale = std::max(std::fabs(bf.fval), std::fabs(rf->fval));
                ok = bf.fval == rf->fval || std::fabs(bf.fval - rf->fval) <= tol * scale;
            }
            if (ok) {
                ++rep.passed;
            } else {
                ++rep.failed;
                std::ostringstream msg;
                msg << bcell.key << "." << bf.name << ": expected ";
                if (bf.is_int)
                    msg << bf.ival << ", got " << (rf->is_int ? std::to_string(rf->ival)
                                                              : format_double(rf->fval));
                else
                    msg << format_double(bf.fval) << ", got " << format_double(rf->fval);
                rep.messages.push_back(msg.str());
            }
        }
    }
    return rep;
}

int run_and_persist(const ExperimentConfig& config, ExperimentResult* out_result,
                    BaselineReport* out_baseline) {
    ExperimentResult result = run(config);
    if (!config.result_path.empty()) {
        std::filesystem::path p(config.result_path);
        if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
        std::ofstream os(p, std::ios::trunc);
        os << to_json_string(result);
    }
    if (!config.csv_path.empty()) {
        std::filesystem::path p(config.csv_path);
        if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
        std::ofstream os(p, std::ios::trunc);
        os << to_csv_string(result);
    }

    int code = 0;
    if (!config.baseline_path.empty()) {
        std::filesystem::path bp(config.baseline_path);
        if (!std::filesystem::exists(bp)) {
            if (bp.has_parent_path()) std::filesystem::create_directories(bp.parent_path());
            std::ofstream os(bp, std::ios::trunc);
            os << to_json_string(result);
            if (out_baseline) {
                out_baseline->recorded = static_cast<int>(result.cells.size());
                out_baseline->messages.push_back("baseline recorded: " + bp.string());
            }
        } else {
            std::ifstream is(bp);
            std::stringstream ss;
            ss << is.rdbuf();
            auto baseline = result_from_json(ss.str());
            auto rep = check_baselines(result, baseline);
            if (out_baseline) *out_baseline = rep;
            if (!rep.ok()) code = 2;
        }
    }
    if (out_result) *out_result = std::move(result);
    return code;
}

}  // namespace equilab::harness
