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

#ifndef EQUILAB_HARNESS_HPP
#define EQUILAB_HARNESS_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "equilab/dyadic.hpp"
#include "equilab/poly.hpp"
#include "equilab/region.hpp"

namespace equilab::harness {

enum class ExperimentKind { Discrepancy, ExpSum, Cover, Variety, Sweep };

struct ValidationError {
    std::string field;
    std::string message;
};

/// Parsed, validated experiment description.  One config drives the product
/// grid (prime x region); every numeric output is a function of (config,
/// seed) alone.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::Discrepancy;
    u64 seed = 0;
    std::optional<poly::PolySystem> system;
    std::vector<u64> primes;
    std::vector<region::Region> regions;
    dyadic::DepthPolicy depth_policy = dyadic::DepthPolicy::Thm2;
    u64 explicit_depth = 0;
    u64 L = 0;  // 0 = auto (largest admissible)
    u64 trials = 10'000;
    std::optional<u64> nu;
    std::string nu_justification;
    std::optional<u64> fouvry_k;
    std::optional<std::vector<i64>> cube_corner;  // expsum: cube instead of region
    std::optional<u64> cube_width;
    std::string result_path, csv_path, baseline_path, cover_export_dir;
    std::optional<std::filesystem::path> cache_dir;  // falls back to EQUILAB_CACHE_DIR

    std::string canonical_json;  // for hashing / echoing
};

/// Parses and validates; every problem is reported, none hides behind the
/// first.
std::pair<std::optional<ExperimentConfig>, std::vector<ValidationError>> load_config_string(
    const std::string& json_text);
std::pair<std::optional<ExperimentConfig>, std::vector<ValidationError>> load_config_file(
    const std::filesystem::path& path);

/// One recorded value.  cls 'i' compares exactly, 's' to 1e-9 relative,
/// 'd' to 1e-6 relative; seed_sensitive values are skipped (flagged, not
/// failed) when baselines were recorded under a different seed.
struct FieldValue {
    std::string name;
    bool is_int = false;
    u64 ival = 0;
    double fval = 0;
    char cls = 's';
    bool seed_sensitive = false;
};

struct CellRecord {
    std::string key;
    std::vector<FieldValue> fields;

    const FieldValue* find(const std::string& name) const;
};

struct ExperimentResult {
    std::string config_hash;
    std::string library_version;
    std::string kind;
    u64 seed = 0;
    std::string system;
    std::string nu_justification;
    std::vector<std::string> warnings;
    std::vector<CellRecord> cells;
    double wall_seconds = 0;  // never serialized: reruns must be byte-identical
};

ExperimentResult run(const ExperimentConfig& config);

/// Deterministic payload (sorted keys, shortest round-trip doubles);
/// wall-clock time is intentionally absent.
std::string to_json_string(const ExperimentResult& result);
ExperimentResult result_from_json(const std::string& json_text);

std::string to_csv_string(const ExperimentResult& result);

/// Writes result JSON / CSV to the config's paths and handles the baseline
/// protocol: missing baseline file -> record; existing -> compare.
struct BaselineReport {
    int passed = 0, failed = 0, recorded = 0, seed_flagged = 0;
    std::vector<std::string> messages;

    bool ok() const { return failed == 0; }
};

BaselineReport check_baselines(const ExperimentResult& result, const ExperimentResult& baseline,
                               double tol_sum = 1e-9, double tol_disc = 1e-6);

/// run + write outputs + baseline record/compare.  Returns the process exit
/// code contract: 0 pass, 2 baseline mismatch.
int run_and_persist(const ExperimentConfig& config, ExperimentResult* out_result = nullptr,
                    BaselineReport* out_baseline = nullptr);

}  // namespace equilab::harness

#endif
