/*
 * Copyright 2026 The qsearch Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef QSEARCH_EXPERIMENT_H
#define QSEARCH_EXPERIMENT_H

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "qsearch/analysis.h"
#include "qsearch/circuit.h"
#include "qsearch/families.h"
#include "qsearch/sim.h"

namespace qsearch::experiment {

constexpr const char *kToolVersion = "0.1.0";
constexpr const char *kReportSchema = "qsearch.report";
constexpr int kReportSchemaVersion = 1;
/// Largest width for which the "all" oracle set is accepted.
constexpr std::size_t kMaxAllWidth = 6;

/// Which masks an experiment runs: an explicit list, every mask, or a seeded sample.
struct OracleSet {
    enum class Kind { List, All, Sample };
    Kind kind = Kind::All;
    std::vector<std::string> masks;
    std::size_t sample_size = 0;
    std::uint64_t sample_seed = 0;

    /// "all", "sample:k:seed", or comma-separated masks.
    static OracleSet parse(std::string_view text);
    std::string str() const;
    /// Sorted, duplicate-free masks of width n. Throws ValidationError("oracle_set").
    std::vector<BitPattern> resolve(std::size_t n) const;
};

struct ExperimentConfig {
    families::Family family = families::Family::Grover;
    std::size_t n = 3;
    families::Partition partition;
    std::size_t diffuser_size = 0;
    synth::OracleStyle style = synth::OracleStyle::PlainMcz;
    families::Uncompute uncompute = families::Uncompute::Full;
    std::size_t iterations = 1;
    std::size_t ancillas = 1;
    bool condition_value = false;
    OracleSet oracle_set;
    /// 0 runs the exact simulator only; the measured side then equals theory.
    std::uint64_t shots = 0;
    sim::NoiseModel noise;
    std::uint64_t seed = 1;
    std::string out = ".";
    unsigned threads = 1;

    /// Unknown keys are ignored. Throws ValidationError naming the field.
    static ExperimentConfig from_json(const nlohmann::json &json);
    nlohmann::json to_json() const;
    /// Checks every field and dry-builds one circuit. Throws ValidationError.
    void validate() const;
    families::FamilyRequest request_for(const BitPattern &mask) const;
};

/// "p1=0,p2=0.01,pm=0.005"; omitted keys stay zero. Throws ValidationError("noise").
sim::NoiseModel parse_noise(std::string_view text);
/// Comma-separated numbers. Throws ValidationError(field).
std::vector<double> parse_grid(std::string_view text, const std::string &field = "grid");

/// Seed of one oracle's trajectories, derived from the run seed and the mask.
std::uint64_t oracle_seed(std::uint64_t seed, const BitPattern &mask);

struct OracleResult {
    BitPattern mask;
    std::uint64_t seed = 0;
    sim::Distribution theoretical;
    sim::Distribution measured;
    double p_t = 0.0;
    double p_succ = 0.0;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<OracleResult> oracles;
    std::vector<double> relabeled_theoretical;
    std::vector<double> relabeled_measured;
    analysis::Metrics metrics;
    /// Census of the lowered circuit for the first oracle (masks only add one-qubit gates).
    GateCensus census;
    std::size_t circuit_qubits = 0;
    std::size_t circuit_clbits = 0;
    std::map<std::string, std::string> circuit_metadata;
    double seconds = 0.0;

    /// Schema-versioned JSON. Timing lives only under the "timing" key.
    nlohmann::json to_json() const;
    /// Throws ParseError on a schema mismatch or missing field.
    static ExperimentReport from_json(const nlohmann::json &json);
};

/// Builds, lowers and simulates every oracle in the set, then aggregates.
ExperimentReport run(const ExperimentConfig &config);

/// p2 at which the exact-vs-noisy ratio R reaches `target_r`, by bisection on
/// [0, 1] with common random numbers. Uses the config's shots (at least 1000).
double fit_p2(ExperimentConfig config, double target_r, double tolerance = 1e-4);

struct BuildArtifact {
    std::filesystem::path file;
    GateCensus census;
};

/// Writes `<out>/circuit_<family>_<mask>.qasm` (lowered) for every oracle and
/// prints one census line per file.
std::vector<BuildArtifact> cmd_build(const ExperimentConfig &config, std::ostream &log);

/// Writes the report to `report_path` (default `<out>/report_<family>_n<n>.json`).
std::filesystem::path cmd_run(const ExperimentConfig &config, std::ostream &log,
                              const std::filesystem::path &report_path = {});

struct PlotArtifact {
    std::filesystem::path csv;
    std::filesystem::path tex;
};

/// Reads a report and writes `<stem>.csv` and `<stem>.tex` (stem defaults to
/// the report path without its extension).
PlotArtifact cmd_plot(const std::filesystem::path &report, const std::filesystem::path &stem = {});

struct SweepRow {
    double p2 = 0.0;
    double p_succ = 0.0;
    double p_t = 0.0;
    double r = 0.0;
    analysis::Interval ci;
};

/// One run per p2 value (grid non-empty and ascending) with the shared seed.
/// Writes `<out>/sweep_<family>_n<n>.csv` and echoes it to `log`.
std::vector<SweepRow> cmd_sweep(const ExperimentConfig &config, const std::vector<double> &grid, std::ostream &log);

/// Loads a JSON config file. Throws ValidationError("config") when unreadable.
ExperimentConfig load_config(const std::filesystem::path &path);

}  // namespace qsearch::experiment

#endif
