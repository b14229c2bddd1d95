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

#include "qsearch/experiment.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>
#include <unordered_set>

#include "qsearch/error.h"
#include "qsearch/qasm.h"
#include "qsearch/synth.h"

namespace qsearch::experiment {

using nlohmann::json;

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(sep, start);
        if (end == std::string_view::npos) end = text.size();
        out.push_back(trim(text.substr(start, end - start)));
        start = end + 1;
    }
    return out;
}

template <typename T>
T parse_number(std::string_view token, const std::string &field) {
    T v{};
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
        throw ValidationError(field, "cannot read '" + std::string(token) + "' as a number");
    }
    return v;
}

/// Runs `f`, re-throwing any json type error as a ValidationError for `field`.
template <typename F>
auto field_guard(const std::string &field, F &&f) -> decltype(f()) {
    try {
        return f();
    } catch (const json::exception &e) {
        throw ValidationError(field, e.what());
    }
}

std::string fmt6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void write_file(const std::filesystem::path &path, const std::string &text) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::Io, "cannot write " + path.string());
    f << text;
    if (!f) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

std::string read_file(const std::filesystem::path &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::Io, "cannot read " + path.string());
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

json distribution_json(const sim::Distribution &d) {
    json j;
    j["width"] = d.width;
    if (d.sampled()) {
        j["shots"] = d.shots;
        j["counts"] = d.counts;
    } else {
        j["probabilities"] = d.probabilities;
    }
    return j;
}

sim::Distribution distribution_from(const json &j) {
    sim::Distribution d;
    d.width = j.at("width").get<std::size_t>();
    if (j.contains("counts")) {
        d.counts = j.at("counts").get<std::vector<std::uint64_t>>();
        d.shots = j.at("shots").get<std::uint64_t>();
    } else {
        d.probabilities = j.at("probabilities").get<std::vector<double>>();
    }
    return d;
}

json census_json(const GateCensus &c) {
    return {{"two_qubit_count", c.two_qubit_count},
            {"one_qubit_count", c.one_qubit_count},
            {"measure_count", c.measure_count},
            {"per_kind", c.per_kind}};
}

GateCensus census_from(const json &j) {
    GateCensus c;
    c.two_qubit_count = j.at("two_qubit_count").get<std::uint64_t>();
    c.one_qubit_count = j.at("one_qubit_count").get<std::uint64_t>();
    c.measure_count = j.at("measure_count").get<std::uint64_t>();
    c.per_kind = j.at("per_kind").get<std::map<std::string, std::uint64_t>>();
    return c;
}

std::string default_stem(const ExperimentConfig &c) {
    return std::string(families::family_name(c.family)) + "_n" + std::to_string(c.n);
}

}  // namespace

OracleSet OracleSet::parse(std::string_view text) {
    text = trim(text);
    OracleSet s;
    if (text == "all") {
        s.kind = Kind::All;
        return s;
    }
    if (text.starts_with("sample:")) {
        auto parts = split(text, ':');
        if (parts.size() != 3) throw ValidationError("oracle_set", "expected sample:k:seed, got '" + std::string(text) + "'");
        s.kind = Kind::Sample;
        s.sample_size = parse_number<std::size_t>(parts[1], "oracle_set");
        s.sample_seed = parse_number<std::uint64_t>(parts[2], "oracle_set");
        return s;
    }
    s.kind = Kind::List;
    for (auto token : split(text, ',')) s.masks.emplace_back(token);
    return s;
}

std::string OracleSet::str() const {
    switch (kind) {
        case Kind::All:
            return "all";
        case Kind::Sample:
            return "sample:" + std::to_string(sample_size) + ":" + std::to_string(sample_seed);
        case Kind::List:
            break;
    }
    std::string out;
    for (const auto &m : masks) out += (out.empty() ? "" : ",") + m;
    return out;
}

std::vector<BitPattern> OracleSet::resolve(std::size_t n) const {
    if (n == 0 || n > 63) throw ValidationError("n", "width must be in 1..63");
    std::vector<BitPattern> out;
    const std::uint64_t space = std::uint64_t{1} << n;
    switch (kind) {
        case Kind::All:
            if (n > kMaxAllWidth) {
                throw ValidationError("oracle_set", "'all' is limited to n <= " + std::to_string(kMaxAllWidth) +
                                                        "; use sample:k:seed");
            }
            for (std::uint64_t v = 0; v < space; v++) out.push_back({v, n});
            return out;
        case Kind::Sample: {
            if (sample_size == 0 || sample_size > space) {
                throw ValidationError("oracle_set", "sample size must be in 1.." + std::to_string(space));
            }
            // Floyd's algorithm: k distinct values without materializing the range.
            std::mt19937_64 rng(splitmix64(sample_seed));
            std::unordered_set<std::uint64_t> chosen;
            for (std::uint64_t j = space - sample_size; j < space; j++) {
                std::uint64_t t = rng() % (j + 1);
                if (!chosen.insert(t).second) chosen.insert(j);
            }
            for (std::uint64_t v : chosen) out.push_back({v, n});
            break;
        }
        case Kind::List:
            if (masks.empty()) throw ValidationError("oracle_set", "mask list is empty");
            for (const auto &m : masks) {
                BitPattern p;
                try {
                    p = BitPattern::parse(m);
                } catch (const Error &e) {
                    throw ValidationError("oracle_set", e.what());
                }
                if (p.width != n) {
                    throw ValidationError("oracle_set", "mask '" + m + "' has width " + std::to_string(p.width) +
                                                            ", expected n = " + std::to_string(n));
                }
                out.push_back(p);
            }
            break;
    }
    std::sort(out.begin(), out.end(), [](const BitPattern &a, const BitPattern &b) { return a.value < b.value; });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

sim::NoiseModel parse_noise(std::string_view text) {
    sim::NoiseModel noise;
    if (trim(text).empty()) return noise;
    for (auto item : split(text, ',')) {
        auto eq = item.find('=');
        if (eq == std::string_view::npos) throw ValidationError("noise", "expected key=value, got '" + std::string(item) + "'");
        auto key = trim(item.substr(0, eq));
        double v = parse_number<double>(trim(item.substr(eq + 1)), "noise");
        if (key == "p1") {
            noise.p1 = v;
        } else if (key == "p2") {
            noise.p2 = v;
        } else if (key == "pm" || key == "p_meas") {
            noise.p_meas = v;
        } else {
            throw ValidationError("noise", "unknown noise key '" + std::string(key) + "' (expected p1, p2, pm)");
        }
    }
    return noise;
}

std::vector<double> parse_grid(std::string_view text, const std::string &field) {
    std::vector<double> out;
    if (trim(text).empty()) return out;
    for (auto token : split(text, ',')) out.push_back(parse_number<double>(token, field));
    return out;
}

std::uint64_t oracle_seed(std::uint64_t seed, const BitPattern &mask) {
    return splitmix64(seed ^ splitmix64(mask.value * 0x2545F4914F6CDD1DULL + mask.width));
}

ExperimentConfig ExperimentConfig::from_json(const json &j) {
    if (!j.is_object()) throw ValidationError("config", "config must be a JSON object");
    ExperimentConfig c;
    auto text = [&](const char *key) { return field_guard(key, [&] { return j.at(key).get<std::string>(); }); };
    if (j.contains("family")) c.family = families::parse_family(text("family"));
    if (j.contains("n")) c.n = field_guard("n", [&] { return j.at("n").get<std::size_t>(); });
    if (j.contains("partition")) {
        const json &p = j.at("partition");
        if (p.is_string()) {
            c.partition = families::Partition::parse(p.get<std::string>());
        } else {
            c.partition.parts = field_guard("partition", [&] { return p.get<std::vector<std::size_t>>(); });
        }
    }
    if (j.contains("diffuser_size")) {
        c.diffuser_size = field_guard("diffuser_size", [&] { return j.at("diffuser_size").get<std::size_t>(); });
    }
    for (const char *key : {"oracle_style", "style"}) {
        if (j.contains(key)) c.style = synth::parse_style(text(key));
    }
    if (j.contains("uncompute")) c.uncompute = families::parse_uncompute(text("uncompute"));
    if (j.contains("iterations")) {
        c.iterations = field_guard("iterations", [&] { return j.at("iterations").get<std::size_t>(); });
    }
    if (j.contains("ancillas")) c.ancillas = field_guard("ancillas", [&] { return j.at("ancillas").get<std::size_t>(); });
    if (j.contains("condition_value")) {
        c.condition_value = field_guard("condition_value", [&] { return j.at("condition_value").get<bool>(); });
    }
    if (j.contains("oracle_set")) {
        const json &o = j.at("oracle_set");
        if (o.is_array()) {
            c.oracle_set.kind = OracleSet::Kind::List;
            c.oracle_set.masks = field_guard("oracle_set", [&] { return o.get<std::vector<std::string>>(); });
        } else {
            c.oracle_set = OracleSet::parse(field_guard("oracle_set", [&] { return o.get<std::string>(); }));
        }
    }
    if (j.contains("shots")) c.shots = field_guard("shots", [&] { return j.at("shots").get<std::uint64_t>(); });
    if (j.contains("noise")) {
        const json &nz = j.at("noise");
        if (nz.is_string()) {
            c.noise = parse_noise(nz.get<std::string>());
        } else {
            field_guard("noise", [&] {
                c.noise.p1 = nz.value("p1", 0.0);
                c.noise.p2 = nz.value("p2", 0.0);
                c.noise.p_meas = nz.value("p_meas", nz.value("pm", 0.0));
                return 0;
            });
        }
    }
    if (j.contains("seed")) c.seed = field_guard("seed", [&] { return j.at("seed").get<std::uint64_t>(); });
    if (j.contains("out")) c.out = text("out");
    if (j.contains("threads")) c.threads = field_guard("threads", [&] { return j.at("threads").get<unsigned>(); });
    return c;
}

json ExperimentConfig::to_json() const {
    json j;
    j["family"] = families::family_name(family);
    j["n"] = n;
    j["partition"] = partition.parts;
    j["diffuser_size"] = diffuser_size;
    j["oracle_style"] = synth::style_name(style);
    j["uncompute"] = families::uncompute_name(uncompute);
    j["iterations"] = iterations;
    j["ancillas"] = ancillas;
    j["condition_value"] = condition_value;
    if (oracle_set.kind == OracleSet::Kind::List) {
        j["oracle_set"] = oracle_set.masks;
    } else {
        j["oracle_set"] = oracle_set.str();
    }
    j["shots"] = shots;
    j["noise"] = {{"p1", noise.p1}, {"p2", noise.p2}, {"p_meas", noise.p_meas}};
    j["seed"] = seed;
    j["out"] = out;
    j["threads"] = threads;
    return j;
}

families::FamilyRequest ExperimentConfig::request_for(const BitPattern &mask) const {
    families::FamilyRequest r;
    r.family = family;
    r.mask = mask.str();
    r.style = style;
    r.iterations = iterations;
    r.partition = partition;
    r.diffuser_size = diffuser_size;
    r.uncompute = uncompute;
    r.ancillas = ancillas;
    r.condition_value = condition_value;
    return r;
}

void ExperimentConfig::validate() const {
    if (n == 0 || n > sim::kMaxSimWidth) {
        throw ValidationError("n", "n must be in 1.." + std::to_string(sim::kMaxSimWidth));
    }
    if (family == families::Family::Wielomianer && n != 4) {
        throw ValidationError("n", "wielomianer (P43) is defined for n = 4 only");
    }
    const bool blocked = family == families::Family::Wojter || family == families::Family::Drzewker ||
                         family == families::Family::WojterAA || family == families::Family::PartialDrzewker;
    if (blocked && partition.parts.empty()) throw ValidationError("partition", "this family needs a partition");
    if (!partition.parts.empty() && partition.n() != n) {
        throw ValidationError("partition", "partition " + partition.str() + " does not sum to n = " + std::to_string(n));
    }
    if (iterations == 0) throw ValidationError("iterations", "iterations must be at least 1");
    if (threads == 0) throw ValidationError("threads", "threads must be at least 1");
    if (out.empty()) throw ValidationError("out", "output directory is empty");
    for (auto [name, v] : {std::pair{"noise.p1", noise.p1}, {"noise.p2", noise.p2}, {"noise.p_meas", noise.p_meas}}) {
        if (!(v >= 0.0 && v <= 1.0)) throw ValidationError(name, std::string(name) + " must lie in [0, 1]");
    }
    if (!noise.noiseless() && shots == 0) throw ValidationError("shots", "a noisy run needs shots > 0");
    std::vector<BitPattern> masks = oracle_set.resolve(n);
    try {
        Circuit c = families::build(request_for(masks.front()));
        if (c.num_qubits() > sim::kMaxSimWidth) {
            throw ValidationError("n", "circuit needs " + std::to_string(c.num_qubits()) + " qubits");
        }
    } catch (const ValidationError &) {
        throw;
    } catch (const Error &e) {
        switch (e.code()) {
            case ErrorCode::UnsupportedPartition:
                throw ValidationError("partition", e.what());
            case ErrorCode::BadDiffuserSize:
                throw ValidationError("diffuser_size", e.what());
            case ErrorCode::MissingAncilla:
                throw ValidationError("ancillas", e.what());
            case ErrorCode::BadWidth:
            case ErrorCode::BadMask:
                throw ValidationError("n", e.what());
            default:
                throw ValidationError("family", e.what());
        }
    }
}

json ExperimentReport::to_json() const {
    json j;
    j["schema"] = kReportSchema;
    j["schema_version"] = kReportSchemaVersion;
    j["tool_version"] = kToolVersion;
    j["config"] = config.to_json();
    json circuit;
    circuit["num_qubits"] = circuit_qubits;
    circuit["num_clbits"] = circuit_clbits;
    circuit["census"] = census_json(census);
    circuit["metadata"] = circuit_metadata;
    j["circuit"] = circuit;
    json oracle_list = json::array();
    for (const auto &o : oracles) {
        oracle_list.push_back({{"mask", o.mask.str()},
                               {"seed", o.seed},
                               {"p_t", o.p_t},
                               {"p_succ", o.p_succ},
                               {"theoretical", distribution_json(o.theoretical)},
                               {"measured", distribution_json(o.measured)}});
    }
    j["oracles"] = oracle_list;
    j["relabeled"] = {{"theoretical", relabeled_theoretical}, {"measured", relabeled_measured}};
    const analysis::Metrics &m = metrics;
    j["metrics"] = {{"p_succ", m.p_succ},
                    {"p_succ_worst", m.p_succ_worst},
                    {"p_t", m.p_t},
                    {"R", m.r},
                    {"ci", {{"low", m.ci.low}, {"high", m.ci.high}, {"method", "wilson-95"}}},
                    {"successes", m.successes},
                    {"shots", m.shots},
                    {"oracle_calls_per_circuit", m.oracle_calls_per_circuit},
                    {"expected_calls_quantum", m.expected_calls_quantum},
                    {"classical_single_call", m.classical_single_call},
                    {"classical_guess_call", m.classical_guess_call},
                    {"classical_expected_calls", m.classical_expected_calls}};
    j["timing"] = {{"seconds", seconds}};
    return j;
}

ExperimentReport ExperimentReport::from_json(const json &j) {
    try {
        if (j.at("schema").get<std::string>() != kReportSchema) {
            throw ParseError(1, 1, "not a qsearch report (schema '" + j.at("schema").get<std::string>() + "')");
        }
        if (j.at("schema_version").get<int>() > kReportSchemaVersion) {
            throw ParseError(1, 1, "report schema version " + std::to_string(j.at("schema_version").get<int>()) +
                                       " is newer than this tool supports");
        }
        ExperimentReport r;
        r.config = ExperimentConfig::from_json(j.at("config"));
        const json &circuit = j.at("circuit");
        r.circuit_qubits = circuit.at("num_qubits").get<std::size_t>();
        r.circuit_clbits = circuit.at("num_clbits").get<std::size_t>();
        r.census = census_from(circuit.at("census"));
        r.circuit_metadata = circuit.at("metadata").get<std::map<std::string, std::string>>();
        for (const json &o : j.at("oracles")) {
            OracleResult res;
            res.mask = BitPattern::parse(o.at("mask").get<std::string>());
            res.seed = o.at("seed").get<std::uint64_t>();
            res.p_t = o.at("p_t").get<double>();
            res.p_succ = o.at("p_succ").get<double>();
            res.theoretical = distribution_from(o.at("theoretical"));
            res.measured = distribution_from(o.at("measured"));
            r.oracles.push_back(std::move(res));
        }
        r.relabeled_theoretical = j.at("relabeled").at("theoretical").get<std::vector<double>>();
        r.relabeled_measured = j.at("relabeled").at("measured").get<std::vector<double>>();
        const json &m = j.at("metrics");
        r.metrics.p_succ = m.at("p_succ").get<double>();
        r.metrics.p_succ_worst = m.at("p_succ_worst").get<double>();
        r.metrics.p_t = m.at("p_t").get<double>();
        r.metrics.r = m.at("R").get<double>();
        r.metrics.ci = {m.at("ci").at("low").get<double>(), m.at("ci").at("high").get<double>()};
        r.metrics.successes = m.at("successes").get<std::uint64_t>();
        r.metrics.shots = m.at("shots").get<std::uint64_t>();
        r.metrics.oracle_calls_per_circuit = m.at("oracle_calls_per_circuit").get<double>();
        r.metrics.expected_calls_quantum = m.at("expected_calls_quantum").get<double>();
        r.metrics.classical_single_call = m.at("classical_single_call").get<double>();
        r.metrics.classical_guess_call = m.at("classical_guess_call").get<double>();
        r.metrics.classical_expected_calls = m.at("classical_expected_calls").get<double>();
        if (j.contains("timing")) r.seconds = j.at("timing").value("seconds", 0.0);
        return r;
    } catch (const json::exception &e) {
        throw ParseError(1, 1, std::string("malformed report: ") + e.what());
    } catch (const ValidationError &e) {
        throw ParseError(1, 1, std::string("malformed report config: ") + e.what());
    }
}

ExperimentReport run(const ExperimentConfig &config) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    ExperimentReport report;
    report.config = config;
    std::vector<analysis::OracleRun> theory_runs;
    std::vector<analysis::OracleRun> measured_runs;
    for (const BitPattern &mask : config.oracle_set.resolve(config.n)) {
        try {
            Circuit circuit = families::build(config.request_for(mask));
            Circuit lowered = synth::lower(circuit);
            OracleResult res;
            res.mask = mask;
            res.seed = oracle_seed(config.seed, mask);
            res.theoretical = sim::run_exact(lowered);
            res.measured = config.shots == 0 ? res.theoretical
                                             : sim::run_noisy(lowered, config.noise, config.shots, res.seed, config.threads);
            res.p_t = res.theoretical.probability(mask.value);
            res.p_succ = res.measured.probability(mask.value);
            if (report.oracles.empty()) {
                report.census = qsearch::census(lowered);
                report.circuit_qubits = lowered.num_qubits();
                report.circuit_clbits = lowered.num_clbits();
                report.circuit_metadata = circuit.metadata();
                report.circuit_metadata.erase("mask");
            }
            theory_runs.push_back({mask, res.theoretical});
            measured_runs.push_back({mask, res.measured});
            report.oracles.push_back(std::move(res));
        } catch (const ValidationError &) {
            throw;
        } catch (const Error &e) {
            throw Error(e.code(), "oracle " + mask.str() + ": " + e.what());
        }
    }
    report.relabeled_theoretical = analysis::relabel_average(theory_runs).probabilities;
    report.relabeled_measured = analysis::relabel_average(measured_runs).probabilities;
    double calls = 1.0;
    auto it = report.circuit_metadata.find("oracle_calls");
    if (it != report.circuit_metadata.end()) calls = std::stod(it->second);
    report.metrics = analysis::summarize(measured_runs, theory_runs, calls);
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

double fit_p2(ExperimentConfig config, double target_r, double tolerance) {
    if (!(target_r > 0.0 && target_r <= 1.0)) throw ValidationError("target_r", "target R must lie in (0, 1]");
    config.shots = std::max<std::uint64_t>(config.shots, 1000);
    auto r_at = [&](double p2) {
        config.noise.p2 = p2;
        return run(config).metrics.r;
    };
    double lo = 0.0;
    double hi = 1.0;
    if (r_at(lo) <= target_r) return lo;
    if (r_at(hi) >= target_r) return hi;
    while (hi - lo > tolerance) {
        double mid = 0.5 * (lo + hi);
        (r_at(mid) > target_r ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<BuildArtifact> cmd_build(const ExperimentConfig &config, std::ostream &log) {
    config.validate();
    std::vector<BuildArtifact> out;
    for (const BitPattern &mask : config.oracle_set.resolve(config.n)) {
        Circuit lowered = synth::lower(families::build(config.request_for(mask)));
        BuildArtifact a;
        a.file = std::filesystem::path(config.out) /
                 ("circuit_" + std::string(families::family_name(config.family)) + "_" + mask.str() + ".qasm");
        a.census = qsearch::census(lowered);
        write_file(a.file, serialize(lowered));
        log << a.file.string() << " two_qubit_count=" << a.census.two_qubit_count
            << " one_qubit_count=" << a.census.one_qubit_count << " measure_count=" << a.census.measure_count << "\n";
        out.push_back(std::move(a));
    }
    return out;
}

std::filesystem::path cmd_run(const ExperimentConfig &config, std::ostream &log, const std::filesystem::path &report_path) {
    ExperimentReport report = run(config);
    std::filesystem::path path =
        report_path.empty() ? std::filesystem::path(config.out) / ("report_" + default_stem(config) + ".json") : report_path;
    write_file(path, report.to_json().dump(2) + "\n");
    const analysis::Metrics &m = report.metrics;
    log << path.string() << " oracles=" << report.oracles.size() << " p_succ=" << fmt6(m.p_succ)
        << " p_t=" << fmt6(m.p_t) << " R=" << fmt6(m.r) << " ci=[" << fmt6(m.ci.low) << "," << fmt6(m.ci.high) << "]"
        << " two_qubit_count=" << report.census.two_qubit_count << " classical_single=" << fmt6(m.classical_single_call)
        << " classical_guess=" << fmt6(m.classical_guess_call) << "\n";
    return path;
}

PlotArtifact cmd_plot(const std::filesystem::path &report_path, const std::filesystem::path &stem_arg) {
    json j;
    try {
        j = json::parse(read_file(report_path));
    } catch (const json::parse_error &e) {
        throw ParseError(1, e.byte, std::string("report is not valid JSON: ") + e.what());
    }
    ExperimentReport report = ExperimentReport::from_json(j);
    std::filesystem::path stem = stem_arg.empty() ? report_path.parent_path() / report_path.stem() : stem_arg;
    const std::size_t n = report.relabeled_theoretical.size();
    std::size_t width = 0;
    while ((std::size_t{1} << width) < n) width++;
    if (report.relabeled_measured.size() != n || (std::size_t{1} << width) != n) {
        throw ParseError(1, 1, "relabeled distributions have inconsistent sizes");
    }

    std::string csv = "pattern,theoretical,measured\n";
    for (std::size_t x = 0; x < n; x++) {
        csv += BitPattern{x, width}.str() + "," + fmt6(report.relabeled_theoretical[x]) + "," +
               fmt6(report.relabeled_measured[x]) + "\n";
    }
    std::string coords;
    for (std::size_t x = 0; x < n; x++) coords += (x ? "," : "") + BitPattern{x, width}.str();
    auto series = [&](const std::vector<double> &v) {
        std::string s = "  \\addplot coordinates {";
        for (std::size_t x = 0; x < n; x++) s += " (" + BitPattern{x, width}.str() + "," + fmt6(v[x]) + ")";
        return s + " };\n";
    };
    std::string tex;
    tex += "% " + std::string(kReportSchema) + " plot: family=" + report.circuit_metadata["family"] +
           " n=" + std::to_string(width) + " R=" + fmt6(report.metrics.r) + "\n";
    tex += "\\begin{axis}[\n";
    tex += "  ybar, ymin=0, bar width=3pt,\n";
    tex += "  symbolic x coords={" + coords + "},\n";
    tex += "  xtick=data, x tick label style={rotate=90, font=\\tiny},\n";
    tex += "  xlabel={pattern $x \\oplus x_0$}, ylabel={probability},\n";
    tex += "  legend entries={theoretical, measured}]\n";
    tex += series(report.relabeled_theoretical);
    tex += series(report.relabeled_measured);
    tex += "\\end{axis}\n";

    PlotArtifact out{stem.string() + ".csv", stem.string() + ".tex"};
    write_file(out.csv, csv);
    write_file(out.tex, tex);
    return out;
}

std::vector<SweepRow> cmd_sweep(const ExperimentConfig &config, const std::vector<double> &grid, std::ostream &log) {
    if (grid.empty()) throw ValidationError("grid", "noise grid is empty");
    for (std::size_t i = 0; i < grid.size(); i++) {
        if (!(grid[i] >= 0.0 && grid[i] <= 1.0)) throw ValidationError("grid", "grid values must lie in [0, 1]");
        if (i > 0 && !(grid[i] > grid[i - 1])) throw ValidationError("grid", "grid must be strictly ascending");
    }
    ExperimentConfig c = config;
    if (c.shots == 0) throw ValidationError("shots", "a sweep needs shots > 0");
    std::vector<SweepRow> rows;
    std::string csv = "p2,p_succ,p_t,R,ci_low,ci_high\n";
    for (double p2 : grid) {
        c.noise.p2 = p2;
        ExperimentReport report = run(c);
        SweepRow row{p2, report.metrics.p_succ, report.metrics.p_t, report.metrics.r, report.metrics.ci};
        csv += fmt6(row.p2) + "," + fmt6(row.p_succ) + "," + fmt6(row.p_t) + "," + fmt6(row.r) + "," +
               fmt6(row.ci.low) + "," + fmt6(row.ci.high) + "\n";
        rows.push_back(row);
    }
    std::filesystem::path path = std::filesystem::path(config.out) / ("sweep_" + default_stem(config) + ".csv");
    write_file(path, csv);
    log << csv;
    return rows;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const Error &e) {
        throw ValidationError("config", e.what());
    }
    try {
        return ExperimentConfig::from_json(json::parse(text));
    } catch (const json::parse_error &e) {
        throw ValidationError("config", std::string("invalid JSON: ") + e.what());
    }
}

}  // namespace qsearch::experiment
