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

#include "qsearch/analysis.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qsearch/error.h"

namespace qsearch::analysis {

double success_probability(const OracleRun &run) {
    return run.distribution.probability(run.mask.value);
}

sim::Distribution relabel(const sim::Distribution &d, std::uint64_t mask) {
    sim::Distribution out = d;
    const std::size_t dim = std::size_t{1} << d.width;
    if (d.sampled()) {
        for (std::size_t x = 0; x < dim; x++) out.counts[x ^ mask] = d.counts[x];
    } else {
        for (std::size_t x = 0; x < dim; x++) out.probabilities[x ^ mask] = d.probabilities[x];
    }
    return out;
}

sim::Distribution relabel_average(std::span<const OracleRun> runs) {
    if (runs.empty()) {
        throw Error(ErrorCode::Empty, "relabel_average needs at least one run");
    }
    const std::size_t width = runs[0].distribution.width;
    sim::Distribution out;
    out.width = width;
    out.probabilities.assign(std::size_t{1} << width, 0.0);
    for (const auto &run : runs) {
        if (run.distribution.width != width || run.mask.width != width) {
            throw Error(ErrorCode::WidthMismatch, "run for mask " + run.mask.str() + " has width " +
                                                      std::to_string(run.distribution.width) + ", expected " +
                                                      std::to_string(width));
        }
        std::vector<double> p = relabel(run.distribution, run.mask.value).as_probabilities();
        for (std::size_t i = 0; i < p.size(); i++) out.probabilities[i] += p[i];
    }
    for (auto &p : out.probabilities) p /= static_cast<double>(runs.size());
    return out;
}

double r_metric(double p_succ, double p_t) {
    if (!(p_t > 0.0)) {
        throw Error(ErrorCode::ZeroTheoretical, "R is undefined for a zero theoretical success probability");
    }
    return p_succ / p_t;
}

ClassicalBaselines classical_baselines(std::size_t n, std::uint64_t q) {
    const double N = std::ldexp(1.0, static_cast<int>(n));
    if (q < 1 || static_cast<double>(q) > N) {
        throw Error(ErrorCode::BadQ, "oracle calls " + std::to_string(q) + " outside [1, 2^" + std::to_string(n) + "]");
    }
    ClassicalBaselines b;
    const double qd = static_cast<double>(q);
    b.single_model = qd / N;
    b.guess_model = qd < N ? (qd + 1.0) / N : 1.0;
    b.expected_calls = (N + 1.0) / 2.0;
    return b;
}

double expected_quantum_calls(double p_succ, double oracle_calls_per_circuit) {
    if (!(p_succ > 0.0)) {
        throw Error(ErrorCode::ZeroSuccess, "expected calls are unbounded at zero success probability");
    }
    return oracle_calls_per_circuit / p_succ;
}

Interval confidence_interval(std::uint64_t successes, std::uint64_t shots) {
    if (shots == 0 || successes > shots) {
        throw Error(ErrorCode::BadCounts,
                    std::to_string(successes) + " successes out of " + std::to_string(shots) + " shots");
    }
    const double n = static_cast<double>(shots);
    const double p = static_cast<double>(successes) / n;
    const double z2 = kWilsonZ * kWilsonZ;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2 * n)) / denom;
    const double half = kWilsonZ / denom * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
    Interval ci{std::max(0.0, center - half), std::min(1.0, center + half)};
    if (successes == 0) ci.low = 0.0;
    if (successes == shots) ci.high = 1.0;
    return ci;
}

Metrics summarize(std::span<const OracleRun> measured, std::span<const OracleRun> theoretical,
                  double oracle_calls_per_circuit) {
    if (measured.empty() || theoretical.empty()) {
        throw Error(ErrorCode::Empty, "summarize needs at least one run");
    }
    if (measured.size() != theoretical.size()) {
        throw Error(ErrorCode::WidthMismatch, "measured and theoretical run lists differ in length");
    }
    Metrics m;
    m.p_succ = relabel_average(measured).probabilities[0];
    m.p_t = relabel_average(theoretical).probabilities[0];
    m.p_succ_worst = 1.0;
    bool sampled = true;
    for (const auto &run : measured) {
        m.p_succ_worst = std::min(m.p_succ_worst, success_probability(run));
        if (!run.distribution.sampled()) {
            sampled = false;
            continue;
        }
        m.successes += run.distribution.counts[run.mask.value];
        m.shots += run.distribution.shots;
    }
    if (sampled) {
        m.ci = confidence_interval(m.successes, m.shots);
    } else {
        m.successes = 0;
        m.shots = 0;
        m.ci = {m.p_succ, m.p_succ};
    }
    m.r = r_metric(m.p_succ, m.p_t);
    m.oracle_calls_per_circuit = oracle_calls_per_circuit;
    m.expected_calls_quantum = m.p_succ > 0.0 ? expected_quantum_calls(m.p_succ, oracle_calls_per_circuit)
                                              : std::numeric_limits<double>::infinity();
    std::size_t n = measured[0].mask.width;
    ClassicalBaselines b = classical_baselines(n, static_cast<std::uint64_t>(std::max(1.0, oracle_calls_per_circuit)));
    m.classical_single_call = b.single_model;
    m.classical_guess_call = b.guess_model;
    m.classical_expected_calls = b.expected_calls;
    return m;
}

}  // namespace qsearch::analysis
