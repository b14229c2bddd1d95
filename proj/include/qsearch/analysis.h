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

#ifndef QSEARCH_ANALYSIS_H
#define QSEARCH_ANALYSIS_H

#include <span>

#include "qsearch/circuit.h"
#include "qsearch/sim.h"

namespace qsearch::analysis {

/// One oracle's outcome distribution (exact or sampled).
struct OracleRun {
    BitPattern mask;
    sim::Distribution distribution;
};

/// Mass (or count fraction) at outcome == mask.
double success_probability(const OracleRun &run);

/// Moves outcome x to x XOR mask. Applying it twice with the same mask is the identity.
sim::Distribution relabel(const sim::Distribution &distribution, std::uint64_t mask);

/// Relabels every run by its own mask and averages with equal weight per
/// oracle. Position 0 of the result is the success bucket.
sim::Distribution relabel_average(std::span<const OracleRun> runs);

double r_metric(double p_succ, double p_t);

struct ClassicalBaselines {
    /// q queries, success iff one of them hits: q/N.
    double single_model = 0.0;
    /// q queries plus one free final guess: (q+1)/N, capped at 1.
    double guess_model = 0.0;
    /// Random order without replacement: (N+1)/2.
    double expected_calls = 0.0;
};
ClassicalBaselines classical_baselines(std::size_t n, std::uint64_t oracle_calls);

/// Repeat-until-success expectation: calls per attempt / p_succ.
double expected_quantum_calls(double p_succ, double oracle_calls_per_circuit);

struct Interval {
    double low = 0.0;
    double high = 0.0;
};

constexpr double kWilsonZ = 1.959963984540054;

/// 95% Wilson score interval for a binomial proportion.
Interval confidence_interval(std::uint64_t successes, std::uint64_t shots);

struct Metrics {
    double p_succ = 0.0;
    double p_succ_worst = 0.0;
    double p_t = 0.0;
    double r = 0.0;
    Interval ci;
    std::uint64_t successes = 0;
    std::uint64_t shots = 0;
    double oracle_calls_per_circuit = 0.0;
    double expected_calls_quantum = 0.0;
    double classical_single_call = 0.0;
    double classical_guess_call = 0.0;
    double classical_expected_calls = 0.0;
};

/// Aggregates per-oracle measured and theoretical runs (same masks, same order).
/// Sampled runs pool their successes and shots for the interval; exact runs
/// give a degenerate interval at p_succ.
Metrics summarize(std::span<const OracleRun> measured, std::span<const OracleRun> theoretical,
                  double oracle_calls_per_circuit);

}  // namespace qsearch::analysis

#endif
