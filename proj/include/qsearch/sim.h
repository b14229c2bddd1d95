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

#ifndef QSEARCH_SIM_H
#define QSEARCH_SIM_H

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "qsearch/circuit.h"

namespace qsearch::sim {

using Complex = std::complex<double>;

constexpr std::size_t kMaxSimWidth = 24;
constexpr std::size_t kMaxUnitaryWidth = 12;

/// Dense amplitudes. Basis index bit (n-1-q) holds qubit q, so q0 is the most
/// significant bit, matching the pattern-string order.
class StateVector {
   public:
    explicit StateVector(std::size_t num_qubits);
    static StateVector basis(std::size_t num_qubits, std::uint64_t index);

    std::size_t num_qubits() const {
        return n_;
    }
    std::vector<Complex> &amplitudes() {
        return amps_;
    }
    const std::vector<Complex> &amplitudes() const {
        return amps_;
    }
    std::uint64_t bit(Qubit q) const {
        return std::uint64_t{1} << (n_ - 1 - q);
    }

    /// Applies a unitary gate. Throws UndefinedGateSemantics for relative-phase
    /// primitives (lower them first) and for Measure.
    void apply(const Gate &gate);
    /// Pauli 1=X, 2=Y, 3=Z on q.
    void apply_pauli(Qubit q, int pauli);
    double probability_one(Qubit q) const;
    /// Projects q onto `value` and renormalizes. Returns the pre-projection probability.
    double collapse(Qubit q, bool value);
    double norm_squared() const;

   private:
    std::size_t n_;
    std::vector<Complex> amps_;
};

/// Outcomes are integers over `width` classical bits with c0 the most significant.
/// Exact runs fill `probabilities`; sampled runs fill `counts` and `shots`.
struct Distribution {
    std::size_t width = 0;
    std::vector<double> probabilities;
    std::vector<std::uint64_t> counts;
    std::uint64_t shots = 0;

    bool sampled() const {
        return shots > 0;
    }
    /// Probability (exact) or count fraction (sampled) of `outcome`.
    double probability(std::uint64_t outcome) const;
    /// Per-outcome probabilities, from counts when sampled.
    std::vector<double> as_probabilities() const;
};

/// One leaf of the measurement tree. `record[c]` is -1 for unwritten bits.
struct Branch {
    double weight = 1.0;
    std::vector<std::int8_t> record;
    StateVector state{0};
};

/// Runs the circuit from `initial`, splitting at every measurement into both
/// outcomes (branches below 1e-14 weight are dropped).
std::vector<Branch> run_branches(const Circuit &circuit, const StateVector &initial);

/// Number of leading result bits reported: metadata "result_bits" if present,
/// else every classical bit, else (no measurements) every qubit.
std::size_t result_width(const Circuit &circuit);

/// Exact outcome distribution over the result bits. A circuit with no
/// measurements is read out as if every qubit were measured at the end.
Distribution run_exact(const Circuit &circuit);

/// Column j is the circuit applied to basis state j.
Eigen::MatrixXcd unitary_of(const Circuit &circuit);

/// Frobenius distance after aligning U to V by the best global phase.
double operator_distance(const Eigen::MatrixXcd &u, const Eigen::MatrixXcd &v);

/// Block of `u` with the trailing `ancillas` qubits in |0> on input and output.
Eigen::MatrixXcd clean_ancilla_block(const Eigen::MatrixXcd &u, std::size_t ancillas);

double total_variation(const Distribution &a, const Distribution &b);

/// Replaces each measurement that precedes a later instruction with a CX onto a
/// fresh qubit, turns conditions into controls on that qubit, and measures the
/// fresh qubits at the end into the original classical bits. Only X, Z,
/// ControlledX and ControlledZ may be conditioned.
Circuit defer_measurements(const Circuit &circuit);

struct NoiseModel {
    double p1 = 0.0;
    double p2 = 0.0;
    double p_meas = 0.0;

    void validate() const;
    bool noiseless() const {
        return p1 == 0.0 && p2 == 0.0 && p_meas == 0.0;
    }
};

/// Monte-Carlo trajectories. After each executed gate a uniformly random
/// non-identity Pauli hits its qubits with probability p1 (one qubit) or p2
/// (more), and each measurement result flips with probability p_meas.
/// Trajectory t draws from its own stream seeded by (seed, t), so counts do
/// not depend on `threads`.
Distribution run_noisy(const Circuit &circuit, const NoiseModel &noise, std::uint64_t shots, std::uint64_t seed,
                       unsigned threads = 1);

}  // namespace qsearch::sim

#endif
