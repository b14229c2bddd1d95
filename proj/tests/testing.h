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

#ifndef QSEARCH_TESTS_TESTING_H
#define QSEARCH_TESTS_TESTING_H

#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>

#include "qsearch/circuit.h"
#include "qsearch/sim.h"
#include "qsearch/synth.h"

namespace qsearch::testing {

inline Circuit circuit_of(std::size_t num_qubits, const Fragment &fragment, std::size_t num_clbits = 0) {
    Circuit c(num_qubits, num_clbits);
    c.append(fragment);
    return c;
}

inline Eigen::MatrixXcd lowered_unitary(const Circuit &c) {
    return sim::unitary_of(synth::lower(c));
}

inline Eigen::MatrixXcd lowered_unitary(std::size_t num_qubits, const Fragment &fragment) {
    return lowered_unitary(circuit_of(num_qubits, fragment));
}

/// diag(+1, ..., -1 at `marked`, ..., +1), written out directly.
inline Eigen::MatrixXcd phase_flip(std::size_t n, std::uint64_t marked) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1 << n, 1 << n);
    m(static_cast<Eigen::Index>(marked), static_cast<Eigen::Index>(marked)) = -1.0;
    return m;
}

/// Operator on `n` qubits acting as `small` on qubits `targets` (in order), identity elsewhere.
inline Eigen::MatrixXcd embed(std::size_t n, const Eigen::MatrixXcd &small, const std::vector<Qubit> &targets) {
    const std::size_t dim = std::size_t{1} << n;
    const std::size_t k = targets.size();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
    auto sub_index = [&](std::size_t idx) {
        std::size_t s = 0;
        for (std::size_t j = 0; j < k; j++) s = (s << 1) | ((idx >> (n - 1 - targets[j])) & 1);
        return s;
    };
    std::uint64_t target_mask = 0;
    for (Qubit q : targets) target_mask |= std::uint64_t{1} << (n - 1 - q);
    for (std::size_t col = 0; col < dim; col++) {
        for (std::size_t row = 0; row < dim; row++) {
            if ((row & ~target_mask) != (col & ~target_mask)) continue;
            out(row, col) = small(sub_index(row), sub_index(col));
        }
    }
    (void)k;
    return out;
}

/// Reproducible non-product test state.
inline sim::StateVector scrambled_state(std::size_t n, std::uint64_t seed) {
    sim::StateVector s(n);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    double norm = 0.0;
    for (auto &a : s.amplitudes()) {
        a = {g(rng), g(rng)};
        norm += std::norm(a);
    }
    for (auto &a : s.amplitudes()) a /= std::sqrt(norm);
    return s;
}

/// State of `data` qubits padded with `extra` trailing |0> qubits.
inline sim::StateVector pad_zero(const sim::StateVector &data, std::size_t extra) {
    sim::StateVector s(data.num_qubits() + extra);
    s.amplitudes()[0] = 0.0;
    for (std::size_t i = 0; i < data.amplitudes().size(); i++) s.amplitudes()[i << extra] = data.amplitudes()[i];
    return s;
}

/// Euclidean distance after aligning b to a by the best global phase.
inline double aligned_distance(const sim::StateVector &a, const sim::StateVector &b) {
    std::complex<double> overlap = 0.0;
    for (std::size_t i = 0; i < a.amplitudes().size(); i++) overlap += std::conj(b.amplitudes()[i]) * a.amplitudes()[i];
    std::complex<double> phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : 1.0;
    double d = 0.0;
    for (std::size_t i = 0; i < a.amplitudes().size(); i++) d += std::norm(a.amplitudes()[i] - phase * b.amplitudes()[i]);
    return std::sqrt(d);
}

/// Applies a dense operator to a state.
inline sim::StateVector apply_matrix(const Eigen::MatrixXcd &m, const sim::StateVector &s) {
    sim::StateVector out(s.num_qubits());
    for (Eigen::Index r = 0; r < m.rows(); r++) {
        std::complex<double> acc = 0.0;
        for (Eigen::Index c = 0; c < m.cols(); c++) acc += m(r, c) * s.amplitudes()[static_cast<std::size_t>(c)];
        out.amplitudes()[static_cast<std::size_t>(r)] = acc;
    }
    return out;
}

/// Runs `fragment` (data qubits first, then `ancillas` clean qubits) from a
/// scrambled data state and returns the worst distance, over measurement
/// branches, between the branch state and `ideal` applied to the data with the
/// ancillas back in |0>.
inline double worst_branch_error(const Fragment &fragment, std::size_t data, std::size_t ancillas,
                                 std::size_t clbits, const Eigen::MatrixXcd &ideal, std::uint64_t seed = 7) {
    Circuit c = synth::lower(circuit_of(data + ancillas, fragment, clbits));
    sim::StateVector psi = scrambled_state(data, seed);
    sim::StateVector expected = pad_zero(apply_matrix(ideal, psi), ancillas);
    double worst = 0.0;
    double total = 0.0;
    for (const auto &b : sim::run_branches(c, pad_zero(psi, ancillas))) {
        worst = std::max(worst, aligned_distance(b.state, expected));
        total += b.weight;
    }
    return std::max(worst, std::abs(total - 1.0));
}

}  // namespace qsearch::testing

#endif
