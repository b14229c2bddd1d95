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

#include "qsearch/synth.h"

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"

#include "qsearch/error.h"
#include "qsearch/sim.h"
#include "testing.h"

using namespace qsearch;
using namespace qsearch::synth;
using namespace qsearch::testing;

namespace {

Eigen::MatrixXcd reflection_about_uniform(std::size_t k) {
    const Eigen::Index dim = Eigen::Index{1} << k;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Constant(dim, dim, 2.0 / static_cast<double>(dim));
    m -= Eigen::MatrixXcd::Identity(dim, dim);
    return m;
}

MczOptions with_method(DecompositionMethod method, std::vector<Qubit> ancillas = {}, std::vector<Clbit> clbits = {}) {
    MczOptions o;
    o.method = method;
    o.resources.ancillas = std::move(ancillas);
    o.resources.clbits = std::move(clbits);
    return o;
}

std::vector<Qubit> range(std::size_t k) {
    std::vector<Qubit> q(k);
    for (std::size_t i = 0; i < k; i++) q[i] = static_cast<Qubit>(i);
    return q;
}

}  // namespace

TEST(synth, diffuser_one_qubit_is_x) {
    Qubit q[] = {0};
    Eigen::MatrixXcd x(2, 2);
    x << 0, 1, 1, 0;
    EXPECT_LT(sim::operator_distance(lowered_unitary(1, diffuser(q)), x), 1e-10);
}

TEST(synth, diffuser_two_qubits_matches_reflection) {
    auto u = lowered_unitary(2, diffuser(range(2)));
    EXPECT_LT(sim::operator_distance(u, reflection_about_uniform(2)), 1e-10);
    // Global phase is -1: the emitted matrix has +1/2 on the diagonal, -1/2 off it.
    for (int r = 0; r < 4; r++) {
        for (int c = 0; c < 4; c++) {
            EXPECT_NEAR(std::abs(u(r, c)), 0.5, 1e-12);
        }
    }
}

TEST(synth, diffuser_fixes_uniform_state) {
    Circuit c(3);
    for (Qubit q = 0; q < 3; q++) c.append(Gate::h(q));
    c.append(diffuser(range(3)));
    Circuit lowered = synth::lower(c);
    sim::StateVector s(3);
    for (const auto &i : lowered.instructions()) s.apply(i.gate);
    for (const auto &a : s.amplitudes()) {
        EXPECT_NEAR(std::abs(a), 1.0 / std::sqrt(8.0), 1e-12);
        EXPECT_NEAR(std::abs(a - s.amplitudes()[0]), 0.0, 1e-12);
    }
}

TEST(synth, diffuser_rejects_empty) {
    try {
        diffuser({});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::BadArity);
    }
}

TEST(synth, diffuser_with_ancilla_matches_reflection) {
    for (std::size_t k = 4; k <= 5; k++) {
        auto f = diffuser(range(k), with_method(DecompositionMethod::RelphaseMaslov, {static_cast<Qubit>(k)}));
        auto block = sim::clean_ancilla_block(lowered_unitary(k + 1, f), 1);
        EXPECT_LT(sim::operator_distance(block, reflection_about_uniform(k)), 1e-10) << k;
    }
}

TEST(synth, oracle_plain_all_ones) {
    auto u = lowered_unitary(3, oracle(OracleSpec::from("111")));
    EXPECT_LT(sim::operator_distance(u, phase_flip(3, 7)), 1e-10);
}

TEST(synth, oracle_mask_is_x_conjugation) {
    auto u = lowered_unitary(3, oracle(OracleSpec::from("101")));
    EXPECT_LT(sim::operator_distance(u, phase_flip(3, 5)), 1e-10);
    Fragment conj = {Gate::x(1)};
    auto base = oracle(OracleSpec::from("111"));
    conj.insert(conj.end(), base.begin(), base.end());
    conj.push_back(Gate::x(1));
    EXPECT_LT(sim::operator_distance(u, lowered_unitary(3, conj)), 1e-10);
}

TEST(synth, oracle_relphase_five_qubits_on_clean_ancilla) {
    for (const char *mask : {"10110", "00000", "11111", "01001"}) {
        Resources r{{5}, {}};
        auto f = oracle(OracleSpec::from(mask, OracleStyle::AncillaRelphase), r);
        auto u = lowered_unitary(6, f);
        auto block = sim::clean_ancilla_block(u, 1);
        EXPECT_LT(sim::operator_distance(block, phase_flip(5, BitPattern::parse(mask).value)), 1e-10) << mask;
    }
}

TEST(synth, oracle_exhaustive_small) {
    for (std::size_t n = 1; n <= 4; n++) {
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); m++) {
            BitPattern mask{m, n};
            for (auto style : {OracleStyle::PlainMcz, OracleStyle::AncillaRelphase,
                               OracleStyle::AncillaRelphasePartialUncompute, OracleStyle::MeasurementAssisted}) {
                std::size_t anc = oracle_ancillas(n, style);
                std::size_t cl = oracle_clbits(n, style);
                Resources r;
                for (std::size_t a = 0; a < anc; a++) r.ancillas.push_back(static_cast<Qubit>(n + a));
                for (std::size_t c = 0; c < cl; c++) r.clbits.push_back(static_cast<Clbit>(c));
                auto f = oracle(OracleSpec{mask, style}, r);
                EXPECT_LT(worst_branch_error(f, n, anc, cl, phase_flip(n, m)), 1e-10)
                    << mask.str() << " " << style_name(style);
            }
        }
    }
}

TEST(synth, oracle_bad_mask) {
    try {
        OracleSpec::from("10a");
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::BadMask);
    }
}

TEST(synth, mcz_two_qubits_every_method_is_cz) {
    Eigen::MatrixXcd cz = phase_flip(2, 3);
    for (auto m : {DecompositionMethod::ExactRecursive, DecompositionMethod::ExactOneAncilla,
                   DecompositionMethod::Margolus, DecompositionMethod::RelphaseMaslov}) {
        auto f = mcz(range(2), 0, with_method(m, {2}));
        auto block = sim::clean_ancilla_block(lowered_unitary(3, f), 1);
        EXPECT_LT(sim::operator_distance(block, cz), 1e-10) << method_name(m);
    }
}

TEST(synth, exact_ccz_lowers_to_six_two_qubit_gates) {
    auto c = synth::lower(circuit_of(3, mcz(range(3), 0, {})));
    EXPECT_EQ(census(c).two_qubit_count, 6u);
    EXPECT_LT(sim::operator_distance(sim::unitary_of(c), phase_flip(3, 7)), 1e-10);
}

TEST(synth, exact_recursive_counts_follow_gray_code) {
    for (std::size_t k = 3; k <= 7; k++) {
        auto c = synth::lower(circuit_of(k, mcz(range(k), 0, {})));
        EXPECT_EQ(census(c).two_qubit_count, (std::size_t{1} << k) - 2);
        EXPECT_LT(sim::operator_distance(sim::unitary_of(c), phase_flip(k, (std::uint64_t{1} << k) - 1)), 1e-9);
    }
}

TEST(synth, mcz_six_qubits_two_ancillas) {
    auto f = mcz(range(6), 0, with_method(DecompositionMethod::RelphaseMaslov, {6, 7}));
    auto block = sim::clean_ancilla_block(lowered_unitary(8, f), 2);
    EXPECT_LT(sim::operator_distance(block, phase_flip(6, 63)), 1e-10);
}

TEST(synth, mcz_open_controls) {
    auto f = mcz(range(5), 0b01010, with_method(DecompositionMethod::Margolus, {5}));
    auto block = sim::clean_ancilla_block(lowered_unitary(6, f), 1);
    EXPECT_LT(sim::operator_distance(block, phase_flip(5, 0b10101)), 1e-10);
}

TEST(synth, relphase_pairs_net_exact_for_every_method) {
    for (auto m : {DecompositionMethod::ExactRecursive, DecompositionMethod::ExactOneAncilla,
                   DecompositionMethod::Margolus, DecompositionMethod::RelphaseMaslov,
                   DecompositionMethod::MeasurementAssisted}) {
        for (std::size_t anc = 1; anc <= 2; anc++) {
            for (std::size_t k = 1; k + anc <= 6; k++) {
                std::vector<Qubit> a;
                for (std::size_t i = 0; i < anc; i++) a.push_back(static_cast<Qubit>(k + i));
                auto f = mcz(range(k), 0, with_method(m, a, {0}));
                EXPECT_LT(worst_branch_error(f, k, anc, 1, phase_flip(k, (std::uint64_t{1} << k) - 1)), 1e-10)
                    << method_name(m) << " k=" << k << " anc=" << anc;
            }
        }
    }
}

TEST(synth, mcz_needs_ancilla) {
    for (auto m : {DecompositionMethod::ExactOneAncilla, DecompositionMethod::Margolus,
                   DecompositionMethod::RelphaseMaslov, DecompositionMethod::MeasurementAssisted}) {
        try {
            mcz(range(5), 0, with_method(m));
            FAIL() << method_name(m);
        } catch (const Error &e) {
            EXPECT_EQ(e.code(), ErrorCode::MissingAncilla);
        }
    }
}

TEST(synth, compute_arity_is_checked) {
    Qubit three[] = {0, 1, 2};
    Qubit four[] = {0, 1, 2, 3};
    EXPECT_NO_THROW(compute_and_relphase(DecompositionMethod::RelphaseMaslov, three, 5));
    try {
        compute_and_relphase(DecompositionMethod::Margolus, three, 5);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::MethodArityMismatch);
    }
    try {
        compute_and_relphase(DecompositionMethod::RelphaseMaslov, four, 5);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::MethodArityMismatch);
    }
}

TEST(synth, relphase_ccx_is_toffoli_up_to_phases) {
    auto u = lowered_unitary(3, relphase_ccx(0, 1, 2));
    for (int r = 0; r < 8; r++) {
        for (int c = 0; c < 8; c++) {
            int image = c >= 6 ? c ^ 1 : c;
            EXPECT_NEAR(std::abs(u(r, c)), r == image ? 1.0 : 0.0, 1e-12);
        }
    }
    EXPECT_LE(census(synth::lower(circuit_of(3, relphase_ccx(0, 1, 2)))).two_qubit_count, 3u);
}

TEST(synth, relphase_cccx_is_c3x_up_to_phases) {
    auto u = lowered_unitary(4, relphase_cccx(0, 1, 2, 3));
    for (int r = 0; r < 16; r++) {
        for (int c = 0; c < 16; c++) {
            int image = c >= 14 ? c ^ 1 : c;
            EXPECT_NEAR(std::abs(u(r, c)), r == image ? 1.0 : 0.0, 1e-12);
        }
    }
    EXPECT_LE(census(synth::lower(circuit_of(4, relphase_cccx(0, 1, 2, 3)))).two_qubit_count, 6u);
}

TEST(synth, relphase_forward_then_inverse_is_identity) {
    Fragment f = relphase_ccx(2, 0, 1);
    Fragment g = relphase_ccx(2, 0, 1, Direction::Inverse);
    f.insert(f.end(), g.begin(), g.end());
    EXPECT_LT(sim::operator_distance(lowered_unitary(3, f), Eigen::MatrixXcd::Identity(8, 8)), 1e-10);

    Fragment h = relphase_cccx(3, 1, 0, 2);
    Fragment hi = relphase_cccx(3, 1, 0, 2, Direction::Inverse);
    h.insert(h.end(), hi.begin(), hi.end());
    EXPECT_LT(sim::operator_distance(lowered_unitary(4, h), Eigen::MatrixXcd::Identity(16, 16)), 1e-10);
}

TEST(synth, relphase_permutation_action) {
    Circuit lowered = synth::lower(circuit_of(3, relphase_ccx(0, 1, 2)));
    sim::StateVector s = sim::StateVector::basis(3, 0b110);
    for (const auto &i : lowered.instructions()) s.apply(i.gate);
    EXPECT_NEAR(std::abs(s.amplitudes()[0b111]), 1.0, 1e-12);
    sim::StateVector t = sim::StateVector::basis(3, 0b100);
    for (const auto &i : lowered.instructions()) t.apply(i.gate);
    EXPECT_NEAR(std::abs(t.amplitudes()[0b100]), 1.0, 1e-12);
}

TEST(synth, relphase_rejects_repeated_qubits) {
    try {
        relphase_ccx(0, 0, 1);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::BadArity);
    }
    try {
        relphase_cccx(0, 1, 2, 1);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::BadArity);
    }
}

TEST(synth, relphase_sandwich_equals_exact_ccz) {
    // Qubits: c0, c1, extra, ancilla.
    Fragment f = relphase_ccx(0, 1, 3);
    f.push_back(Gate::cz(3, 2));
    Fragment undo = relphase_ccx(0, 1, 3, Direction::Inverse);
    f.insert(f.end(), undo.begin(), undo.end());
    auto block = sim::clean_ancilla_block(lowered_unitary(4, f), 1);
    EXPECT_LT(sim::operator_distance(block, phase_flip(3, 7)), 1e-10);
}

TEST(synth, clean_and_compute_is_exact_on_clean_target) {
    Qubit controls[] = {0, 1};
    auto u = lowered_unitary(3, and_compute(controls, 2));
    auto exact = sim::unitary_of(circuit_of(3, {Gate::mcx({0, 1}, 2)}));
    for (int x = 0; x < 4; x++) {
        Eigen::VectorXcd a = u.col(2 * x);
        Eigen::VectorXcd b = exact.col(2 * x);
        std::complex<double> phase = u(0, 0) / exact(0, 0);
        EXPECT_LT((a - phase * b).norm(), 1e-12) << x;
    }
}

TEST(synth, measurement_assisted_matches_exact_uncompute) {
    // Data q0, q1; ancilla q2. Payload Z(ancilla) is a CZ on the controls.
    Qubit controls[] = {0, 1};
    Fragment prep = {Gate::h(0), Gate::h(1)};
    Fragment measured = prep;
    Fragment compute = and_compute(controls, 2);
    measured.insert(measured.end(), compute.begin(), compute.end());
    measured.push_back(Gate::z(2));
    Fragment mau = measurement_assisted_uncompute(2, controls, 0, 0);
    measured.insert(measured.end(), mau.begin(), mau.end());
    Fragment exact = prep;
    exact.insert(exact.end(), compute.begin(), compute.end());
    exact.push_back(Gate::z(2));
    Fragment back = inverse(compute);
    exact.insert(exact.end(), back.begin(), back.end());
    for (Fragment *f : {&measured, &exact}) {
        f->push_back(Gate::h(0));
        f->push_back(Gate::h(1));
        f->push_back(Gate::measure(0, 1));
        f->push_back(Gate::measure(1, 2));
        f->push_back(Gate::measure(2, 3));
    }
    Circuit a = synth::lower(circuit_of(3, measured, 4));
    Circuit b = synth::lower(circuit_of(3, exact, 4));
    a.metadata()["result_bits"] = "4";
    b.metadata()["result_bits"] = "4";
    // Bit c0 exists only in the measured variant; compare the data and ancilla bits.
    auto da = sim::run_exact(a);
    auto db = sim::run_exact(b);
    std::vector<double> pa(8, 0.0), pb(8, 0.0);
    for (std::uint64_t o = 0; o < 16; o++) {
        pa[o & 7] += da.probability(o);
        pb[o & 7] += db.probability(o);
    }
    double tv = 0.0;
    for (int i = 0; i < 8; i++) tv += std::abs(pa[i] - pb[i]) / 2;
    EXPECT_LT(tv, 1e-10);
    // Uniform over the data, ancilla back in |0>.
    for (int data = 0; data < 4; data++) EXPECT_NEAR(pa[data << 1], 0.25, 1e-12);
}

TEST(synth, measurement_assisted_on_zero_controls_leaves_data) {
    Qubit controls[] = {0, 1};
    Fragment f = and_compute(controls, 2);
    Fragment mau = measurement_assisted_uncompute(2, controls, 0, 0);
    f.insert(f.end(), mau.begin(), mau.end());
    Circuit c = synth::lower(circuit_of(3, f, 1));
    for (const auto &b : sim::run_branches(c, sim::StateVector(3))) {
        // Either outcome may occur; both leave every qubit in |0>.
        EXPECT_NEAR(b.weight, 0.5, 1e-12);
        EXPECT_NEAR(std::abs(b.state.amplitudes()[0]), 1.0, 1e-12);
    }
}

TEST(synth, deterministic_fragments) {
    auto o = with_method(DecompositionMethod::RelphaseMaslov, {6, 7});
    EXPECT_EQ(mcz(range(6), 5, o), mcz(range(6), 5, o));
    Resources r{{5}, {0}};
    EXPECT_EQ(oracle(OracleSpec::from("10110", OracleStyle::MeasurementAssisted), r),
              oracle(OracleSpec::from("10110", OracleStyle::MeasurementAssisted), r));
}

TEST(synth, lowering_keeps_conditions_and_is_lowered) {
    Circuit c(4, 1);
    c.append(Gate::measure(3, 0));
    c.append(Instruction(Gate::mcx({0, 1}, 2, 0b01), Condition{0, false}));
    c.append(Gate::rccx(0, 1, 2));
    c.append(Gate::rcccx(0, 1, 2, 3, Direction::Inverse));
    Circuit l = synth::lower(c);
    EXPECT_TRUE(is_lowered(l));
    std::size_t conditioned = 0;
    for (const auto &i : l.instructions()) {
        if (i.condition) {
            conditioned++;
            EXPECT_EQ(*i.condition, (Condition{0, false}));
        }
    }
    // 2 X for the open control, 2 H, and 6 CX plus 7 Rz for the phase polynomial.
    EXPECT_EQ(conditioned, 17u);
}

TEST(synth, relphase_maslov_oracle_costs_eighteen_at_five_qubits) {
    auto o = with_method(DecompositionMethod::RelphaseMaslov, {5});
    EXPECT_EQ(mcz_cost(5, o), 18u);
    auto c = synth::lower(circuit_of(6, mcz(range(5), 0, o)));
    EXPECT_EQ(census(c).two_qubit_count, 18u);
    EXPECT_NE(mcz_plan(5, o).find("[3]"), std::string::npos);
}
