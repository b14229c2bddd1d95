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

#include "qsearch/families.h"

#include <cmath>

#include "gtest/gtest.h"

#include "qsearch/error.h"
#include "qsearch/qasm.h"
#include "qsearch/sim.h"
#include "testing.h"

using namespace qsearch;
using namespace qsearch::families;
using synth::OracleStyle;

namespace {

FamilyRequest request(Family family, const std::string &mask, OracleStyle style = OracleStyle::PlainMcz) {
    FamilyRequest r;
    r.family = family;
    r.mask = mask;
    r.style = style;
    if (family != Family::Grover && family != Family::Partial && family != Family::Wielomianer) {
        r.partition = Partition{{3, 2}};
    }
    return r;
}

sim::Distribution exact(const Circuit &c) {
    return sim::run_exact(synth::lower(c));
}

double p_t(const Circuit &c) {
    return exact(c).probability(BitPattern::parse(c.meta("mask")).value);
}

std::size_t two_qubit(const Circuit &c) {
    return census(synth::lower(c)).two_qubit_count;
}

std::string pattern(std::uint64_t v, std::size_t n) {
    return BitPattern{v, n}.str();
}

double closed_form_grover(std::size_t n) {
    double N = std::pow(2.0, static_cast<double>(n));
    return (3 - 4 / N) * (3 - 4 / N) / N;
}

double closed_form_partial(std::size_t n, std::size_t k) {
    double c = 3 - std::pow(2.0, 2.0 - static_cast<double>(k));
    return c * c / std::pow(2.0, static_cast<double>(n));
}

// Probability of outcome x XOR mask, so index 0 is always the success bucket.
std::vector<double> relabeled(const sim::Distribution &d, std::uint64_t mask) {
    std::vector<double> out(std::size_t{1} << d.width);
    for (std::uint64_t x = 0; x < out.size(); x++) out[x ^ mask] = d.probability(x);
    return out;
}

}  // namespace

TEST(families, grover_matches_closed_form) {
    for (std::size_t n = 2; n <= 6; n++) {
        for (std::uint64_t m : {std::uint64_t{0}, (std::uint64_t{1} << n) - 1, std::uint64_t{1}}) {
            Circuit c = build_grover(request(Family::Grover, pattern(m, n)));
            EXPECT_NEAR(p_t(c), closed_form_grover(n), 1e-12) << n;
            EXPECT_EQ(c.meta("oracle_calls"), "1");
        }
    }
    EXPECT_NEAR(closed_form_grover(3), 0.78125, 1e-15);
    EXPECT_NEAR(closed_form_grover(2), 1.0, 1e-15);
}

TEST(families, grover_five_qubits_one_ancilla) {
    Circuit c = build_grover(request(Family::Grover, "10110", OracleStyle::AncillaRelphase));
    EXPECT_EQ(c.num_qubits(), 6u);
    EXPECT_NEAR(p_t(c), 0.2583007812500000, 1e-12);
    EXPECT_NEAR(p_t(c), closed_form_grover(5), 1e-12);
    EXPECT_EQ(two_qubit(c), 36u);
}

TEST(families, grover_measurement_assisted_matches_unitary_variant) {
    Circuit measured = build_grover(request(Family::Grover, "10110", OracleStyle::MeasurementAssisted));
    Circuit unitary = build_grover(request(Family::Grover, "10110", OracleStyle::AncillaRelphase));
    EXPECT_LT(sim::total_variation(exact(measured), exact(unitary)), 1e-10);
    EXPECT_EQ(two_qubit(measured), 36u);
    EXPECT_GT(census(synth::lower(measured)).measure_count, 5u);
}

TEST(families, grover_iterations) {
    FamilyRequest r = request(Family::Grover, "101");
    r.iterations = 2;
    Circuit c = build_grover(r);
    EXPECT_EQ(c.meta("oracle_calls"), "2");
    // Two rounds at N=8: sin^2(5 theta) with sin theta = 1/sqrt(8).
    double theta = std::asin(1 / std::sqrt(8.0));
    EXPECT_NEAR(p_t(c), std::pow(std::sin(5 * theta), 2), 1e-12);
    r.iterations = 0;
    EXPECT_THROW(build_grover(r), ValidationError);
}

TEST(families, partial_diffuser_closed_form) {
    FamilyRequest r = request(Family::Partial, "0110");
    r.diffuser_size = 3;
    Circuit c = build_partial(r);
    EXPECT_NEAR(p_t(c), 0.390625, 1e-12);
    EXPECT_NEAR(p_t(c), closed_form_partial(4, 3), 1e-12);
    EXPECT_EQ(c.meta("oracle_calls"), "1");

    FamilyRequest r6 = request(Family::Partial, "101101", OracleStyle::AncillaRelphase);
    r6.diffuser_size = 3;
    EXPECT_NEAR(p_t(build_partial(r6)), 0.09765625, 1e-12);
}

TEST(families, partial_choice_of_wires_does_not_matter) {
    FamilyRequest r = request(Family::Partial, "10011");
    r.diffuser_size = 3;
    double first = p_t(build_partial(r));
    r.diffuser_qubits = {1, 3, 4};
    EXPECT_NEAR(p_t(build_partial(r)), first, 1e-12);
    EXPECT_EQ(build_partial(r).meta("diffuser_qubits"), "1,3,4");
}

TEST(families, partial_full_size_is_grover) {
    for (const char *mask : {"0110", "11010"}) {
        FamilyRequest r = request(Family::Partial, mask);
        r.diffuser_size = std::string(mask).size();
        EXPECT_LT(sim::total_variation(exact(build_partial(r)), exact(build_grover(request(Family::Grover, mask)))),
                  1e-12);
    }
}

TEST(families, partial_rejects_bad_size) {
    FamilyRequest r = request(Family::Partial, "0110");
    for (std::size_t k : {5}) {
        r.diffuser_size = k;
        try {
            build_partial(r);
            FAIL() << k;
        } catch (const Error &e) {
            EXPECT_EQ(e.code(), ErrorCode::BadDiffuserSize);
        }
    }
    r.diffuser_size = 2;
    r.diffuser_qubits = {0, 7};
    EXPECT_THROW(build_partial(r), Error);
}

TEST(families, wojter_success_probability) {
    // Reference from an independent dense model of the block schedule.
    Circuit c = build_wojter(request(Family::Wojter, "10110"));
    EXPECT_NEAR(p_t(c), 25.0 / 32.0, 1e-12);
    EXPECT_EQ(c.meta("oracle_calls"), "4");
    EXPECT_EQ(c.meta("experimental"), "false");
    EXPECT_EQ(c.meta("schedule"), "O,D2,O,D2,O,D1,O,D2");
}

TEST(families, wojter_styles_agree) {
    for (const char *mask : {"10110", "00000", "01011"}) {
        auto base = exact(build_wojter(request(Family::Wojter, mask)));
        for (auto style : {OracleStyle::AncillaRelphase, OracleStyle::AncillaRelphasePartialUncompute,
                           OracleStyle::MeasurementAssisted}) {
            auto other = exact(build_wojter(request(Family::Wojter, mask, style)));
            EXPECT_LT(sim::total_variation(base, other), 1e-10) << mask << " " << synth::style_name(style);
        }
    }
}

TEST(families, wojter_partial_uncompute_is_not_larger) {
    Circuit full = build_wojter(request(Family::Wojter, "10110", OracleStyle::AncillaRelphase));
    Circuit partial = build_wojter(request(Family::Wojter, "10110", OracleStyle::AncillaRelphasePartialUncompute));
    EXPECT_LE(two_qubit(partial), two_qubit(full));
    EXPECT_EQ(two_qubit(full), 81u);
    EXPECT_EQ(two_qubit(partial), 51u);
}

TEST(families, wojter_degenerate_partition_is_grover) {
    FamilyRequest r = request(Family::Wojter, "10110");
    r.partition = Partition{{5}};
    EXPECT_LT(sim::total_variation(exact(build_wojter(r)), exact(build_grover(request(Family::Grover, "10110")))), 1e-12);
}

TEST(families, wojter_aa) {
    Circuit w = build_wojter(request(Family::Wojter, "01101", OracleStyle::AncillaRelphase));
    Circuit aa = build_wojter_aa(request(Family::WojterAA, "01101", OracleStyle::AncillaRelphase));
    EXPECT_GT(p_t(aa), p_t(w));
    EXPECT_NEAR(p_t(aa), 0.9669189453125, 1e-12);
    EXPECT_EQ(std::stoi(aa.meta("oracle_calls")), std::stoi(w.meta("oracle_calls")) + 1);

    FamilyRequest r = request(Family::WojterAA, "01101");
    r.partition = Partition{{5}};
    FamilyRequest g = request(Family::Grover, "01101");
    g.iterations = 2;
    EXPECT_LT(sim::total_variation(exact(build_wojter_aa(r)), exact(build_grover(g))), 1e-12);
}

TEST(families, drzewker) {
    Circuit full = build_drzewker(request(Family::Drzewker, "11001", OracleStyle::AncillaRelphase));
    Circuit partial = build_drzewker(request(Family::Drzewker, "11001", OracleStyle::AncillaRelphasePartialUncompute));
    EXPECT_NEAR(p_t(full), 289.0 / 512.0, 1e-12);
    EXPECT_LT(sim::total_variation(exact(full), exact(partial)), 1e-10);
    EXPECT_LT(two_qubit(partial), two_qubit(full));
    EXPECT_LE(two_qubit(partial), 50u);
    EXPECT_EQ(two_qubit(partial), 44u);
    EXPECT_EQ(two_qubit(full), 62u);
    EXPECT_EQ(full.meta("oracle_calls"), "3");
}

TEST(families, drzewker_degenerate_partition_is_grover) {
    FamilyRequest r = request(Family::Drzewker, "011");
    r.partition = Partition{{3}};
    EXPECT_LT(sim::total_variation(exact(build_drzewker(r)), exact(build_grover(request(Family::Grover, "011")))), 1e-12);
}

TEST(families, partial_drzewker_is_prefix) {
    for (auto style : {OracleStyle::PlainMcz, OracleStyle::AncillaRelphase,
                       OracleStyle::AncillaRelphasePartialUncompute}) {
        Circuit d = build_drzewker(request(Family::Drzewker, "10011", style));
        Circuit pd = build_partial_drzewker(request(Family::PartialDrzewker, "10011", style));
        std::size_t body = pd.size() - 5;
        ASSERT_LT(body, d.size());
        for (std::size_t i = 0; i < body; i++) {
            EXPECT_EQ(pd.instructions()[i], d.instructions()[i]) << i;
        }
        for (std::size_t i = body; i < pd.size(); i++) {
            EXPECT_EQ(pd.instructions()[i].gate.kind, GateKind::Measure);
        }
        EXPECT_LT(two_qubit(pd), two_qubit(d));
        EXPECT_NEAR(p_t(pd), 169.0 / 512.0, 1e-12);
    }
}

TEST(families, blocked_partition_errors) {
    for (Partition p : {Partition{{2, 2}}, Partition{{1, 1, 3}}, Partition{{0, 5}}, Partition{}}) {
        FamilyRequest r = request(Family::Wojter, "10110");
        r.partition = p;
        try {
            build_wojter(r);
            FAIL() << p.str();
        } catch (const Error &e) {
            EXPECT_EQ(e.code(), ErrorCode::UnsupportedPartition) << p.str();
        }
    }
}

TEST(families, other_partitions_are_experimental) {
    FamilyRequest r = request(Family::Drzewker, "10110", OracleStyle::AncillaRelphase);
    r.partition = Partition{{2, 3}};
    Circuit c = build_drzewker(r);
    EXPECT_EQ(c.meta("experimental"), "true");
    FamilyRequest plain = r;
    plain.style = OracleStyle::PlainMcz;
    EXPECT_LT(sim::total_variation(exact(c), exact(build_drzewker(plain))), 1e-10);
}

TEST(families, schedule_override) {
    FamilyRequest r = request(Family::Wojter, "10110", OracleStyle::AncillaRelphase);
    r.schedule = {"O", "DA"};
    Circuit c = build_wojter(r);
    EXPECT_EQ(c.meta("schedule"), "O,DA");
    EXPECT_LT(sim::total_variation(exact(c), exact(build_grover(request(Family::Grover, "10110")))), 1e-10);
    r.schedule = {"O", "D3"};
    try {
        build_wojter(r);
        FAIL();
    } catch (const ValidationError &e) {
        EXPECT_EQ(e.field(), "schedule");
    }
}

TEST(families, wielomianer_p43) {
    for (std::uint64_t m = 0; m < 16; m++) {
        FamilyRequest r = request(Family::Wielomianer, pattern(m, 4));
        Circuit c = build_wielomianer_p43(r);
        // Reference 13/16 from an independent dense model with an explicit projection.
        EXPECT_NEAR(p_t(c), 0.8125, 1e-12);
        Circuit deferred = synth::lower(sim::defer_measurements(c));
        EXPECT_EQ(deferred.num_qubits(), c.num_qubits() + 1);
        EXPECT_LT(sim::total_variation(exact(c), sim::run_exact(deferred)), 1e-10);
    }
    Circuit c = build_wielomianer_p43(request(Family::Wielomianer, "0110"));
    std::size_t mid = 0;
    for (std::size_t i = 0; i < c.size(); i++) {
        if (c.instructions()[i].gate.kind != GateKind::Measure) continue;
        bool later_gate = false;
        for (std::size_t j = i + 1; j < c.size(); j++) later_gate |= c.instructions()[j].gate.kind != GateKind::Measure;
        mid += later_gate;
    }
    EXPECT_EQ(mid, 1u);
    EXPECT_EQ(c.meta("oracle_calls"), "3");
}

TEST(families, wielomianer_condition_convention_is_observable) {
    bool differs = false;
    for (std::uint64_t m = 0; m < 16; m++) {
        FamilyRequest r = request(Family::Wielomianer, pattern(m, 4));
        auto open = exact(build_wielomianer_p43(r));
        r.condition_value = true;
        auto flipped = exact(build_wielomianer_p43(r));
        differs |= sim::total_variation(open, flipped) > 1e-6;
        EXPECT_NEAR(flipped.probability(m), 1.0 / 64.0, 1e-12);
    }
    EXPECT_TRUE(differs);
}

TEST(families, wielomianer_needs_four_qubits) {
    try {
        build_wielomianer_p43(request(Family::Wielomianer, "101"));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::BadWidth);
    }
}

TEST(families, oracle_equivariance) {
    for (Family f : {Family::Grover, Family::Partial, Family::Wojter, Family::WojterAA, Family::Drzewker,
                     Family::PartialDrzewker, Family::Wielomianer}) {
        std::vector<std::size_t> widths = {5};
        if (f == Family::Grover || f == Family::Partial) widths = {2, 3, 4, 5};
        if (f == Family::Wielomianer) widths = {4};
        for (std::size_t n : widths) {
            std::vector<double> reference;
            for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); m++) {
                FamilyRequest r = request(f, pattern(m, n), n >= 4 ? OracleStyle::AncillaRelphase : OracleStyle::PlainMcz);
                if (f == Family::Wielomianer) r.style = OracleStyle::PlainMcz;
                if (f == Family::Partial) r.diffuser_size = n - 1 > 0 ? n - 1 : 1;
                auto rel = relabeled(exact(build(r)), m);
                if (reference.empty()) {
                    reference = rel;
                    continue;
                }
                for (std::size_t i = 0; i < rel.size(); i++) {
                    ASSERT_NEAR(rel[i], reference[i], 1e-10) << family_name(f) << " n=" << n << " m=" << m;
                }
            }
        }
    }
}

TEST(families, outputs_round_trip_and_lower) {
    std::vector<FamilyRequest> all = {
        request(Family::Grover, "1011", OracleStyle::AncillaRelphase),
        request(Family::Grover, "10110", OracleStyle::MeasurementAssisted),
        request(Family::Partial, "010011", OracleStyle::AncillaRelphase),
        request(Family::Wojter, "10110", OracleStyle::AncillaRelphasePartialUncompute),
        request(Family::WojterAA, "10110", OracleStyle::MeasurementAssisted),
        request(Family::Drzewker, "10110", OracleStyle::AncillaRelphase),
        request(Family::PartialDrzewker, "10110"),
        request(Family::Wielomianer, "1001"),
    };
    all[2].diffuser_size = 3;
    for (const auto &r : all) {
        Circuit c = build(r);
        EXPECT_EQ(parse(serialize(c)), c) << family_name(r.family);
        Circuit l = synth::lower(c);
        EXPECT_EQ(parse(serialize(l)), l) << family_name(r.family);
        EXPECT_NO_THROW(census(l));
        EXPECT_EQ(c.meta("family"), family_name(r.family));
        EXPECT_EQ(c.meta("mask"), r.mask);
    }
}

TEST(families, deterministic) {
    FamilyRequest r = request(Family::Drzewker, "10110", OracleStyle::AncillaRelphasePartialUncompute);
    EXPECT_EQ(build(r), build(r));
}

TEST(families, partition_parsing) {
    EXPECT_EQ(Partition::parse("3,2"), (Partition{{3, 2}}));
    EXPECT_EQ(Partition::parse(" 3 , 2 ").str(), "3,2");
    EXPECT_EQ(Partition::parse("5").n(), 5u);
    try {
        Partition::parse("3,,2");
        FAIL();
    } catch (const ValidationError &e) {
        EXPECT_EQ(e.field(), "partition");
    }
}
