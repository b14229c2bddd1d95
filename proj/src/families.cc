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

#include <algorithm>
#include <charconv>

#include "qsearch/error.h"

namespace qsearch::families {

namespace {

using synth::DecompositionMethod;
using synth::MczOptions;
using synth::OracleStyle;

void append(Fragment &out, const Fragment &more) {
    out.insert(out.end(), more.begin(), more.end());
}

std::vector<Qubit> iota(std::size_t first, std::size_t count) {
    std::vector<Qubit> q(count);
    for (std::size_t i = 0; i < count; i++) q[i] = static_cast<Qubit>(first + i);
    return q;
}

BitPattern mask_of(const FamilyRequest &r) {
    return BitPattern::parse(r.mask);
}

bool uses_ancilla_style(OracleStyle style) {
    return style != OracleStyle::PlainMcz;
}

// Oracle and full diffuser share one ancilla pool.
std::size_t ancillas_needed(std::size_t n, OracleStyle style) {
    std::size_t diffuser = uses_ancilla_style(style) && n >= 4 ? 1 : 0;
    return std::max(synth::oracle_ancillas(n, style), diffuser);
}

// Shared state while a builder appends blocks to one circuit.
struct Builder {
    Circuit circuit;
    std::size_t n;
    OracleStyle style;
    std::vector<Qubit> ancillas;
    std::vector<std::string> plans;

    Builder(std::size_t n_, OracleStyle style_, std::size_t ancilla_count)
        : circuit(n_ + ancilla_count, n_), n(n_), style(style_), ancillas(iota(n_, ancilla_count)) {
    }

    void hadamards() {
        for (Qubit q = 0; q < n; q++) circuit.append(Gate::h(q));
    }

    void measure_all() {
        for (Qubit q = 0; q < n; q++) circuit.append(Gate::measure(q, q));
    }

    MczOptions options_for(std::size_t k) {
        MczOptions o;
        if (style == OracleStyle::PlainMcz || ancillas.empty()) return o;
        if (style == OracleStyle::MeasurementAssisted) {
            if (k < 3) return o;
            o.method = DecompositionMethod::MeasurementAssisted;
            o.resources.ancillas = ancillas;
            o.resources.clbits = {circuit.add_clbit()};
            return o;
        }
        if (k < 4) return o;
        o.method = DecompositionMethod::RelphaseMaslov;
        o.resources.ancillas = ancillas;
        return o;
    }

    void diffuse(const std::vector<Qubit> &targets) {
        MczOptions o = options_for(targets.size());
        note("G" + std::to_string(targets.size()) + ": " + synth::mcz_plan(targets.size(), o));
        circuit.append(synth::diffuser(targets, o));
    }

    void full_oracle(const BitPattern &mask) {
        synth::Resources r;
        if (synth::oracle_ancillas(n, style) > 0) {
            if (ancillas.empty()) {
                throw Error(ErrorCode::MissingAncilla, std::string(synth::style_name(style)) + " oracle on " +
                                                           std::to_string(n) + " qubits needs an ancilla");
            }
            r.ancillas = ancillas;
        }
        if (synth::oracle_clbits(n, style) > 0) r.clbits = {circuit.add_clbit()};
        MczOptions o;
        o.resources = r;
        if (style == OracleStyle::AncillaRelphase || style == OracleStyle::AncillaRelphasePartialUncompute) {
            o.method = DecompositionMethod::RelphaseMaslov;
        } else if (style == OracleStyle::MeasurementAssisted && n >= 3) {
            o.method = DecompositionMethod::MeasurementAssisted;
        }
        note("O: " + synth::mcz_plan(n, o));
        circuit.append(synth::oracle(synth::OracleSpec{mask, style}, r));
    }

    void note(const std::string &plan) {
        if (std::find(plans.begin(), plans.end(), plan) == plans.end()) plans.push_back(plan);
    }

    std::string decomposition() const {
        std::string s;
        for (const auto &p : plans) s += (s.empty() ? "" : "; ") + p;
        return s;
    }
};

void finish(Circuit &c, const FamilyRequest &r, std::size_t oracle_calls, const Builder &b) {
    auto &m = c.metadata();
    m["family"] = family_name(r.family);
    m["mask"] = r.mask;
    m["oracle_style"] = synth::style_name(r.style);
    m["uncompute"] = uncompute_name(r.uncompute);
    m["oracle_calls"] = std::to_string(oracle_calls);
    m["result_bits"] = std::to_string(b.n);
    m["ancillas"] = std::to_string(b.ancillas.size());
    m["decomposition"] = b.decomposition();
}

Circuit grover_like(const FamilyRequest &r, std::size_t iterations) {
    BitPattern mask = mask_of(r);
    std::size_t n = mask.width;
    std::size_t need = ancillas_needed(n, r.style);
    if (need > 0 && r.ancillas == 0) {
        throw Error(ErrorCode::MissingAncilla, std::string(synth::style_name(r.style)) + " needs an ancilla");
    }
    Builder b(n, r.style, need > 0 ? r.ancillas : 0);
    b.hadamards();
    for (std::size_t i = 0; i < iterations; i++) {
        b.full_oracle(mask);
        b.diffuse(iota(0, n));
    }
    b.measure_all();
    Circuit c = r.uncompute == Uncompute::Partial ? peephole_cancel(b.circuit) : b.circuit;
    finish(c, r, iterations, b);
    return c;
}

struct Blocks {
    std::vector<Qubit> first;
    std::vector<Qubit> second;
};

Blocks split(const FamilyRequest &r, std::size_t n) {
    const auto &parts = r.partition.parts;
    if (parts.empty()) {
        throw Error(ErrorCode::UnsupportedPartition, "blocked families need a partition");
    }
    for (std::size_t p : parts) {
        if (p == 0) throw Error(ErrorCode::UnsupportedPartition, "partition parts must be positive");
    }
    if (r.partition.n() != n) {
        throw Error(ErrorCode::UnsupportedPartition, "partition " + r.partition.str() + " does not sum to the mask width " +
                                                         std::to_string(n));
    }
    if (parts.size() > 2) {
        throw Error(ErrorCode::UnsupportedPartition,
                    "partition " + r.partition.str() + " has more than two blocks; only two-block trees are built");
    }
    if (parts.size() == 1) return {iota(0, n), {}};
    return {iota(0, parts[0]), iota(parts[0], parts[1])};
}

// Relative-phase (or exact, for wide blocks) AND of a block into the ancilla.
Fragment block_compute(const std::vector<Qubit> &block, Qubit a, OracleStyle style) {
    if (style == OracleStyle::MeasurementAssisted) return synth::and_compute(block, a);
    switch (block.size()) {
        case 1:
            return {Gate::cx(block[0], a)};
        case 2:
            return synth::relphase_ccx(block[0], block[1], a);
        case 3:
            return synth::relphase_cccx(block[0], block[1], block[2], a);
        default:
            return {Gate::mcx(block, a)};
    }
}

const char *block_compute_name(std::size_t k, OracleStyle style) {
    if (style == OracleStyle::MeasurementAssisted) return k == 1 ? "cx" : k == 2 ? "clean rccx" : "exact mcx";
    return k == 1 ? "cx" : k == 2 ? "rccx" : k == 3 ? "rcccx" : "exact mcx";
}

Circuit blocked(const FamilyRequest &r, std::vector<std::string> schedule) {
    BitPattern mask = mask_of(r);
    std::size_t n = mask.width;
    Blocks blocks = split(r, n);
    if (blocks.second.empty()) {
        Circuit c = grover_like(r, r.family == Family::WojterAA ? 2 : 1);
        c.metadata()["family"] = family_name(r.family);
        c.metadata()["partition"] = r.partition.str();
        c.metadata()["experimental"] = "false";
        c.metadata()["schedule"] = r.family == Family::WojterAA ? "O,DA,O,DA" : "O,DA";
        return c;
    }
    if (!r.schedule.empty()) schedule = r.schedule;
    std::size_t oracle_calls = 0;
    std::size_t last_oracle = schedule.size();
    for (std::size_t i = 0; i < schedule.size(); i++) {
        const auto &t = schedule[i];
        if (t != "O" && t != "D1" && t != "D2" && t != "DA") {
            throw ValidationError("schedule", "unknown schedule token '" + t + "' (expected O, D1, D2 or DA)");
        }
        if (t == "O") {
            oracle_calls++;
            last_oracle = i;
        }
    }
    bool ancilla_oracle = uses_ancilla_style(r.style);
    if (ancilla_oracle && r.ancillas == 0) {
        throw Error(ErrorCode::MissingAncilla, std::string(synth::style_name(r.style)) + " blocked oracle needs an ancilla");
    }
    Builder b(n, r.style, ancilla_oracle ? r.ancillas : 0);
    std::uint64_t open1 = 0, open2 = 0;
    for (std::size_t i = 0; i < blocks.first.size(); i++) {
        if (!mask.bit(i)) open1 |= std::uint64_t{1} << i;
    }
    for (std::size_t i = 0; i < blocks.second.size(); i++) {
        if (!mask.bit(blocks.first.size() + i)) open2 |= std::uint64_t{1} << i;
    }
    Fragment flip1;
    for (std::size_t i = 0; i < blocks.first.size(); i++) {
        if ((open1 >> i) & 1) flip1.push_back(Gate::x(blocks.first[i]));
    }

    // A partial uncompute may drop the last oracle's uncompute when nothing
    // after it but the block-2 diffuser runs before the final readout.
    bool drop_last = r.uncompute == Uncompute::Partial && ancilla_oracle;
    for (std::size_t i = last_oracle + 1; i < schedule.size() && drop_last; i++) {
        if (schedule[i] != "D2") drop_last = false;
    }

    if (ancilla_oracle) {
        std::string central = "mcz(" + std::to_string(blocks.second.size() + 1) + ")";
        b.note(std::string("O: ") + block_compute_name(blocks.first.size(), r.style) + " block (" +
               std::to_string(blocks.first.size()) + ") into ancilla, central " + central +
               (r.style == OracleStyle::MeasurementAssisted ? ", measured uncompute" : ", inverse uncompute"));
    }

    b.hadamards();
    for (std::size_t i = 0; i < schedule.size(); i++) {
        const auto &t = schedule[i];
        if (t == "D1") {
            b.diffuse(blocks.first);
        } else if (t == "D2") {
            b.diffuse(blocks.second);
        } else if (t == "DA") {
            b.diffuse(iota(0, n));
        } else if (!ancilla_oracle) {
            b.full_oracle(mask);
        } else {
            Qubit a = b.ancillas[0];
            Fragment compute = block_compute(blocks.first, a, r.style);
            Fragment o = flip1;
            append(o, compute);
            append(o, flip1);
            std::vector<Qubit> central = blocks.second;
            central.push_back(a);
            o.push_back(Gate::mcz(central, open2));
            if (!(drop_last && i == last_oracle)) {
                append(o, flip1);
                if (r.style == OracleStyle::MeasurementAssisted) {
                    append(o, synth::measurement_assisted_uncompute(a, blocks.first, 0, b.circuit.add_clbit()));
                } else {
                    append(o, inverse(compute));
                }
                append(o, flip1);
            }
            b.circuit.append(o);
        }
    }
    b.measure_all();
    Circuit c = r.uncompute == Uncompute::Partial ? peephole_cancel(b.circuit) : b.circuit;
    finish(c, r, oracle_calls, b);
    bool canonical = r.partition == Partition{{3, 2}};
    c.metadata()["partition"] = r.partition.str();
    c.metadata()["experimental"] = canonical ? "false" : "true";
    std::string s;
    for (const auto &t : schedule) s += (s.empty() ? "" : ",") + t;
    c.metadata()["schedule"] = s;
    return c;
}

// Only the central phase is guarded: the H X layers around it cancel when it
// does not fire, and a guarded CZ stays expressible as a coherent control.
Fragment conditioned_diffuser(const std::vector<Qubit> &targets, Condition condition) {
    Fragment out;
    for (Qubit q : targets) out.push_back(Gate::h(q));
    for (Qubit q : targets) out.push_back(Gate::x(q));
    out.emplace_back(Gate::mcz(targets), condition);
    for (Qubit q : targets) out.push_back(Gate::x(q));
    for (Qubit q : targets) out.push_back(Gate::h(q));
    return out;
}

}  // namespace

const char *family_name(Family family) {
    switch (family) {
        case Family::Grover:
            return "grover";
        case Family::Wojter:
            return "wojter";
        case Family::Drzewker:
            return "drzewker";
        case Family::Wielomianer:
            return "wielomianer";
        case Family::Partial:
            return "partial";
        case Family::WojterAA:
            return "wojter-aa";
        case Family::PartialDrzewker:
            return "partial-drzewker";
    }
    return "?";
}

Family parse_family(std::string_view name) {
    for (auto f : {Family::Grover, Family::Wojter, Family::Drzewker, Family::Wielomianer, Family::Partial,
                   Family::WojterAA, Family::PartialDrzewker}) {
        if (name == family_name(f)) return f;
    }
    throw ValidationError("family", "unknown family '" + std::string(name) + "'");
}

const char *uncompute_name(Uncompute uncompute) {
    switch (uncompute) {
        case Uncompute::Full:
            return "full";
        case Uncompute::Partial:
            return "partial";
        case Uncompute::MeasurementAssisted:
            return "measurement-assisted";
    }
    return "?";
}

Uncompute parse_uncompute(std::string_view name) {
    for (auto u : {Uncompute::Full, Uncompute::Partial, Uncompute::MeasurementAssisted}) {
        if (name == uncompute_name(u)) return u;
    }
    throw ValidationError("uncompute", "unknown uncompute option '" + std::string(name) + "'");
}

Partition Partition::parse(std::string_view text) {
    Partition p;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(',', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view token = text.substr(start, end - start);
        while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
        while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
        std::size_t v = 0;
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
        if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
            throw ValidationError("partition", "cannot read partition '" + std::string(text) + "'");
        }
        p.parts.push_back(v);
        start = end + 1;
    }
    return p;
}

std::size_t Partition::n() const {
    std::size_t s = 0;
    for (std::size_t p : parts) s += p;
    return s;
}

std::string Partition::str() const {
    std::string s;
    for (std::size_t p : parts) s += (s.empty() ? "" : ",") + std::to_string(p);
    return s;
}

FamilyRequest normalized(FamilyRequest r) {
    if (r.style == OracleStyle::AncillaRelphasePartialUncompute) r.uncompute = Uncompute::Partial;
    if (r.uncompute == Uncompute::MeasurementAssisted) r.style = OracleStyle::MeasurementAssisted;
    return r;
}

std::vector<std::string> default_schedule(Family family) {
    switch (family) {
        case Family::Wojter:
            return {"O", "D2", "O", "D2", "O", "D1", "O", "D2"};
        case Family::WojterAA:
            return {"O", "D2", "O", "D2", "O", "D1", "O", "D2", "O", "DA"};
        case Family::Drzewker:
            return {"O", "D2", "O", "D1", "O", "D2"};
        case Family::PartialDrzewker:
            return {"O", "D2", "O", "D1"};
        default:
            return {};
    }
}

Circuit build_grover(const FamilyRequest &request) {
    FamilyRequest r = normalized(request);
    if (r.iterations == 0) {
        throw ValidationError("iterations", "grover needs at least one iteration");
    }
    return grover_like(r, r.iterations);
}

Circuit build_partial(const FamilyRequest &request) {
    FamilyRequest r = normalized(request);
    BitPattern mask = mask_of(r);
    std::size_t n = mask.width;
    std::size_t k = r.diffuser_size == 0 ? (r.diffuser_qubits.empty() ? n : r.diffuser_qubits.size()) : r.diffuser_size;
    if (k < 1 || k > n) {
        throw Error(ErrorCode::BadDiffuserSize,
                    "diffuser size " + std::to_string(k) + " is outside [1, " + std::to_string(n) + "]");
    }
    std::vector<Qubit> targets = r.diffuser_qubits.empty() ? iota(0, k) : r.diffuser_qubits;
    if (targets.size() != k) {
        throw Error(ErrorCode::BadDiffuserSize, "diffuser_qubits lists " + std::to_string(targets.size()) +
                                                    " wires but diffuser_size is " + std::to_string(k));
    }
    for (Qubit q : targets) {
        if (q >= n) throw Error(ErrorCode::BadDiffuserSize, "diffuser qubit " + std::to_string(q) + " is not a search qubit");
    }
    std::size_t need = ancillas_needed(n, r.style);
    if (need > 0 && r.ancillas == 0) {
        throw Error(ErrorCode::MissingAncilla, std::string(synth::style_name(r.style)) + " needs an ancilla");
    }
    Builder b(n, r.style, need > 0 ? r.ancillas : 0);
    b.hadamards();
    b.full_oracle(mask);
    b.diffuse(targets);
    b.measure_all();
    Circuit c = r.uncompute == Uncompute::Partial ? peephole_cancel(b.circuit) : b.circuit;
    finish(c, r, 1, b);
    std::string dq;
    for (Qubit q : targets) dq += (dq.empty() ? "" : ",") + std::to_string(q);
    c.metadata()["diffuser_qubits"] = dq;
    return c;
}

Circuit build_wojter(const FamilyRequest &request) {
    FamilyRequest r = normalized(request);
    r.family = Family::Wojter;
    return blocked(r, default_schedule(Family::Wojter));
}

Circuit build_wojter_aa(const FamilyRequest &request) {
    FamilyRequest r = normalized(request);
    r.family = Family::WojterAA;
    return blocked(r, default_schedule(Family::WojterAA));
}

Circuit build_drzewker(const FamilyRequest &request) {
    FamilyRequest r = normalized(request);
    r.family = Family::Drzewker;
    return blocked(r, default_schedule(Family::Drzewker));
}

Circuit build_partial_drzewker(const FamilyRequest &request) {
    FamilyRequest r = normalized(request);
    r.family = Family::PartialDrzewker;
    return blocked(r, default_schedule(Family::PartialDrzewker));
}

Circuit build_wielomianer_p43(const FamilyRequest &request) {
    FamilyRequest r = normalized(request);
    r.family = Family::Wielomianer;
    BitPattern mask = mask_of(r);
    if (mask.width != 4) {
        throw Error(ErrorCode::BadWidth, "P43 is defined on 4 search qubits, mask has " + std::to_string(mask.width));
    }
    const Qubit a = 4, flag = 5;
    const Clbit c = 4;
    Circuit circuit(6, 5);
    std::uint64_t open_pair = (mask.bit(0) ? 0 : 1) | (mask.bit(1) ? 0 : 2);
    // Open bits for (a, q2, q3) and (a, q2, q3 -> flag): a is always a closed control.
    std::uint64_t open_tail = (mask.bit(2) ? 0 : 2) | (mask.bit(3) ? 0 : 4);
    Condition branch{c, r.condition_value};
    std::vector<Qubit> lower_pair = {2, 3};
    std::vector<Qubit> upper_pair = {0, 1};

    for (Qubit q = 0; q < 4; q++) circuit.append(Gate::h(q));
    circuit.append(Gate::mcx({0, 1}, a, open_pair));
    circuit.append(Gate::mcz({a, 2, 3}, open_tail));
    circuit.append(synth::diffuser(lower_pair));
    circuit.append(Gate::mcx({a, 2, 3}, flag, open_tail));
    circuit.append(Gate::measure(flag, c));
    circuit.append(conditioned_diffuser(upper_pair, branch));
    circuit.append(Instruction(Gate::mcx({0, 1}, a, open_pair), branch));
    circuit.append(Instruction(Gate::mcz({a, 2, 3}, open_tail), branch));
    circuit.append(conditioned_diffuser(lower_pair, branch));
    for (Qubit q = 0; q < 4; q++) circuit.append(Gate::measure(q, q));

    auto &m = circuit.metadata();
    m["family"] = family_name(Family::Wielomianer);
    m["mask"] = r.mask;
    m["oracle_style"] = synth::style_name(r.style);
    m["uncompute"] = uncompute_name(r.uncompute);
    // Two phase-oracle blocks and the predicate evaluated into the flag qubit.
    m["oracle_calls"] = "3";
    m["result_bits"] = "4";
    m["ancillas"] = "2";
    m["condition_value"] = r.condition_value ? "1" : "0";
    m["decomposition"] = "exact ccx/ccz/cccx; mid-circuit flag measurement; tail conditioned on the flag";
    return circuit;
}

Circuit build(const FamilyRequest &request) {
    switch (request.family) {
        case Family::Grover:
            return build_grover(request);
        case Family::Wojter:
            return build_wojter(request);
        case Family::Drzewker:
            return build_drzewker(request);
        case Family::Wielomianer:
            return build_wielomianer_p43(request);
        case Family::Partial:
            return build_partial(request);
        case Family::WojterAA:
            return build_wojter_aa(request);
        case Family::PartialDrzewker:
            return build_partial_drzewker(request);
    }
    throw ValidationError("family", "unknown family");
}

}  // namespace qsearch::families
