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

#include <algorithm>
#include <bit>
#include <numbers>

#include "qsearch/error.h"

namespace qsearch::synth {

namespace {

constexpr double kPi = std::numbers::pi;

void append(Fragment &out, const Fragment &more) {
    out.insert(out.end(), more.begin(), more.end());
}

void require_distinct(std::span<const Qubit> qubits, const char *what) {
    for (std::size_t i = 0; i < qubits.size(); i++) {
        for (std::size_t j = i + 1; j < qubits.size(); j++) {
            if (qubits[i] == qubits[j]) {
                throw Error(ErrorCode::BadArity, std::string(what) + " needs distinct qubits");
            }
        }
    }
}

std::size_t exact_mcz_cost(std::size_t m) {
    if (m <= 1) return 0;
    if (m == 2) return 1;
    return (std::size_t{1} << m) - 2;
}

std::size_t relphase_compute_cost(std::size_t g) {
    return g == 2 ? 3 : 6;
}

std::vector<std::size_t> allowed_groups(DecompositionMethod method) {
    switch (method) {
        case DecompositionMethod::Margolus:
            return {2};
        case DecompositionMethod::RelphaseMaslov:
            return {2, 3};
        default:
            return {};
    }
}

struct Tree {
    std::vector<std::size_t> groups;
    std::size_t cost = 0;
};

// Left-deep: each group takes the first g live wires (the previous ancilla
// sits at the front) and replaces them with one fresh ancilla.
Tree best_tree(std::size_t live, std::size_t ancillas, const std::vector<std::size_t> &sizes) {
    Tree best{{}, exact_mcz_cost(live)};
    if (ancillas == 0) return best;
    for (std::size_t g : sizes) {
        if (g > live) continue;
        Tree sub = best_tree(live - g + 1, ancillas - 1, sizes);
        std::size_t cost = 2 * relphase_compute_cost(g) + sub.cost;
        if (cost < best.cost || (cost == best.cost && sub.groups.size() + 1 < best.groups.size())) {
            best.cost = cost;
            best.groups = {g};
            best.groups.insert(best.groups.end(), sub.groups.begin(), sub.groups.end());
        }
    }
    return best;
}

Fragment x_layer(std::span<const Qubit> qubits, std::uint64_t open) {
    Fragment out;
    for (std::size_t i = 0; i < qubits.size(); i++) {
        if ((open >> i) & 1) out.push_back(Gate::x(qubits[i]));
    }
    return out;
}

Fragment with_open(std::span<const Qubit> qubits, std::uint64_t open, Fragment body) {
    Fragment out = x_layer(qubits, open);
    append(out, body);
    append(out, x_layer(qubits, open));
    return out;
}

// Gray-code walk over the parities of every nonempty subset of q[0..m).
// Subset S gets angle base * (-1)^(|S|-1); the sum over S is pi * prod(x).
void emit_phase_polynomial(Fragment &out, std::span<const Qubit> q, std::size_t m, double base) {
    if (m == 1) {
        out.push_back(Gate::rz(q[0], base));
        return;
    }
    Qubit t = q[m - 1];
    out.push_back(Gate::rz(t, base));
    std::uint64_t steps = std::uint64_t{1} << (m - 1);
    for (std::uint64_t i = 1; i < steps; i++) {
        std::uint64_t gray = i ^ (i >> 1);
        std::size_t changed = static_cast<std::size_t>(std::countr_zero(i));
        out.push_back(Gate::cx(q[changed], t));
        int size = std::popcount(gray) + 1;
        out.push_back(Gate::rz(t, size % 2 ? base : -base));
    }
    out.push_back(Gate::cx(q[m - 2], t));
    emit_phase_polynomial(out, q, m - 1, base);
}

Fragment lowered_mcz(std::span<const Qubit> q) {
    Fragment out;
    if (q.size() == 1) {
        out.push_back(Gate::z(q[0]));
    } else if (q.size() == 2) {
        out.push_back(Gate::cz(q[0], q[1]));
    } else {
        emit_phase_polynomial(out, q, q.size(), kPi / static_cast<double>(std::uint64_t{1} << (q.size() - 1)));
    }
    return out;
}

Fragment tree_mcz(std::span<const Qubit> qubits, const Tree &tree, DecompositionMethod method,
                  std::span<const Qubit> ancillas) {
    std::vector<Qubit> live(qubits.begin(), qubits.end());
    Fragment compute;
    std::vector<Fragment> steps;
    for (std::size_t i = 0; i < tree.groups.size(); i++) {
        std::size_t g = tree.groups[i];
        std::vector<Qubit> group(live.begin(), live.begin() + static_cast<std::ptrdiff_t>(g));
        Fragment step = compute_and_relphase(method, group, ancillas[i]);
        steps.push_back(step);
        append(compute, step);
        live.erase(live.begin(), live.begin() + static_cast<std::ptrdiff_t>(g));
        live.insert(live.begin(), ancillas[i]);
    }
    Fragment out = compute;
    out.push_back(Gate::mcz(live));
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
        append(out, inverse(*it));
    }
    return out;
}

}  // namespace

const char *style_name(OracleStyle style) {
    switch (style) {
        case OracleStyle::PlainMcz:
            return "plain-mcz";
        case OracleStyle::AncillaRelphase:
            return "ancilla-relphase";
        case OracleStyle::AncillaRelphasePartialUncompute:
            return "ancilla-relphase-partial-uncompute";
        case OracleStyle::MeasurementAssisted:
            return "measurement-assisted";
    }
    return "?";
}

OracleStyle parse_style(std::string_view name) {
    for (auto s : {OracleStyle::PlainMcz, OracleStyle::AncillaRelphase, OracleStyle::AncillaRelphasePartialUncompute,
                   OracleStyle::MeasurementAssisted}) {
        if (name == style_name(s)) return s;
    }
    throw ValidationError("oracle_style", "unknown oracle style '" + std::string(name) + "'");
}

const char *method_name(DecompositionMethod method) {
    switch (method) {
        case DecompositionMethod::ExactRecursive:
            return "exact-recursive";
        case DecompositionMethod::ExactOneAncilla:
            return "exact-one-ancilla";
        case DecompositionMethod::Margolus:
            return "margolus";
        case DecompositionMethod::RelphaseMaslov:
            return "relphase-maslov";
        case DecompositionMethod::MeasurementAssisted:
            return "measurement-assisted";
    }
    return "?";
}

DecompositionMethod parse_method(std::string_view name) {
    for (auto m : {DecompositionMethod::ExactRecursive, DecompositionMethod::ExactOneAncilla,
                   DecompositionMethod::Margolus, DecompositionMethod::RelphaseMaslov,
                   DecompositionMethod::MeasurementAssisted}) {
        if (name == method_name(m)) return m;
    }
    throw ValidationError("method", "unknown decomposition method '" + std::string(name) + "'");
}

OracleSpec OracleSpec::from(std::string_view mask, OracleStyle style) {
    return OracleSpec{BitPattern::parse(mask), style};
}

Fragment diffuser(std::span<const Qubit> targets, const MczOptions &options) {
    if (targets.empty()) {
        throw Error(ErrorCode::BadArity, "diffuser needs at least one qubit");
    }
    require_distinct(targets, "diffuser");
    Fragment out;
    for (Qubit q : targets) out.push_back(Gate::h(q));
    for (Qubit q : targets) out.push_back(Gate::x(q));
    append(out, mcz(targets, 0, options));
    for (Qubit q : targets) out.push_back(Gate::x(q));
    for (Qubit q : targets) out.push_back(Gate::h(q));
    return out;
}

Fragment relphase_ccx(Qubit c0, Qubit c1, Qubit target, Direction direction) {
    Qubit qs[] = {c0, c1, target};
    require_distinct(qs, "relphase_ccx");
    return {Gate::rccx(c0, c1, target, direction)};
}

Fragment relphase_cccx(Qubit c0, Qubit c1, Qubit c2, Qubit target, Direction direction) {
    Qubit qs[] = {c0, c1, c2, target};
    require_distinct(qs, "relphase_cccx");
    return {Gate::rcccx(c0, c1, c2, target, direction)};
}

Fragment compute_and_relphase(DecompositionMethod method, std::span<const Qubit> controls, Qubit target) {
    std::vector<std::size_t> sizes = allowed_groups(method);
    if (method == DecompositionMethod::MeasurementAssisted) {
        return and_compute(controls, target);
    }
    if (sizes.empty()) {
        if (controls.empty()) {
            throw Error(ErrorCode::MethodArityMismatch, "compute needs at least one control");
        }
        return {Gate::mcx(std::vector<Qubit>(controls.begin(), controls.end()), target)};
    }
    if (std::find(sizes.begin(), sizes.end(), controls.size()) == sizes.end()) {
        throw Error(ErrorCode::MethodArityMismatch, std::string(method_name(method)) + " cannot compute the AND of " +
                                                        std::to_string(controls.size()) + " controls");
    }
    if (controls.size() == 2) return relphase_ccx(controls[0], controls[1], target);
    return relphase_cccx(controls[0], controls[1], controls[2], target);
}

Fragment and_compute(std::span<const Qubit> controls, Qubit target) {
    if (controls.empty()) {
        throw Error(ErrorCode::BadArity, "and_compute needs at least one control");
    }
    if (controls.size() == 1) return {Gate::cx(controls[0], target)};
    if (controls.size() == 2) {
        // On a clean target the relative-phase Toffoli leaves a single phase i
        // on the |11>|1> output; the Rz(-pi/2) removes it.
        Fragment out = relphase_ccx(controls[0], controls[1], target);
        out.push_back(Gate::rz(target, -kPi / 2));
        return out;
    }
    return {Gate::mcx(std::vector<Qubit>(controls.begin(), controls.end()), target)};
}

Fragment measurement_assisted_uncompute(Qubit ancilla, std::span<const Qubit> controls, std::uint64_t open,
                                        Clbit clbit) {
    Condition fired{clbit, true};
    Fragment out;
    out.push_back(Gate::h(ancilla));
    out.push_back(Gate::measure(ancilla, clbit));
    out.emplace_back(Gate::mcz(std::vector<Qubit>(controls.begin(), controls.end()), open), fired);
    out.emplace_back(Gate::x(ancilla), fired);
    return out;
}

namespace {

struct Build {
    Fragment fragment;
    std::string plan;
    std::size_t cost = 0;
};

Build build_mcz(std::span<const Qubit> qubits, const MczOptions &options) {
    std::size_t k = qubits.size();
    const auto &anc = options.resources.ancillas;
    DecompositionMethod method = options.method;
    Build b;
    auto exact = [&] {
        b.fragment = {Gate::mcz(std::vector<Qubit>(qubits.begin(), qubits.end()))};
        b.plan = "single mcz(" + std::to_string(k) + ")";
        b.cost = exact_mcz_cost(k);
    };
    bool measured = method == DecompositionMethod::MeasurementAssisted && k >= 3;
    if ((k <= 3 && !measured) || method == DecompositionMethod::ExactRecursive) {
        exact();
        return b;
    }
    if (anc.empty()) {
        throw Error(ErrorCode::MissingAncilla,
                    std::string(method_name(method)) + " on " + std::to_string(k) + " qubits needs an ancilla");
    }
    switch (method) {
        case DecompositionMethod::ExactOneAncilla: {
            std::vector<Qubit> controls(qubits.begin(), qubits.end() - 2);
            Fragment compute = {Gate::mcx(controls, anc[0])};
            b.fragment = compute;
            b.fragment.push_back(Gate::mcz({anc[0], qubits[k - 2], qubits[k - 1]}));
            append(b.fragment, compute);
            b.plan = "exact mcx(" + std::to_string(k - 1) + ") into ancilla, central mcz(3)";
            b.cost = 2 * (exact_mcz_cost(k - 1)) + 6;
            return b;
        }
        case DecompositionMethod::Margolus:
        case DecompositionMethod::RelphaseMaslov: {
            std::size_t usable = std::min(anc.size(), k);
            Tree tree = best_tree(k, usable, allowed_groups(method));
            b.fragment = tree_mcz(qubits, tree, method, anc);
            b.plan = std::string(method_name(method)) + " left-deep groups [";
            std::size_t live = k;
            for (std::size_t i = 0; i < tree.groups.size(); i++) {
                b.plan += (i ? "," : "") + std::to_string(tree.groups[i]);
                live = live - tree.groups[i] + 1;
            }
            b.plan += "], central mcz(" + std::to_string(live) + ")";
            b.cost = tree.cost;
            return b;
        }
        case DecompositionMethod::MeasurementAssisted: {
            if (options.resources.clbits.empty()) {
                throw Error(ErrorCode::MissingAncilla, "measurement-assisted mcz needs a classical bit");
            }
            std::vector<Qubit> pair = {qubits[0], qubits[1]};
            b.fragment = and_compute(pair, anc[0]);
            std::vector<Qubit> rest = {anc[0]};
            rest.insert(rest.end(), qubits.begin() + 2, qubits.end());
            MczOptions inner;
            inner.method = DecompositionMethod::RelphaseMaslov;
            inner.resources.ancillas.assign(anc.begin() + 1, anc.end());
            Build payload;
            if (rest.size() > 3 && !inner.resources.ancillas.empty()) {
                payload = build_mcz(rest, inner);
            } else {
                payload.fragment = {Gate::mcz(rest)};
                payload.plan = "single mcz(" + std::to_string(rest.size()) + ")";
                payload.cost = exact_mcz_cost(rest.size());
            }
            append(b.fragment, payload.fragment);
            append(b.fragment, measurement_assisted_uncompute(anc[0], pair, 0, options.resources.clbits[0]));
            b.plan = "clean and(2) into ancilla, payload " + payload.plan + ", measured uncompute";
            b.cost = 3 + payload.cost + 1;
            return b;
        }
        case DecompositionMethod::ExactRecursive:
            break;
    }
    exact();
    return b;
}

}  // namespace

Fragment mcz(std::span<const Qubit> qubits, std::uint64_t open, const MczOptions &options) {
    if (qubits.empty()) {
        throw Error(ErrorCode::BadArity, "mcz needs at least one qubit");
    }
    require_distinct(qubits, "mcz");
    bool measured = options.method == DecompositionMethod::MeasurementAssisted && qubits.size() >= 3;
    if ((qubits.size() <= 3 && !measured) || options.method == DecompositionMethod::ExactRecursive) {
        return {Gate::mcz(std::vector<Qubit>(qubits.begin(), qubits.end()), open)};
    }
    return with_open(qubits, open, build_mcz(qubits, options).fragment);
}

std::string mcz_plan(std::size_t k, const MczOptions &options) {
    std::vector<Qubit> qubits(k);
    for (std::size_t i = 0; i < k; i++) qubits[i] = static_cast<Qubit>(i);
    MczOptions shifted = options;
    for (std::size_t i = 0; i < shifted.resources.ancillas.size(); i++) {
        shifted.resources.ancillas[i] = static_cast<Qubit>(k + i);
    }
    return build_mcz(qubits, shifted).plan;
}

std::size_t mcz_cost(std::size_t k, const MczOptions &options) {
    std::vector<Qubit> qubits(k);
    for (std::size_t i = 0; i < k; i++) qubits[i] = static_cast<Qubit>(i);
    MczOptions shifted = options;
    for (std::size_t i = 0; i < shifted.resources.ancillas.size(); i++) {
        shifted.resources.ancillas[i] = static_cast<Qubit>(k + i);
    }
    return build_mcz(qubits, shifted).cost;
}

std::size_t oracle_ancillas(std::size_t n, OracleStyle style) {
    if (style == OracleStyle::PlainMcz) return 0;
    if (style == OracleStyle::MeasurementAssisted) return n >= 3 ? 1 : 0;
    return n >= 4 ? 1 : 0;
}

std::size_t oracle_clbits(std::size_t n, OracleStyle style) {
    return style == OracleStyle::MeasurementAssisted && n >= 3 ? 1 : 0;
}

Fragment oracle(const OracleSpec &spec, const Resources &resources) {
    std::size_t n = spec.n();
    if (n == 0) {
        throw Error(ErrorCode::BadMask, "oracle mask is empty");
    }
    std::vector<Qubit> qubits(n);
    std::uint64_t open = 0;
    for (std::size_t i = 0; i < n; i++) {
        qubits[i] = static_cast<Qubit>(i);
        if (!spec.mask.bit(i)) open |= std::uint64_t{1} << i;
    }
    MczOptions options;
    options.resources = resources;
    switch (spec.style) {
        case OracleStyle::PlainMcz:
            options.method = DecompositionMethod::ExactRecursive;
            break;
        case OracleStyle::AncillaRelphase:
        case OracleStyle::AncillaRelphasePartialUncompute:
            options.method = DecompositionMethod::RelphaseMaslov;
            break;
        case OracleStyle::MeasurementAssisted:
            options.method = n >= 3 ? DecompositionMethod::MeasurementAssisted : DecompositionMethod::ExactRecursive;
            break;
    }
    return mcz(qubits, open, options);
}

Fragment relphase_sequence(const Gate &gate) {
    Fragment out;
    if (gate.kind == GateKind::RelPhaseCCX) {
        Qubit a = gate.qubits[0], b = gate.qubits[1], t = gate.qubits[2];
        out = {Gate::h(t),     Gate::rz(t, kPi / 4), Gate::cx(b, t),       Gate::rz(t, -kPi / 4), Gate::cx(a, t),
               Gate::rz(t, kPi / 4), Gate::cx(b, t), Gate::rz(t, -kPi / 4), Gate::h(t)};
    } else if (gate.kind == GateKind::RelPhaseCCCX) {
        Qubit a = gate.qubits[0], b = gate.qubits[1], c = gate.qubits[2], t = gate.qubits[3];
        out = {Gate::h(t),           Gate::rz(t, kPi / 4), Gate::cx(c, t),       Gate::rz(t, -kPi / 4),
               Gate::h(t),           Gate::cx(a, t),       Gate::rz(t, kPi / 4), Gate::cx(b, t),
               Gate::rz(t, -kPi / 4), Gate::cx(a, t),      Gate::rz(t, kPi / 4), Gate::cx(b, t),
               Gate::rz(t, -kPi / 4), Gate::h(t),          Gate::rz(t, kPi / 4), Gate::cx(c, t),
               Gate::rz(t, -kPi / 4), Gate::h(t)};
    } else {
        throw Error(ErrorCode::BadArity, "not a relative-phase primitive: " + gate_name(gate));
    }
    if (gate.direction == Direction::Inverse) {
        out = inverse(out);
    }
    return out;
}

Fragment lower_instruction(const Instruction &instruction) {
    const Gate &g = instruction.gate;
    Fragment out;
    switch (g.kind) {
        case GateKind::ControlledZ: {
            out = with_open(g.qubits, g.open, lowered_mcz(g.qubits));
            break;
        }
        case GateKind::ControlledX: {
            std::size_t c = g.qubits.size() - 1;
            Qubit t = g.qubits[c];
            std::span<const Qubit> controls(g.qubits.data(), c);
            Fragment body;
            if (c == 0) {
                body.push_back(Gate::x(t));
            } else if (c == 1) {
                body.push_back(Gate::cx(controls[0], t));
            } else {
                body.push_back(Gate::h(t));
                append(body, lowered_mcz(g.qubits));
                body.push_back(Gate::h(t));
            }
            out = with_open(controls, g.open, body);
            break;
        }
        case GateKind::RelPhaseCCX:
        case GateKind::RelPhaseCCCX:
            out = relphase_sequence(g);
            break;
        default:
            out.push_back(g);
            break;
    }
    if (instruction.condition) {
        out = conditioned(std::move(out), *instruction.condition);
    }
    return out;
}

Circuit lower(const Circuit &circuit) {
    Circuit out(circuit.num_qubits(), circuit.num_clbits());
    for (const auto &instruction : circuit.instructions()) {
        out.append(lower_instruction(instruction));
    }
    out.metadata() = circuit.metadata();
    return out;
}

}  // namespace qsearch::synth
