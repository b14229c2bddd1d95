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

#include "qsearch/circuit.h"

#include <algorithm>
#include <cmath>

#include "qsearch/error.h"

namespace qsearch {

BitPattern BitPattern::parse(std::string_view text) {
    if (text.empty() || text.size() > 63) {
        throw Error(ErrorCode::BadMask, "pattern must have 1..63 bits, got '" + std::string(text) + "'");
    }
    BitPattern p;
    p.width = text.size();
    for (char ch : text) {
        if (ch != '0' && ch != '1') {
            throw Error(ErrorCode::BadMask, "pattern may only contain 0 and 1, got '" + std::string(text) + "'");
        }
        p.value = (p.value << 1) | static_cast<std::uint64_t>(ch == '1');
    }
    return p;
}

std::string BitPattern::str() const {
    std::string s(width, '0');
    for (std::size_t i = 0; i < width; i++) {
        if (bit(i)) {
            s[i] = '1';
        }
    }
    return s;
}

Gate Gate::x(Qubit q) {
    return Gate{.kind = GateKind::PauliX, .qubits = {q}};
}
Gate Gate::z(Qubit q) {
    return Gate{.kind = GateKind::PauliZ, .qubits = {q}};
}
Gate Gate::h(Qubit q) {
    return Gate{.kind = GateKind::Hadamard, .qubits = {q}};
}
Gate Gate::rz(Qubit q, double angle) {
    return Gate{.kind = GateKind::PhaseRz, .qubits = {q}, .angle = angle};
}
Gate Gate::cx(Qubit control, Qubit target) {
    return Gate{.kind = GateKind::ControlledX, .qubits = {control, target}};
}
Gate Gate::cz(Qubit a, Qubit b) {
    return Gate{.kind = GateKind::ControlledZ, .qubits = {a, b}};
}
Gate Gate::mcx(std::vector<Qubit> controls, Qubit target, std::uint64_t open) {
    controls.push_back(target);
    return Gate{.kind = GateKind::ControlledX, .qubits = std::move(controls), .open = open};
}
Gate Gate::mcz(std::vector<Qubit> qubits, std::uint64_t open) {
    return Gate{.kind = GateKind::ControlledZ, .qubits = std::move(qubits), .open = open};
}
Gate Gate::rccx(Qubit c0, Qubit c1, Qubit target, Direction direction) {
    return Gate{.kind = GateKind::RelPhaseCCX, .qubits = {c0, c1, target}, .direction = direction};
}
Gate Gate::rcccx(Qubit c0, Qubit c1, Qubit c2, Qubit target, Direction direction) {
    return Gate{.kind = GateKind::RelPhaseCCCX, .qubits = {c0, c1, c2, target}, .direction = direction};
}
Gate Gate::measure(Qubit q, Clbit c) {
    return Gate{.kind = GateKind::Measure, .qubits = {q}, .clbit = c};
}
Gate Gate::barrier(std::vector<Qubit> qubits) {
    return Gate{.kind = GateKind::Barrier, .qubits = std::move(qubits)};
}

Fragment conditioned(Fragment fragment, Condition condition) {
    for (auto &instruction : fragment) {
        instruction.condition = condition;
    }
    return fragment;
}

namespace {

Gate inverse_gate(const Gate &gate) {
    Gate g = gate;
    switch (gate.kind) {
        case GateKind::PhaseRz:
            g.angle = -gate.angle;
            break;
        case GateKind::RelPhaseCCX:
        case GateKind::RelPhaseCCCX:
            g.direction = gate.direction == Direction::Forward ? Direction::Inverse : Direction::Forward;
            break;
        case GateKind::Measure:
            throw Error(ErrorCode::HasMeasurement, "a measurement has no inverse");
        default:
            break;
    }
    return g;
}

std::vector<std::pair<Qubit, bool>> polarized_set(const Gate &gate) {
    std::vector<std::pair<Qubit, bool>> result;
    for (std::size_t i = 0; i < gate.qubits.size(); i++) {
        result.emplace_back(gate.qubits[i], gate.is_open(i));
    }
    std::sort(result.begin(), result.end());
    return result;
}

bool is_inverse_pair(const Instruction &a, const Instruction &b) {
    if (a.condition != b.condition || a.gate.kind != b.gate.kind) {
        return false;
    }
    const Gate &ga = a.gate;
    const Gate &gb = b.gate;
    switch (ga.kind) {
        case GateKind::PauliX:
        case GateKind::PauliZ:
        case GateKind::Hadamard:
            return ga.qubits == gb.qubits;
        case GateKind::PhaseRz:
            return ga.qubits == gb.qubits && std::abs(ga.angle + gb.angle) < 1e-12;
        case GateKind::ControlledX:
            return ga.qubits == gb.qubits && ga.open == gb.open;
        case GateKind::ControlledZ:
            return polarized_set(ga) == polarized_set(gb);
        case GateKind::RelPhaseCCX:
        case GateKind::RelPhaseCCCX:
            return ga.qubits == gb.qubits && ga.direction != gb.direction;
        case GateKind::Measure:
        case GateKind::Barrier:
            return false;
    }
    return false;
}

bool supports_overlap(const Instruction &a, const Instruction &b) {
    bool a_all = a.gate.kind == GateKind::Barrier && a.gate.qubits.empty();
    bool b_all = b.gate.kind == GateKind::Barrier && b.gate.qubits.empty();
    if (a_all || b_all) {
        return true;
    }
    for (Qubit qa : a.gate.qubits) {
        if (std::find(b.gate.qubits.begin(), b.gate.qubits.end(), qa) != b.gate.qubits.end()) {
            return true;
        }
    }
    std::vector<Clbit> ca;
    std::vector<Clbit> cb;
    if (a.condition) ca.push_back(a.condition->clbit);
    if (a.gate.kind == GateKind::Measure) ca.push_back(a.gate.clbit);
    if (b.condition) cb.push_back(b.condition->clbit);
    if (b.gate.kind == GateKind::Measure) cb.push_back(b.gate.clbit);
    for (Clbit c : ca) {
        if (std::find(cb.begin(), cb.end(), c) != cb.end()) {
            return true;
        }
    }
    return false;
}

std::size_t expected_arity(GateKind kind) {
    switch (kind) {
        case GateKind::PauliX:
        case GateKind::PauliZ:
        case GateKind::Hadamard:
        case GateKind::PhaseRz:
        case GateKind::Measure:
            return 1;
        case GateKind::RelPhaseCCX:
            return 3;
        case GateKind::RelPhaseCCCX:
            return 4;
        default:
            return 0;
    }
}

}  // namespace

Fragment inverse(const Fragment &fragment) {
    Fragment result;
    result.reserve(fragment.size());
    for (auto it = fragment.rbegin(); it != fragment.rend(); ++it) {
        result.emplace_back(inverse_gate(it->gate));
        result.back().condition = it->condition;
    }
    return result;
}

Circuit::Circuit(std::size_t num_qubits, std::size_t num_clbits) : num_qubits_(num_qubits), written_(num_clbits, false) {
}

Qubit Circuit::add_qubit() {
    return static_cast<Qubit>(num_qubits_++);
}

Clbit Circuit::add_clbit() {
    written_.push_back(false);
    return static_cast<Clbit>(written_.size() - 1);
}

void Circuit::validate(const Instruction &instruction, std::size_t index) const {
    const Gate &g = instruction.gate;
    auto where = [&] { return " (instruction " + std::to_string(index) + ", " + gate_name(g) + ")"; };
    std::size_t arity = expected_arity(g.kind);
    if (arity != 0 && g.qubits.size() != arity) {
        throw Error(ErrorCode::BadArity, "expected " + std::to_string(arity) + " qubits" + where());
    }
    if ((g.kind == GateKind::ControlledX || g.kind == GateKind::ControlledZ) && g.qubits.empty()) {
        throw Error(ErrorCode::BadArity, "controlled gate needs at least one qubit" + where());
    }
    if (g.qubits.size() > 64) {
        throw Error(ErrorCode::BadArity, "at most 64 operands per gate" + where());
    }
    for (std::size_t i = 0; i < g.qubits.size(); i++) {
        if (g.qubits[i] >= num_qubits_) {
            throw Error(ErrorCode::IndexOutOfRange, "qubit " + std::to_string(g.qubits[i]) + " outside register of " +
                                                        std::to_string(num_qubits_) + where());
        }
        for (std::size_t j = 0; j < i; j++) {
            if (g.qubits[i] == g.qubits[j]) {
                throw Error(ErrorCode::DuplicateQubit, "qubit " + std::to_string(g.qubits[i]) + " repeated" + where());
            }
        }
    }
    if (instruction.condition) {
        Clbit c = instruction.condition->clbit;
        if (c >= written_.size()) {
            throw Error(ErrorCode::IndexOutOfRange, "classical bit " + std::to_string(c) + " outside register" + where());
        }
        if (!written_[c]) {
            throw Error(ErrorCode::UnwrittenClassicalBit,
                        "condition reads c[" + std::to_string(c) + "] before any measurement writes it" + where());
        }
    }
    if (g.kind == GateKind::Measure) {
        if (g.clbit >= written_.size()) {
            throw Error(ErrorCode::IndexOutOfRange,
                        "classical bit " + std::to_string(g.clbit) + " outside register" + where());
        }
        if (written_[g.clbit]) {
            throw Error(ErrorCode::RewrittenClassicalBit,
                        "c[" + std::to_string(g.clbit) + "] is already written" + where());
        }
    }
}

Circuit &Circuit::append(Instruction instruction) {
    validate(instruction, instructions_.size());
    if (instruction.gate.kind == GateKind::Measure) {
        written_[instruction.gate.clbit] = true;
    }
    instructions_.push_back(std::move(instruction));
    return *this;
}

Circuit &Circuit::append(std::span<const Instruction> fragment) {
    // All-or-nothing: roll back on the first rejected instruction.
    const std::size_t size_before = instructions_.size();
    const std::vector<bool> written_before = written_;
    try {
        for (const auto &instruction : fragment) {
            append(instruction);
        }
    } catch (...) {
        instructions_.resize(size_before);
        written_ = written_before;
        throw;
    }
    return *this;
}

std::string Circuit::meta(const std::string &key, const std::string &fallback) const {
    auto it = metadata_.find(key);
    return it == metadata_.end() ? fallback : it->second;
}

bool Circuit::operator==(const Circuit &other) const {
    return num_qubits_ == other.num_qubits_ && written_.size() == other.written_.size() &&
           instructions_ == other.instructions_ && metadata_ == other.metadata_;
}

GateCensus &GateCensus::operator+=(const GateCensus &other) {
    two_qubit_count += other.two_qubit_count;
    one_qubit_count += other.one_qubit_count;
    measure_count += other.measure_count;
    for (const auto &[k, v] : other.per_kind) {
        per_kind[k] += v;
    }
    return *this;
}

GateCensus operator+(GateCensus a, const GateCensus &b) {
    a += b;
    return a;
}

std::string gate_name(const Gate &gate) {
    switch (gate.kind) {
        case GateKind::PauliX:
            return "x";
        case GateKind::PauliZ:
            return "z";
        case GateKind::Hadamard:
            return "h";
        case GateKind::PhaseRz:
            return "rz";
        case GateKind::ControlledX:
            switch (gate.qubits.size()) {
                case 2:
                    return "cx";
                case 3:
                    return "ccx";
                case 4:
                    return "cccx";
                default:
                    return "mcx";
            }
        case GateKind::ControlledZ:
            return gate.qubits.size() == 2 ? "cz" : "mcz";
        case GateKind::RelPhaseCCX:
            return gate.direction == Direction::Forward ? "rccx" : "rccxdg";
        case GateKind::RelPhaseCCCX:
            return gate.direction == Direction::Forward ? "rcccx" : "rcccxdg";
        case GateKind::Measure:
            return "measure";
        case GateKind::Barrier:
            return "barrier";
    }
    return "?";
}

namespace {

bool instruction_is_lowered(const Instruction &instruction) {
    const Gate &g = instruction.gate;
    switch (g.kind) {
        case GateKind::RelPhaseCCX:
        case GateKind::RelPhaseCCCX:
            return false;
        case GateKind::ControlledX:
        case GateKind::ControlledZ:
            return g.qubits.size() <= 2;
        default:
            return true;
    }
}

}  // namespace

bool is_lowered(const Circuit &circuit) {
    return std::all_of(circuit.instructions().begin(), circuit.instructions().end(), instruction_is_lowered);
}

GateCensus census(const Circuit &circuit) {
    GateCensus result;
    const auto &instructions = circuit.instructions();
    for (std::size_t i = 0; i < instructions.size(); i++) {
        const Gate &g = instructions[i].gate;
        if (!instruction_is_lowered(instructions[i])) {
            throw Error(ErrorCode::NotLowered,
                        "instruction " + std::to_string(i) + " (" + gate_name(g) + " on " +
                            std::to_string(g.qubits.size()) + " qubits) must be lowered before counting");
        }
        std::string name = gate_name(g);
        switch (g.kind) {
            case GateKind::Measure:
                result.measure_count++;
                break;
            case GateKind::Barrier:
                break;
            case GateKind::ControlledX:
            case GateKind::ControlledZ:
                if (g.qubits.size() == 2) {
                    result.two_qubit_count++;
                } else {
                    result.one_qubit_count++;
                    name = g.kind == GateKind::ControlledX ? "x" : "z";
                }
                break;
            default:
                result.one_qubit_count++;
                break;
        }
        result.per_kind[name]++;
    }
    return result;
}

Circuit peephole_cancel(const Circuit &circuit) {
    std::vector<Instruction> current = circuit.instructions();
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<Instruction> out;
        out.reserve(current.size());
        for (auto &instruction : current) {
            bool cancelled = false;
            for (std::size_t j = out.size(); j-- > 0;) {
                if (!supports_overlap(out[j], instruction)) {
                    continue;
                }
                if (is_inverse_pair(out[j], instruction)) {
                    out.erase(out.begin() + static_cast<std::ptrdiff_t>(j));
                    cancelled = true;
                }
                break;
            }
            if (cancelled) {
                changed = true;
            } else {
                out.push_back(std::move(instruction));
            }
        }
        current = std::move(out);
    }
    Circuit result(circuit.num_qubits(), circuit.num_clbits());
    result.metadata() = circuit.metadata();
    result.append(current);
    return result;
}

Circuit concatenate(const Circuit &first, const Circuit &second) {
    Circuit result(std::max(first.num_qubits(), second.num_qubits()),
                   std::max(first.num_clbits(), second.num_clbits()));
    result.metadata() = first.metadata();
    result.append(first.instructions());
    result.append(second.instructions());
    return result;
}

}  // namespace qsearch
