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

#ifndef QSEARCH_CIRCUIT_H
#define QSEARCH_CIRCUIT_H

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qsearch {

using Qubit = std::uint32_t;
using Clbit = std::uint32_t;

/// A computational-basis pattern over `width` bits. Character 0 of the string
/// form is qubit 0 and is the most significant bit of `value`.
struct BitPattern {
    std::uint64_t value = 0;
    std::size_t width = 0;

    static BitPattern parse(std::string_view text);
    std::string str() const;
    bool bit(std::size_t position) const {
        return (value >> (width - 1 - position)) & 1;
    }
    bool operator==(const BitPattern &) const = default;
};

enum class GateKind : std::uint8_t {
    PauliX,
    PauliZ,
    Hadamard,
    PhaseRz,
    ControlledX,
    ControlledZ,
    RelPhaseCCX,
    RelPhaseCCCX,
    Measure,
    Barrier,
};

enum class Direction : std::uint8_t { Forward, Inverse };

/// One gate application.
///
/// Operand layout by kind:
///   ControlledX    controls..., target (zero controls is a plain X)
///   ControlledZ    all qubits, treated symmetrically
///   RelPhaseCCX    c0, c1, target
///   RelPhaseCCCX   c0, c1, c2, target
///   Measure        the measured qubit; the destination is `clbit`
///   Barrier        the fenced qubits; empty fences the whole register
///
/// Bit i of `open` marks qubits[i] as an open control (satisfied by |0>). Only
/// ControlledX (controls) and ControlledZ use it.
struct Gate {
    GateKind kind = GateKind::Barrier;
    std::vector<Qubit> qubits;
    std::uint64_t open = 0;
    double angle = 0.0;
    Direction direction = Direction::Forward;
    Clbit clbit = 0;

    static Gate x(Qubit q);
    static Gate z(Qubit q);
    static Gate h(Qubit q);
    static Gate rz(Qubit q, double angle);
    static Gate cx(Qubit control, Qubit target);
    static Gate cz(Qubit a, Qubit b);
    static Gate mcx(std::vector<Qubit> controls, Qubit target, std::uint64_t open = 0);
    static Gate mcz(std::vector<Qubit> qubits, std::uint64_t open = 0);
    static Gate rccx(Qubit c0, Qubit c1, Qubit target, Direction direction = Direction::Forward);
    static Gate rcccx(Qubit c0, Qubit c1, Qubit c2, Qubit target, Direction direction = Direction::Forward);
    static Gate measure(Qubit q, Clbit c);
    static Gate barrier(std::vector<Qubit> qubits = {});

    bool is_open(std::size_t operand) const {
        return (open >> operand) & 1;
    }
    bool operator==(const Gate &) const = default;
};

/// Classical guard: the instruction fires only when clbit == value.
struct Condition {
    Clbit clbit = 0;
    bool value = true;
    bool operator==(const Condition &) const = default;
};

struct Instruction {
    Gate gate;
    std::optional<Condition> condition;

    Instruction() = default;
    Instruction(Gate g) : gate(std::move(g)) {
    }
    Instruction(Gate g, Condition c) : gate(std::move(g)), condition(c) {
    }
    bool operator==(const Instruction &) const = default;
};

/// An ordered instruction list without its own register declaration.
using Fragment = std::vector<Instruction>;

/// Conditions every instruction of `fragment` on `condition`.
Fragment conditioned(Fragment fragment, Condition condition);

/// The inverse of a measurement-free fragment, instruction by instruction.
Fragment inverse(const Fragment &fragment);

/// An ordered gate program over qubits and write-once classical bits.
/// Append validates operands; the instruction list is never left inconsistent.
class Circuit {
   public:
    Circuit() = default;
    explicit Circuit(std::size_t num_qubits, std::size_t num_clbits = 0);

    std::size_t num_qubits() const {
        return num_qubits_;
    }
    std::size_t num_clbits() const {
        return written_.size();
    }
    Qubit add_qubit();
    Clbit add_clbit();

    const std::vector<Instruction> &instructions() const {
        return instructions_;
    }
    std::size_t size() const {
        return instructions_.size();
    }
    bool empty() const {
        return instructions_.empty();
    }

    Circuit &append(Instruction instruction);
    Circuit &append(std::span<const Instruction> fragment);
    Circuit &append(std::initializer_list<Instruction> fragment) {
        return append(std::span<const Instruction>(fragment.begin(), fragment.size()));
    }

    bool clbit_written(Clbit c) const {
        return c < written_.size() && written_[c];
    }

    std::map<std::string, std::string> &metadata() {
        return metadata_;
    }
    const std::map<std::string, std::string> &metadata() const {
        return metadata_;
    }
    std::string meta(const std::string &key, const std::string &fallback = "") const;

    bool operator==(const Circuit &other) const;

   private:
    void validate(const Instruction &instruction, std::size_t index) const;

    std::size_t num_qubits_ = 0;
    std::vector<Instruction> instructions_;
    std::vector<bool> written_;
    std::map<std::string, std::string> metadata_;
};

/// Two-qubit gate accounting over a fully lowered circuit.
struct GateCensus {
    std::uint64_t two_qubit_count = 0;
    std::uint64_t one_qubit_count = 0;
    std::uint64_t measure_count = 0;
    std::map<std::string, std::uint64_t> per_kind;

    GateCensus &operator+=(const GateCensus &other);
    bool operator==(const GateCensus &) const = default;
};
GateCensus operator+(GateCensus a, const GateCensus &b);

/// True when no gate touches three or more qubits and no relative-phase primitive remains.
bool is_lowered(const Circuit &circuit);

/// Counts gates by class. Throws NotLowered naming the first offending instruction.
GateCensus census(const Circuit &circuit);

/// Removes inverse pairs G, G^-1 that act on identical operands under identical
/// conditions and are separated only by instructions with disjoint support
/// (qubits and classical bits). Repeats until no pair remains.
Circuit peephole_cancel(const Circuit &circuit);

/// `first` followed by `second` (widths are the maximum of both).
Circuit concatenate(const Circuit &first, const Circuit &second);

/// Short lowercase name of a gate, as used in the census and text format.
std::string gate_name(const Gate &gate);

}  // namespace qsearch

#endif
