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

#include "qsearch/qasm.h"

#include <algorithm>

#include <cctype>
#include <charconv>
#include <cstdio>
#include <sstream>

#include "qsearch/error.h"

namespace qsearch {

namespace {

std::string format_angle(double angle) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", angle);
    return buf;
}

std::string operand(const Gate &gate, std::size_t i) {
    std::string s = gate.is_open(i) ? "!" : "";
    return s + "q[" + std::to_string(gate.qubits[i]) + "]";
}

std::string render_gate(const Gate &g) {
    std::string head;
    switch (g.kind) {
        case GateKind::Measure:
            return "measure q[" + std::to_string(g.qubits[0]) + "] -> c[" + std::to_string(g.clbit) + "]";
        case GateKind::Barrier: {
            if (g.qubits.empty()) {
                return "barrier q";
            }
            head = "barrier";
            break;
        }
        case GateKind::PhaseRz:
            head = "rz(" + format_angle(g.angle) + ")";
            break;
        case GateKind::ControlledX:
            head = g.qubits.size() >= 2 && g.qubits.size() <= 4 ? gate_name(g) : "mcx(" + std::to_string(g.qubits.size()) + ")";
            break;
        case GateKind::ControlledZ:
            head = g.qubits.size() == 2 ? "cz" : "mcz(" + std::to_string(g.qubits.size()) + ")";
            break;
        default:
            head = gate_name(g);
            break;
    }
    std::string s = head + " ";
    for (std::size_t i = 0; i < g.qubits.size(); i++) {
        if (i) s += ",";
        s += operand(g, i);
    }
    return s;
}

class LineCursor {
   public:
    LineCursor(std::string_view text, std::size_t line) : text_(text), line_(line) {
    }

    [[noreturn]] void fail(const std::string &message) const {
        fail_at(pos_, message);
    }
    [[noreturn]] void fail_at(std::size_t pos, const std::string &message) const {
        throw ParseError(line_, pos + 1, message);
    }
    std::size_t position() {
        skip_space();
        return pos_;
    }
    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) pos_++;
    }
    bool at_end() {
        skip_space();
        return pos_ >= text_.size();
    }
    bool peek(char c) {
        skip_space();
        return pos_ < text_.size() && text_[pos_] == c;
    }
    bool accept(char c) {
        if (peek(c)) {
            pos_++;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) {
            fail(std::string("expected '") + c + "'");
        }
    }
    void expect(std::string_view word) {
        skip_space();
        if (text_.substr(pos_, word.size()) != word) {
            fail("expected '" + std::string(word) + "'");
        }
        pos_ += word.size();
    }
    std::string identifier() {
        skip_space();
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            pos_++;
        }
        if (start == pos_) {
            fail("expected an identifier");
        }
        return std::string(text_.substr(start, pos_ - start));
    }
    std::uint64_t integer() {
        skip_space();
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), v);
        if (ec != std::errc() || ptr == text_.data() + pos_) {
            fail("expected an integer");
        }
        pos_ = static_cast<std::size_t>(ptr - text_.data());
        return v;
    }
    double real() {
        skip_space();
        std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' ||
                                       text_[pos_] == 'e' || text_[pos_] == 'E' || text_[pos_] == '-' ||
                                       text_[pos_] == '+')) {
            pos_++;
        }
        std::string token(text_.substr(start, pos_ - start));
        try {
            std::size_t used = 0;
            double v = std::stod(token, &used);
            if (used != token.size()) {
                throw std::invalid_argument(token);
            }
            return v;
        } catch (const std::exception &) {
            pos_ = start;
            fail("expected a number");
        }
    }
    std::uint64_t indexed(char reg) {
        skip_space();
        if (pos_ >= text_.size() || text_[pos_] != reg) {
            fail(std::string("expected ") + reg + "[index]");
        }
        pos_++;
        expect('[');
        std::uint64_t v = integer();
        expect(']');
        return v;
    }

   private:
    std::string_view text_;
    std::size_t line_;
    std::size_t pos_ = 0;
};

struct Operands {
    std::vector<Qubit> qubits;
    std::uint64_t open = 0;
};

Operands parse_operands(LineCursor &cur) {
    Operands ops;
    do {
        bool negated = cur.accept('!');
        std::uint64_t q = cur.indexed('q');
        if (negated) {
            if (ops.qubits.size() >= 64) cur.fail("too many operands");
            ops.open |= std::uint64_t{1} << ops.qubits.size();
        }
        ops.qubits.push_back(static_cast<Qubit>(q));
    } while (cur.accept(','));
    return ops;
}

constexpr std::string_view kGateNames[] = {"measure", "barrier", "h",    "x",      "z",     "rz",
                                           "cx",      "ccx",     "cccx", "mcx",    "cz",    "mcz",
                                           "rccx",    "rccxdg",  "rcccx", "rcccxdg"};

Gate parse_gate(LineCursor &cur) {
    const std::size_t name_pos = cur.position();
    std::string name = cur.identifier();
    if (std::find(std::begin(kGateNames), std::end(kGateNames), name) == std::end(kGateNames)) {
        cur.fail_at(name_pos, "unknown gate '" + name + "'");
    }
    if (name == "measure") {
        Qubit q = static_cast<Qubit>(cur.indexed('q'));
        cur.expect("->");
        Clbit c = static_cast<Clbit>(cur.indexed('c'));
        return Gate::measure(q, c);
    }
    if (name == "barrier") {
        cur.skip_space();
        if (cur.peek('q')) {
            // Either the bare register or a list of indexed operands.
            LineCursor probe = cur;
            probe.identifier();
            if (!probe.peek('[')) {
                cur.identifier();
                return Gate::barrier();
            }
        }
        Operands ops = parse_operands(cur);
        if (ops.open) cur.fail("barrier operands cannot be negated");
        return Gate::barrier(std::move(ops.qubits));
    }
    double angle = 0.0;
    std::size_t declared = 0;
    if (name == "rz") {
        cur.expect('(');
        angle = cur.real();
        cur.expect(')');
    } else if (name == "mcx" || name == "mcz") {
        cur.expect('(');
        declared = cur.integer();
        cur.expect(')');
    }
    Operands ops = parse_operands(cur);
    auto require = [&](std::size_t n) {
        if (ops.qubits.size() != n) {
            cur.fail("'" + name + "' takes " + std::to_string(n) + " operands, got " + std::to_string(ops.qubits.size()));
        }
    };
    auto require_positive = [&](std::uint64_t allowed) {
        if (ops.open & ~allowed) cur.fail("'" + name + "' does not accept open controls there");
    };
    Gate g;
    if (name == "h" || name == "x" || name == "z" || name == "rz") {
        require(1);
        require_positive(0);
        g = name == "h" ? Gate::h(ops.qubits[0]) : name == "x" ? Gate::x(ops.qubits[0])
                                             : name == "z" ? Gate::z(ops.qubits[0])
                                                           : Gate::rz(ops.qubits[0], angle);
        return g;
    }
    if (name == "cx" || name == "ccx" || name == "cccx" || name == "mcx") {
        std::size_t n = name == "cx" ? 2 : name == "ccx" ? 3 : name == "cccx" ? 4 : declared;
        require(n);
        if (n == 0) cur.fail("mcx needs at least one operand");
        std::uint64_t control_bits = (std::uint64_t{1} << (n - 1)) - 1;
        require_positive(control_bits);
        return Gate{.kind = GateKind::ControlledX, .qubits = ops.qubits, .open = ops.open};
    }
    if (name == "cz" || name == "mcz") {
        std::size_t n = name == "cz" ? 2 : declared;
        require(n);
        if (n == 0) cur.fail("mcz needs at least one operand");
        return Gate{.kind = GateKind::ControlledZ, .qubits = ops.qubits, .open = ops.open};
    }
    if (name == "rccx" || name == "rccxdg") {
        require(3);
        require_positive(0);
        return Gate::rccx(ops.qubits[0], ops.qubits[1], ops.qubits[2],
                          name == "rccx" ? Direction::Forward : Direction::Inverse);
    }
    if (name == "rcccx" || name == "rcccxdg") {
        require(4);
        require_positive(0);
        return Gate::rcccx(ops.qubits[0], ops.qubits[1], ops.qubits[2], ops.qubits[3],
                           name == "rcccx" ? Direction::Forward : Direction::Inverse);
    }
    cur.fail("unknown gate '" + name + "'");
}

}  // namespace

std::string serialize(const Circuit &circuit) {
    std::ostringstream out;
    out << "# qsearch circuit\n";
    for (const auto &[key, value] : circuit.metadata()) {
        out << "#@ " << key << "=" << value << "\n";
    }
    out << "qreg q[" << circuit.num_qubits() << "];\n";
    out << "creg c[" << circuit.num_clbits() << "];\n";
    for (const auto &instruction : circuit.instructions()) {
        if (instruction.condition) {
            out << "if (c[" << instruction.condition->clbit << "]==" << (instruction.condition->value ? 1 : 0) << ") ";
        }
        out << render_gate(instruction.gate) << ";\n";
    }
    return out.str();
}

Circuit parse(std::string_view text) {
    Circuit circuit;
    std::map<std::string, std::string> metadata;
    bool have_qreg = false;
    bool have_creg = false;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        line_no++;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        std::size_t first = line.find_first_not_of(" \t");
        if (first == std::string_view::npos) continue;
        if (line.substr(first, 2) == "#@") {
            std::string_view body = line.substr(first + 2);
            std::size_t eq = body.find('=');
            if (eq == std::string_view::npos) {
                throw ParseError(line_no, first + 1, "metadata line needs key=value");
            }
            std::string key(body.substr(0, eq));
            std::size_t kb = key.find_first_not_of(' ');
            key = kb == std::string::npos ? "" : key.substr(kb);
            metadata[key] = std::string(body.substr(eq + 1));
            continue;
        }
        if (line[first] == '#' || line.substr(first, 2) == "//") continue;
        std::size_t hash = std::min(line.find('#'), line.find("//"));
        if (hash != std::string_view::npos) line = line.substr(0, hash);

        LineCursor cur(line, line_no);
        // Statements are single-line and `;`-terminated.
        if (line.substr(first, 8) == "OPENQASM" || line.substr(first, 7) == "include") {
            continue;
        }
        if (line.substr(first, 4) == "qreg") {
            cur.expect("qreg");
            std::uint64_t n = cur.indexed('q');
            cur.expect(';');
            if (!cur.at_end()) cur.fail("unexpected text after statement");
            if (have_qreg) cur.fail("duplicate qreg");
            circuit = Circuit(n, circuit.num_clbits());
            have_qreg = true;
            continue;
        }
        if (line.substr(first, 4) == "creg") {
            cur.expect("creg");
            std::uint64_t n = cur.indexed('c');
            cur.expect(';');
            if (!cur.at_end()) cur.fail("unexpected text after statement");
            if (have_creg) cur.fail("duplicate creg");
            if (!circuit.empty()) cur.fail("creg must precede instructions");
            circuit = Circuit(circuit.num_qubits(), n);
            have_creg = true;
            continue;
        }
        if (!have_qreg) cur.fail("instruction before qreg declaration");
        std::optional<Condition> condition;
        if (line.substr(first, 2) == "if") {
            cur.expect("if");
            cur.expect('(');
            Clbit c = static_cast<Clbit>(cur.indexed('c'));
            cur.expect("==");
            std::uint64_t v = cur.integer();
            if (v > 1) cur.fail("condition value must be 0 or 1");
            cur.expect(')');
            condition = Condition{c, v == 1};
        }
        Gate gate = parse_gate(cur);
        cur.expect(';');
        if (!cur.at_end()) cur.fail("unexpected text after statement");
        Instruction instruction(std::move(gate));
        instruction.condition = condition;
        try {
            circuit.append(std::move(instruction));
        } catch (const ParseError &) {
            throw;
        } catch (const Error &e) {
            throw ParseError(line_no, first + 1, e.what());
        }
    }
    if (!have_qreg) {
        throw ParseError(line_no, 1, "missing qreg declaration");
    }
    circuit.metadata() = std::move(metadata);
    return circuit;
}

}  // namespace qsearch
