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

#include "qsearch/sim.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "qsearch/error.h"

namespace qsearch::sim {

namespace {

constexpr double kBranchFloor = 1e-14;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

double uniform(std::mt19937_64 &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct Controls {
    std::uint64_t mask = 0;
    std::uint64_t value = 0;
};

Controls controls_of(const StateVector &s, const Gate &g, std::size_t count) {
    Controls c;
    for (std::size_t i = 0; i < count; i++) {
        std::uint64_t b = s.bit(g.qubits[i]);
        c.mask |= b;
        if (!g.is_open(i)) c.value |= b;
    }
    return c;
}

// First index of the trailing block of unconditioned measurements and barriers.
std::size_t tail_start(const Circuit &circuit) {
    const auto &ins = circuit.instructions();
    std::size_t t = ins.size();
    while (t > 0) {
        const Instruction &i = ins[t - 1];
        bool passive = i.gate.kind == GateKind::Measure || i.gate.kind == GateKind::Barrier;
        if (!passive || i.condition) break;
        t--;
    }
    return t;
}

bool fires(const Instruction &instruction, const std::vector<std::int8_t> &record) {
    if (!instruction.condition) return true;
    return record[instruction.condition->clbit] == (instruction.condition->value ? 1 : 0);
}

std::uint64_t outcome_of(const std::vector<std::int8_t> &record, std::size_t width) {
    std::uint64_t v = 0;
    for (std::size_t c = 0; c < width; c++) {
        v = (v << 1) | (record[c] == 1 ? 1 : 0);
    }
    return v;
}

void check_width(const Circuit &circuit) {
    if (circuit.num_qubits() > kMaxSimWidth) {
        throw Error(ErrorCode::TooWide, "simulation width " + std::to_string(circuit.num_qubits()) + " exceeds " +
                                            std::to_string(kMaxSimWidth));
    }
}

bool has_measurement(const Circuit &circuit) {
    for (const auto &i : circuit.instructions()) {
        if (i.gate.kind == GateKind::Measure) return true;
    }
    return false;
}

std::vector<Branch> branch_range(const Circuit &circuit, std::size_t end, Branch start) {
    const auto &ins = circuit.instructions();
    std::vector<Branch> done;
    struct Frame {
        Branch branch;
        std::size_t pc;
    };
    std::vector<Frame> stack;
    stack.push_back({std::move(start), 0});
    while (!stack.empty()) {
        Frame f = std::move(stack.back());
        stack.pop_back();
        bool split = false;
        for (; f.pc < end; f.pc++) {
            const Instruction &i = ins[f.pc];
            if (!fires(i, f.branch.record)) continue;
            if (i.gate.kind == GateKind::Barrier) continue;
            if (i.gate.kind != GateKind::Measure) {
                f.branch.state.apply(i.gate);
                continue;
            }
            Qubit q = i.gate.qubits[0];
            double p1 = f.branch.state.probability_one(q);
            for (int outcome = 1; outcome >= 0; outcome--) {
                double p = outcome ? p1 : 1.0 - p1;
                if (p * f.branch.weight < kBranchFloor) continue;
                Frame child{f.branch, f.pc + 1};
                child.branch.state.collapse(q, outcome == 1);
                child.branch.weight *= p;
                child.branch.record[i.gate.clbit] = static_cast<std::int8_t>(outcome);
                stack.push_back(std::move(child));
            }
            split = true;
            break;
        }
        if (!split) done.push_back(std::move(f.branch));
    }
    return done;
}

}  // namespace

StateVector::StateVector(std::size_t num_qubits) : n_(num_qubits), amps_(std::size_t{1} << num_qubits) {
    amps_[0] = 1.0;
}

StateVector StateVector::basis(std::size_t num_qubits, std::uint64_t index) {
    StateVector s(num_qubits);
    s.amps_[0] = 0.0;
    s.amps_.at(index) = 1.0;
    return s;
}

void StateVector::apply(const Gate &g) {
    const std::size_t dim = amps_.size();
    switch (g.kind) {
        case GateKind::PauliX:
            apply_pauli(g.qubits[0], 1);
            return;
        case GateKind::PauliZ:
            apply_pauli(g.qubits[0], 3);
            return;
        case GateKind::Hadamard: {
            const double r = 1.0 / std::sqrt(2.0);
            std::uint64_t b = bit(g.qubits[0]);
            for (std::size_t i = 0; i < dim; i++) {
                if (i & b) continue;
                Complex a0 = amps_[i], a1 = amps_[i | b];
                amps_[i] = (a0 + a1) * r;
                amps_[i | b] = (a0 - a1) * r;
            }
            return;
        }
        case GateKind::PhaseRz: {
            std::uint64_t b = bit(g.qubits[0]);
            Complex lo = std::polar(1.0, -g.angle / 2), hi = std::polar(1.0, g.angle / 2);
            for (std::size_t i = 0; i < dim; i++) amps_[i] *= (i & b) ? hi : lo;
            return;
        }
        case GateKind::ControlledX: {
            std::size_t nc = g.qubits.size() - 1;
            Controls c = controls_of(*this, g, nc);
            std::uint64_t t = bit(g.qubits[nc]);
            for (std::size_t i = 0; i < dim; i++) {
                if ((i & t) || (i & c.mask) != c.value) continue;
                std::swap(amps_[i], amps_[i | t]);
            }
            return;
        }
        case GateKind::ControlledZ: {
            Controls c = controls_of(*this, g, g.qubits.size());
            for (std::size_t i = 0; i < dim; i++) {
                if ((i & c.mask) == c.value) amps_[i] = -amps_[i];
            }
            return;
        }
        case GateKind::Barrier:
            return;
        case GateKind::RelPhaseCCX:
        case GateKind::RelPhaseCCCX:
            throw Error(ErrorCode::UndefinedGateSemantics,
                        "relative-phase primitive '" + gate_name(g) + "' has no simulator matrix; lower it first");
        case GateKind::Measure:
            throw Error(ErrorCode::UndefinedGateSemantics, "measure is not a unitary gate");
    }
}

void StateVector::apply_pauli(Qubit q, int pauli) {
    std::uint64_t b = bit(q);
    const std::size_t dim = amps_.size();
    const Complex i_unit(0.0, 1.0);
    for (std::size_t i = 0; i < dim; i++) {
        if (i & b) continue;
        Complex &a0 = amps_[i];
        Complex &a1 = amps_[i | b];
        switch (pauli) {
            case 1:
                std::swap(a0, a1);
                break;
            case 2: {
                Complex t0 = a0;
                a0 = -i_unit * a1;
                a1 = i_unit * t0;
                break;
            }
            case 3:
                a1 = -a1;
                break;
            default:
                break;
        }
    }
}

double StateVector::probability_one(Qubit q) const {
    std::uint64_t b = bit(q);
    double p = 0.0;
    for (std::size_t i = 0; i < amps_.size(); i++) {
        if (i & b) p += std::norm(amps_[i]);
    }
    return p;
}

double StateVector::collapse(Qubit q, bool value) {
    std::uint64_t b = bit(q);
    double p = 0.0;
    for (std::size_t i = 0; i < amps_.size(); i++) {
        if (((i & b) != 0) == value) {
            p += std::norm(amps_[i]);
        } else {
            amps_[i] = 0.0;
        }
    }
    if (p > 0.0) {
        double scale = 1.0 / std::sqrt(p);
        for (auto &a : amps_) a *= scale;
    }
    return p;
}

double StateVector::norm_squared() const {
    double s = 0.0;
    for (const auto &a : amps_) s += std::norm(a);
    return s;
}

double Distribution::probability(std::uint64_t outcome) const {
    if (sampled()) {
        return outcome < counts.size() ? static_cast<double>(counts[outcome]) / static_cast<double>(shots) : 0.0;
    }
    return outcome < probabilities.size() ? probabilities[outcome] : 0.0;
}

std::vector<double> Distribution::as_probabilities() const {
    if (!sampled()) return probabilities;
    std::vector<double> p(counts.size());
    for (std::size_t i = 0; i < counts.size(); i++) {
        p[i] = static_cast<double>(counts[i]) / static_cast<double>(shots);
    }
    return p;
}

std::vector<Branch> run_branches(const Circuit &circuit, const StateVector &initial) {
    check_width(circuit);
    if (initial.num_qubits() != circuit.num_qubits()) {
        throw Error(ErrorCode::WidthMismatch, "initial state width differs from circuit width");
    }
    Branch start;
    start.state = initial;
    start.record.assign(circuit.num_clbits(), -1);
    return branch_range(circuit, circuit.size(), std::move(start));
}

std::size_t result_width(const Circuit &circuit) {
    std::string r = circuit.meta("result_bits");
    if (!r.empty()) return std::stoul(r);
    if (!has_measurement(circuit)) return circuit.num_qubits();
    return circuit.num_clbits();
}

Distribution run_exact(const Circuit &circuit) {
    check_width(circuit);
    const std::size_t n = circuit.num_qubits();
    Distribution d;
    d.width = result_width(circuit);
    d.probabilities.assign(std::size_t{1} << d.width, 0.0);

    bool measures = has_measurement(circuit);
    std::size_t tail = measures ? tail_start(circuit) : circuit.size();
    Branch start;
    start.state = StateVector(n);
    start.record.assign(circuit.num_clbits(), -1);
    std::vector<Branch> leaves = branch_range(circuit, tail, std::move(start));

    const auto &ins = circuit.instructions();
    for (const Branch &leaf : leaves) {
        const auto &amps = leaf.state.amplitudes();
        std::vector<std::int8_t> record = leaf.record;
        for (std::size_t idx = 0; idx < amps.size(); idx++) {
            double p = std::norm(amps[idx]) * leaf.weight;
            if (p == 0.0) continue;
            std::uint64_t outcome;
            if (!measures) {
                outcome = idx;
            } else {
                for (std::size_t k = tail; k < ins.size(); k++) {
                    const Gate &g = ins[k].gate;
                    if (g.kind == GateKind::Measure) {
                        record[g.clbit] = (idx & leaf.state.bit(g.qubits[0])) ? 1 : 0;
                    }
                }
                outcome = outcome_of(record, d.width);
            }
            d.probabilities[outcome] += p;
        }
    }
    return d;
}

Eigen::MatrixXcd unitary_of(const Circuit &circuit) {
    if (circuit.num_qubits() > kMaxUnitaryWidth) {
        throw Error(ErrorCode::TooWide, "unitary width " + std::to_string(circuit.num_qubits()) + " exceeds " +
                                            std::to_string(kMaxUnitaryWidth));
    }
    if (has_measurement(circuit)) {
        throw Error(ErrorCode::HasMeasurement, "unitary_of needs a measurement-free circuit");
    }
    const std::size_t dim = std::size_t{1} << circuit.num_qubits();
    Eigen::MatrixXcd u(dim, dim);
    for (std::size_t col = 0; col < dim; col++) {
        StateVector s = StateVector::basis(circuit.num_qubits(), col);
        for (const auto &i : circuit.instructions()) s.apply(i.gate);
        for (std::size_t row = 0; row < dim; row++) u(row, col) = s.amplitudes()[row];
    }
    return u;
}

double operator_distance(const Eigen::MatrixXcd &u, const Eigen::MatrixXcd &v) {
    if (u.rows() != v.rows() || u.cols() != v.cols()) {
        throw Error(ErrorCode::WidthMismatch, "operator shapes differ");
    }
    Complex overlap = (v.adjoint() * u).trace();
    Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex(1.0);
    return (u - phase * v).norm();
}

Eigen::MatrixXcd clean_ancilla_block(const Eigen::MatrixXcd &u, std::size_t ancillas) {
    const Eigen::Index stride = Eigen::Index{1} << ancillas;
    const Eigen::Index dim = u.rows() / stride;
    Eigen::MatrixXcd block(dim, dim);
    for (Eigen::Index r = 0; r < dim; r++) {
        for (Eigen::Index c = 0; c < dim; c++) block(r, c) = u(r * stride, c * stride);
    }
    return block;
}

double total_variation(const Distribution &a, const Distribution &b) {
    if (a.width != b.width) {
        throw Error(ErrorCode::WidthMismatch, "distributions have different widths");
    }
    double s = 0.0;
    const std::size_t dim = std::size_t{1} << a.width;
    for (std::size_t i = 0; i < dim; i++) s += std::abs(a.probability(i) - b.probability(i));
    return s / 2.0;
}

Circuit defer_measurements(const Circuit &circuit) {
    std::size_t tail = tail_start(circuit);
    std::vector<Qubit> copy_of(circuit.num_clbits(), 0);
    std::vector<std::pair<Qubit, Clbit>> deferred;
    std::size_t width = circuit.num_qubits();
    for (std::size_t k = 0; k < tail; k++) {
        if (circuit.instructions()[k].gate.kind == GateKind::Measure) width++;
    }
    Circuit out(width, circuit.num_clbits());
    Qubit next = static_cast<Qubit>(circuit.num_qubits());
    for (std::size_t k = 0; k < circuit.size(); k++) {
        const Instruction &ins = circuit.instructions()[k];
        const Gate &g = ins.gate;
        if (k >= tail) {
            out.append(ins);
            continue;
        }
        if (g.kind == GateKind::Measure) {
            Qubit r = next++;
            copy_of[g.clbit] = r;
            deferred.emplace_back(r, g.clbit);
            out.append(Gate::cx(g.qubits[0], r));
            continue;
        }
        if (!ins.condition) {
            out.append(ins);
            continue;
        }
        Qubit r = copy_of[ins.condition->clbit];
        std::uint64_t polarity = ins.condition->value ? 0 : 1;
        Gate lifted;
        switch (g.kind) {
            case GateKind::PauliX:
                lifted = Gate::mcx({r}, g.qubits[0], polarity);
                break;
            case GateKind::PauliZ:
                lifted = Gate::mcz({r, g.qubits[0]}, polarity);
                break;
            case GateKind::ControlledX: {
                std::vector<Qubit> controls = {r};
                controls.insert(controls.end(), g.qubits.begin(), g.qubits.end() - 1);
                lifted = Gate::mcx(controls, g.qubits.back(), (g.open << 1) | polarity);
                break;
            }
            case GateKind::ControlledZ: {
                std::vector<Qubit> qubits = {r};
                qubits.insert(qubits.end(), g.qubits.begin(), g.qubits.end());
                lifted = Gate::mcz(qubits, (g.open << 1) | polarity);
                break;
            }
            default:
                throw Error(ErrorCode::UndefinedGateSemantics,
                            "cannot defer a classically conditioned '" + gate_name(g) + "'");
        }
        out.append(lifted);
    }
    for (auto [r, c] : deferred) out.append(Gate::measure(r, c));
    out.metadata() = circuit.metadata();
    return out;
}

void NoiseModel::validate() const {
    auto check = [](double p, const char *name) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw ValidationError(name, std::string(name) + " must lie in [0, 1]");
        }
    };
    check(p1, "p1");
    check(p2, "p2");
    check(p_meas, "p_meas");
}

namespace {

class TrajectoryRunner {
   public:
    TrajectoryRunner(const Circuit &circuit, const NoiseModel &noise, std::uint64_t seed)
        : circuit_(circuit), noise_(noise), seed_(seed), width_(result_width(circuit)) {
        check_width(circuit);
        const auto &ins = circuit.instructions();
        bool measures = has_measurement(circuit);
        tail_ = measures ? tail_start(circuit) : ins.size();
        straight_ = true;
        for (std::size_t k = 0; k < tail_; k++) {
            if (ins[k].gate.kind == GateKind::Measure || ins[k].condition) straight_ = false;
        }
        measures_ = measures;
        if (!straight_) return;
        const std::size_t n = circuit.num_qubits();
        StateVector s(n);
        cache_enabled_ = (tail_ + 1) * (std::size_t{1} << n) <= (std::size_t{1} << 22);
        if (cache_enabled_) cache_.push_back(s);
        for (std::size_t k = 0; k < tail_; k++) {
            s.apply(ins[k].gate);
            if (cache_enabled_) cache_.push_back(s);
        }
        ideal_cdf_.resize(s.amplitudes().size());
        double acc = 0.0;
        for (std::size_t i = 0; i < ideal_cdf_.size(); i++) {
            acc += std::norm(s.amplitudes()[i]);
            ideal_cdf_[i] = acc;
        }
    }

    void run(std::uint64_t first, std::uint64_t last, std::vector<std::uint64_t> &counts) const {
        for (std::uint64_t t = first; t < last; t++) {
            std::mt19937_64 rng(splitmix64(seed_ ^ splitmix64(t + 0x5851F42D4C957F2DULL)));
            counts[straight_ ? straight(rng) : branching(rng)]++;
        }
    }

   private:
    struct Event {
        std::size_t index;
        std::uint64_t paulis;
    };

    bool is_noisy_gate(const Gate &g) const {
        return g.kind != GateKind::Barrier && g.kind != GateKind::Measure;
    }

    std::uint64_t draw_pauli(const Gate &g, std::mt19937_64 &rng) const {
        std::uint64_t choices = (std::uint64_t{1} << (2 * g.qubits.size())) - 1;
        return 1 + static_cast<std::uint64_t>(uniform(rng) * static_cast<double>(choices)) % choices;
    }

    bool maybe_error(const Gate &g, std::mt19937_64 &rng, std::uint64_t &paulis) const {
        double p = g.qubits.size() == 1 ? noise_.p1 : noise_.p2;
        if (p <= 0.0) return false;
        if (uniform(rng) >= p) return false;
        paulis = draw_pauli(g, rng);
        return true;
    }

    static void apply_paulis(StateVector &s, const Gate &g, std::uint64_t paulis) {
        for (std::size_t j = 0; j < g.qubits.size(); j++) {
            int p = static_cast<int>((paulis >> (2 * j)) & 3);
            if (p) s.apply_pauli(g.qubits[j], p);
        }
    }

    static std::size_t sample_index(const std::vector<double> &cdf, double u) {
        double total = cdf.back();
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u * total);
        std::size_t idx = static_cast<std::size_t>(it - cdf.begin());
        if (idx >= cdf.size()) idx = cdf.size() - 1;
        while (idx > 0 && cdf[idx] == cdf[idx - 1]) idx--;
        return idx;
    }

    std::uint64_t qubit_bit(Qubit q) const {
        return std::uint64_t{1} << (circuit_.num_qubits() - 1 - q);
    }

    std::uint64_t readout(std::size_t index, std::mt19937_64 &rng) const {
        if (!measures_) {
            std::uint64_t v = index;
            for (std::size_t q = 0; q < width_; q++) {
                if (noise_.p_meas > 0.0 && uniform(rng) < noise_.p_meas) v ^= qubit_bit(static_cast<Qubit>(q));
            }
            return v;
        }
        std::vector<std::int8_t> record(circuit_.num_clbits(), -1);
        const auto &ins = circuit_.instructions();
        for (std::size_t k = tail_; k < ins.size(); k++) {
            const Gate &g = ins[k].gate;
            if (g.kind != GateKind::Measure) continue;
            std::int8_t v = (index & qubit_bit(g.qubits[0])) ? 1 : 0;
            if (noise_.p_meas > 0.0 && uniform(rng) < noise_.p_meas) v ^= 1;
            record[g.clbit] = v;
        }
        return outcome_of(record, width_);
    }

    std::uint64_t straight(std::mt19937_64 &rng) const {
        const auto &ins = circuit_.instructions();
        std::vector<Event> events;
        for (std::size_t k = 0; k < tail_; k++) {
            std::uint64_t paulis = 0;
            if (is_noisy_gate(ins[k].gate) && maybe_error(ins[k].gate, rng, paulis)) events.push_back({k, paulis});
        }
        if (events.empty()) {
            return readout(sample_index(ideal_cdf_, uniform(rng)), rng);
        }
        std::size_t start = events.front().index;
        StateVector s = cache_enabled_ ? cache_[start] : StateVector(circuit_.num_qubits());
        if (!cache_enabled_) {
            for (std::size_t k = 0; k < start; k++) s.apply(ins[k].gate);
        }
        std::size_t e = 0;
        for (std::size_t k = start; k < tail_; k++) {
            s.apply(ins[k].gate);
            if (e < events.size() && events[e].index == k) {
                apply_paulis(s, ins[k].gate, events[e].paulis);
                e++;
            }
        }
        std::vector<double> cdf(s.amplitudes().size());
        double acc = 0.0;
        for (std::size_t i = 0; i < cdf.size(); i++) {
            acc += std::norm(s.amplitudes()[i]);
            cdf[i] = acc;
        }
        return readout(sample_index(cdf, uniform(rng)), rng);
    }

    std::uint64_t branching(std::mt19937_64 &rng) const {
        const auto &ins = circuit_.instructions();
        StateVector s(circuit_.num_qubits());
        std::vector<std::int8_t> record(circuit_.num_clbits(), -1);
        for (const auto &i : ins) {
            if (!fires(i, record)) continue;
            const Gate &g = i.gate;
            if (g.kind == GateKind::Barrier) continue;
            if (g.kind == GateKind::Measure) {
                double p1 = s.probability_one(g.qubits[0]);
                bool one = uniform(rng) < p1;
                s.collapse(g.qubits[0], one);
                std::int8_t v = one ? 1 : 0;
                if (noise_.p_meas > 0.0 && uniform(rng) < noise_.p_meas) v ^= 1;
                record[g.clbit] = v;
                continue;
            }
            s.apply(g);
            std::uint64_t paulis = 0;
            if (maybe_error(g, rng, paulis)) apply_paulis(s, g, paulis);
        }
        return outcome_of(record, width_);
    }

    const Circuit &circuit_;
    NoiseModel noise_;
    std::uint64_t seed_;
    std::size_t width_;
    std::size_t tail_ = 0;
    bool straight_ = true;
    bool measures_ = false;
    bool cache_enabled_ = false;
    std::vector<StateVector> cache_;
    std::vector<double> ideal_cdf_;
};

}  // namespace

Distribution run_noisy(const Circuit &circuit, const NoiseModel &noise, std::uint64_t shots, std::uint64_t seed,
                       unsigned threads) {
    noise.validate();
    if (shots == 0) {
        throw ValidationError("shots", "noisy simulation needs at least one shot");
    }
    TrajectoryRunner runner(circuit, noise, seed);
    Distribution d;
    d.width = result_width(circuit);
    d.shots = shots;
    d.counts.assign(std::size_t{1} << d.width, 0);
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::uint64_t>(shots, 64))));
    if (threads == 1) {
        runner.run(0, shots, d.counts);
        return d;
    }
    std::vector<std::vector<std::uint64_t>> partial(threads, std::vector<std::uint64_t>(d.counts.size(), 0));
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; w++) {
        std::uint64_t first = shots * w / threads;
        std::uint64_t last = shots * (w + 1) / threads;
        pool.emplace_back([&, w, first, last] { runner.run(first, last, partial[w]); });
    }
    for (auto &t : pool) t.join();
    for (const auto &p : partial) {
        for (std::size_t i = 0; i < p.size(); i++) d.counts[i] += p[i];
    }
    return d;
}

}  // namespace qsearch::sim
