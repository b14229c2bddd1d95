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

#ifndef QSEARCH_SYNTH_H
#define QSEARCH_SYNTH_H

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qsearch/circuit.h"

namespace qsearch::synth {

enum class OracleStyle {
    PlainMcz,
    AncillaRelphase,
    AncillaRelphasePartialUncompute,
    MeasurementAssisted,
};

enum class DecompositionMethod {
    ExactRecursive,
    ExactOneAncilla,
    Margolus,
    RelphaseMaslov,
    MeasurementAssisted,
};

const char *style_name(OracleStyle style);
OracleStyle parse_style(std::string_view name);
const char *method_name(DecompositionMethod method);
DecompositionMethod parse_method(std::string_view name);

/// The marked element x0 of a single-solution phase oracle over qubits 0..n-1.
struct OracleSpec {
    BitPattern mask;
    OracleStyle style = OracleStyle::PlainMcz;

    static OracleSpec from(std::string_view mask, OracleStyle style = OracleStyle::PlainMcz);
    std::size_t n() const {
        return mask.width;
    }
};

/// Scratch wires available to a construction. Ancillas must enter in |0>.
struct Resources {
    std::vector<Qubit> ancillas;
    std::vector<Clbit> clbits;
};

struct MczOptions {
    DecompositionMethod method = DecompositionMethod::ExactRecursive;
    Resources resources;
};

/// G_k on `targets`: H X C^{k-1}Z X H. This is -(2|s><s| - I); the -1 is a global phase.
Fragment diffuser(std::span<const Qubit> targets, const MczOptions &options = {});

/// C^{k-1}Z over `qubits` (bit i of `open` makes qubits[i] an open control).
///
/// ExactRecursive and k <= 3 emit one ControlledZ primitive (MeasurementAssisted
/// still measures at k = 3). The ancilla-based
/// methods compute AND values into ancillas along a left-deep tree chosen to
/// minimize lowered two-qubit gates, apply an exact ControlledZ on what is left,
/// then uncompute. Ancillas return to |0>; MeasurementAssisted measures one.
Fragment mcz(std::span<const Qubit> qubits, std::uint64_t open, const MczOptions &options);

/// Human-readable description of the tree `mcz` would build for k qubits.
std::string mcz_plan(std::size_t k, const MczOptions &options);

/// Lowered two-qubit count of the construction `mcz` would build, without building it.
std::size_t mcz_cost(std::size_t k, const MczOptions &options);

/// Relative-phase AND of `controls` into `target` (the compute half of a pair).
/// Margolus accepts 2 controls; RelphaseMaslov accepts 2 or 3.
Fragment compute_and_relphase(DecompositionMethod method, std::span<const Qubit> controls, Qubit target);

/// AND of `controls` into a target known to be |0>, with no residual phase.
Fragment and_compute(std::span<const Qubit> controls, Qubit target);

Fragment relphase_ccx(Qubit c0, Qubit c1, Qubit target, Direction direction = Direction::Forward);
Fragment relphase_cccx(Qubit c0, Qubit c1, Qubit c2, Qubit target, Direction direction = Direction::Forward);

/// Clears `ancilla` (holding AND(controls)) by an X-basis measurement into
/// `clbit` and a classically controlled phase fix on the controls. The ancilla
/// is reset to |0> by a conditioned X.
Fragment measurement_assisted_uncompute(Qubit ancilla, std::span<const Qubit> controls, std::uint64_t open,
                                        Clbit clbit);

/// Phase oracle on qubits 0..n-1. Ancilla styles need `resources.ancillas`
/// when n >= 4 (n >= 3 for MeasurementAssisted, which also needs a clbit).
Fragment oracle(const OracleSpec &spec, const Resources &resources = {});

/// Ancilla and clbit counts an oracle of this style needs.
std::size_t oracle_ancillas(std::size_t n, OracleStyle style);
std::size_t oracle_clbits(std::size_t n, OracleStyle style);

/// Expands polarities, multi-qubit gates and relative-phase primitives into
/// X, Z, H, Rz, CX, CZ. Conditions carry over to every emitted instruction.
Fragment lower_instruction(const Instruction &instruction);
Circuit lower(const Circuit &circuit);

/// The fixed 1- and 2-qubit sequence a relative-phase primitive lowers to.
Fragment relphase_sequence(const Gate &gate);

}  // namespace qsearch::synth

#endif
