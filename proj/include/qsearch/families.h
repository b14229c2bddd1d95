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

#ifndef QSEARCH_FAMILIES_H
#define QSEARCH_FAMILIES_H

#include <string>
#include <string_view>
#include <vector>

#include "qsearch/circuit.h"
#include "qsearch/synth.h"

namespace qsearch::families {

enum class Family { Grover, Wojter, Drzewker, Wielomianer, Partial, WojterAA, PartialDrzewker };
enum class Uncompute { Full, Partial, MeasurementAssisted };

const char *family_name(Family family);
Family parse_family(std::string_view name);
const char *uncompute_name(Uncompute uncompute);
Uncompute parse_uncompute(std::string_view name);

/// Block sizes k1, ..., km of the search register, in qubit order.
struct Partition {
    std::vector<std::size_t> parts;

    static Partition parse(std::string_view text);
    std::size_t n() const;
    std::string str() const;
    bool operator==(const Partition &) const = default;
};

struct FamilyRequest {
    Family family = Family::Grover;
    std::string mask;
    synth::OracleStyle style = synth::OracleStyle::PlainMcz;
    std::size_t iterations = 1;
    Partition partition;
    /// Partial family only. 0 means n.
    std::size_t diffuser_size = 0;
    /// Partial family only. Empty means the first `diffuser_size` wires.
    std::vector<Qubit> diffuser_qubits;
    Uncompute uncompute = Uncompute::Full;
    std::size_t ancillas = 1;
    /// Blocked families: tokens O, D1, D2, DA replacing the default order.
    std::vector<std::string> schedule;
    /// P43: the classically controlled tail runs when the flag bit equals this.
    bool condition_value = false;
};

/// The request with equivalent options folded together: the partial-uncompute
/// oracle style implies Uncompute::Partial, and measured uncompute implies the
/// measurement-assisted style.
FamilyRequest normalized(FamilyRequest request);

/// Default block schedule of a blocked family for two blocks.
std::vector<std::string> default_schedule(Family family);

/// Every builder lays out search qubits 0..n-1 first, then ancillas, and
/// measures q[i] into c[i]; auxiliary classical bits follow the n result bits.
/// Metadata records family, mask, oracle_style, oracle_calls, result_bits and
/// the decomposition used.
Circuit build_grover(const FamilyRequest &request);
Circuit build_partial(const FamilyRequest &request);
Circuit build_wojter(const FamilyRequest &request);
Circuit build_wojter_aa(const FamilyRequest &request);
Circuit build_drzewker(const FamilyRequest &request);
Circuit build_partial_drzewker(const FamilyRequest &request);
Circuit build_wielomianer_p43(const FamilyRequest &request);

/// Dispatches on `request.family`.
Circuit build(const FamilyRequest &request);

}  // namespace qsearch::families

#endif
