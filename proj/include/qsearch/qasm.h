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

#ifndef QSEARCH_QASM_H
#define QSEARCH_QASM_H

#include <string>
#include <string_view>

#include "qsearch/circuit.h"

namespace qsearch {

/// Writes the QASM-2-flavored text form. Metadata entries become `#@ key=value` lines.
///
/// Gate spellings: h x z rz(theta) cx cz ccx cccx mcx(k) mcz(k) rccx rccxdg
/// rcccx rcccxdg, `measure q[i] -> c[j];`, `barrier q;`, and the
/// `if (c[j]==v) <gate>;` prefix. An operand written `!q[i]` is an open control.
std::string serialize(const Circuit &circuit);

/// Inverse of serialize. Throws ParseError carrying the 1-based line and column.
Circuit parse(std::string_view text);

}  // namespace qsearch

#endif
