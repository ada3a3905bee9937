// Copyright 2026 The qlstm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <optional>
#include <string_view>

#include "qlstm/statevector.hpp"

namespace qlstm::sim {

/// Parses the line-oriented circuit fixture format:
///
///     # comment
///     H 0
///     RZ 1.5707963 2
///     CNOT 1 0
///     CSWAP 2 1 0
///     QFT 0 1 2
///
/// Recognized mnemonics: H X Z S T, RX RY RZ (angle first), CNOT/CX, CZ,
/// TOFFOLI/CCX, SWAP, CSWAP, QFT, IQFT. For controlled gates the controls
/// come first and the target last. When `n_qubits` is absent the register
/// width is one past the largest index used.
[[nodiscard]] Circuit parse_circuit(std::string_view text,
                                    std::optional<int> n_qubits = std::nullopt);

} // namespace qlstm::sim
