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

#include "qlstm/circuit_text.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>
#include <string>
#include <vector>

#include "qlstm/error.hpp"

namespace qlstm::sim {

namespace {

struct Line {
    std::size_t number;
    std::string mnemonic;
    std::vector<std::string> args;
};

double parse_angle(const std::string &tok, std::size_t line) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    detail::require(ec == std::errc{} && ptr == tok.data() + tok.size(),
                    "line " + std::to_string(line) + ": bad angle '" + tok + "'");
    return v;
}

int parse_qubit(const std::string &tok, std::size_t line) {
    int v = -1;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    detail::require(ec == std::errc{} && ptr == tok.data() + tok.size() && v >= 0,
                    "line " + std::to_string(line) + ": bad qubit index '" + tok + "'");
    return v;
}

} // namespace

Circuit parse_circuit(std::string_view text, std::optional<int> n_qubits) {
    std::vector<Line> lines;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t number = 0;
    while (std::getline(in, raw)) {
        ++number;
        if (auto hash = raw.find('#'); hash != std::string::npos) {
            raw.erase(hash);
        }
        std::istringstream words(raw);
        Line l{number, {}, {}};
        if (!(words >> l.mnemonic)) {
            continue;
        }
        std::transform(l.mnemonic.begin(), l.mnemonic.end(), l.mnemonic.begin(),
                       [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
        for (std::string w; words >> w;) {
            l.args.push_back(w);
        }
        lines.push_back(std::move(l));
    }

    auto is_rotation = [](const std::string &m) { return m == "RX" || m == "RY" || m == "RZ"; };

    int width = 0;
    for (const auto &l : lines) {
        const std::size_t first = is_rotation(l.mnemonic) ? 1 : 0;
        for (std::size_t i = first; i < l.args.size(); ++i) {
            width = std::max(width, parse_qubit(l.args[i], l.number) + 1);
        }
    }
    if (n_qubits) {
        detail::require(*n_qubits >= width, "circuit uses qubits beyond the declared width");
        width = *n_qubits;
    }
    detail::require(width >= 1, "circuit text contains no operations");

    Circuit circuit(width);
    for (const auto &l : lines) {
        const auto &m = l.mnemonic;
        auto expect = [&](std::size_t count) {
            detail::require(l.args.size() == count, "line " + std::to_string(l.number) + ": " + m +
                                                        " expects " + std::to_string(count) +
                                                        " arguments");
        };
        auto q = [&](std::size_t i) { return parse_qubit(l.args[i], l.number); };

        if (m == "H" || m == "X" || m == "Z" || m == "S" || m == "T") {
            expect(1);
            const GateKind kind = m == "H"   ? GateKind::H
                                  : m == "X" ? GateKind::X
                                  : m == "Z" ? GateKind::Z
                                  : m == "S" ? GateKind::S
                                             : GateKind::T;
            circuit.gate(standard_gate(kind), q(0));
        } else if (is_rotation(m)) {
            expect(2);
            const GateKind kind = m == "RX" ? GateKind::Rx : m == "RY" ? GateKind::Ry : GateKind::Rz;
            circuit.gate(standard_gate(kind, parse_angle(l.args[0], l.number)), q(1));
        } else if (m == "CNOT" || m == "CX") {
            expect(2);
            circuit.cnot(q(0), q(1));
        } else if (m == "CZ") {
            expect(2);
            circuit.gate(standard_gate(GateKind::Z), q(1), {q(0)});
        } else if (m == "TOFFOLI" || m == "CCX") {
            expect(3);
            circuit.gate(standard_gate(GateKind::X), q(2), {q(0), q(1)});
        } else if (m == "SWAP") {
            expect(2);
            circuit.add(SwapOp{q(0), q(1), {}});
        } else if (m == "CSWAP") {
            expect(3);
            circuit.add(SwapOp{q(1), q(2), {q(0)}});
        } else if (m == "QFT" || m == "IQFT") {
            detail::require(!l.args.empty(), "line " + std::to_string(l.number) +
                                                 ": QFT needs at least one qubit");
            std::vector<int> reg;
            for (std::size_t i = 0; i < l.args.size(); ++i) {
                reg.push_back(q(i));
            }
            circuit.add(QftOp{std::move(reg), m == "IQFT"});
        } else {
            detail::fail("line " + std::to_string(l.number) + ": unknown gate '" + m + "'");
        }
    }
    return circuit;
}

} // namespace qlstm::sim
