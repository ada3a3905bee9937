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

#include <fstream>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "qlstm/circuit_text.hpp"
#include "qlstm/error.hpp"

using namespace qlstm;
using namespace qlstm::sim;

namespace {

std::string fixture(const std::string &name) {
    std::ifstream in(std::string(QLSTM_FIXTURE_DIR) + "/" + name);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<Complex> conjugated(std::vector<Complex> v) {
    for (auto &z : v) {
        z = std::conj(z);
    }
    return v;
}

} // namespace

TEST_CASE("Bell fixture") {
    const auto c = parse_circuit(fixture("bell.circuit"));
    CHECK(c.n_qubits() == 2);
    CHECK(c.size() == 2);
    const auto p = probabilities(run_circuit(c));
    CHECK(p[0] == doctest::Approx(0.5));
    CHECK(p[3] == doctest::Approx(0.5));
}

TEST_CASE("every mnemonic matches the dense oracle") {
    const auto c = parse_circuit(fixture("mixed.circuit"));
    REQUIRE(c.n_qubits() == 3);

    using namespace oracle;
    std::vector<Complex> v(8);
    v[0] = 1.0;
    auto on = [&](const Matrix &m) { v = oracle::apply(m, v); };
    on(controlled(3, 0, {}, H()));
    on(controlled(3, 1, {}, X()));
    on(controlled(3, 2, {}, Z()));
    on(controlled(3, 0, {}, S()));
    on(controlled(3, 1, {}, T()));
    on(controlled(3, 2, {}, Rx(0.5)));
    on(controlled(3, 0, {}, Ry(-1.25)));
    on(controlled(3, 1, {}, Rz(3.14159265358979)));
    on(controlled(3, 1, {0}, X()));
    on(controlled(3, 2, {1}, X()));
    on(controlled(3, 0, {2}, Z()));
    on(controlled(3, 2, {0, 1}, X()));
    on(controlled(3, 0, {2, 1}, X()));
    on(controlled_swap(3, 0, 2, {}));
    on(controlled_swap(3, 0, 2, {1}));
    v = dft_on_register(v, 0, 3);
    v = conjugated(dft_on_register(conjugated(v), 0, 2));

    const auto s = run_circuit(c);
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(std::abs(s[i] - v[i]) < 1e-12);
    }
}

TEST_CASE("declared width and comments") {
    const auto c = parse_circuit("# only a comment\n\nH 0  # trailing\n", 4);
    CHECK(c.n_qubits() == 4);
    CHECK(c.size() == 1);
}

TEST_CASE("malformed circuits are rejected") {
    CHECK_THROWS_AS((void)parse_circuit("FOO 0"), ValidationError);
    CHECK_THROWS_AS((void)parse_circuit("H"), ValidationError);
    CHECK_THROWS_AS((void)parse_circuit("H 0 1"), ValidationError);
    CHECK_THROWS_AS((void)parse_circuit("RX 0"), ValidationError);
    CHECK_THROWS_AS((void)parse_circuit("RX abc 0"), ValidationError);
    CHECK_THROWS_AS((void)parse_circuit("H -1"), ValidationError);
    CHECK_THROWS_AS((void)parse_circuit("CNOT 1 1"), ValidationError);
    CHECK_THROWS_AS((void)parse_circuit("H 3", 2), ValidationError);
    CHECK_THROWS_AS((void)parse_circuit("# nothing\n"), ValidationError);
    CHECK_THROWS_AS((void)parse_circuit("QFT 0 2"), ValidationError);
}
