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

#include "qlstm/selftest.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "qlstm/bench.hpp"
#include "qlstm/classical_lstm.hpp"
#include "qlstm/hybrid.hpp"
#include "qlstm/qpca.hpp"
#include "qlstm/statevector.hpp"
#include "qlstm/variational.hpp"

namespace qlstm {

namespace {

using sim::Complex;

bool check(std::ostream &out, const std::string &name, const std::function<bool()> &fn) {
    bool ok = false;
    std::string why;
    try {
        ok = fn();
    } catch (const std::exception &e) {
        why = std::string(" (") + e.what() + ")";
    }
    out << (ok ? "PASS " : "FAIL ") << name << why << '\n';
    return ok;
}

bool bell_state() {
    sim::Circuit c(2);
    c.h(0).cnot(0, 1);
    const auto p = sim::probabilities(sim::run_circuit(c));
    return std::abs(p[0] - 0.5) < 1e-12 && std::abs(p[3] - 0.5) < 1e-12;
}

bool qft_roundtrip() {
    sim::Circuit c(3);
    c.h(0).rx(0.3, 1).cnot(0, 2);
    auto ref = sim::run_circuit(c);
    auto s = ref;
    const std::vector<int> reg{0, 1, 2};
    sim::apply_qft(s, reg);
    sim::apply_inverse_qft(s, reg);
    double err = 0.0;
    for (std::size_t i = 0; i < s.amplitudes().size(); ++i) {
        err = std::max(err, std::abs(s.amplitudes()[i] - ref.amplitudes()[i]));
    }
    return err < 1e-12;
}

bool shift_matches_difference() {
    const auto spec = vqc::hardware_efficient_ansatz(2, 2);
    const auto theta = vqc::initial_params(spec, 7);
    const std::vector<double> x{0.4, -0.3};
    const auto g = vqc::expectation_with_gradient(spec, theta, x);
    for (std::size_t k = 0; k < theta.size(); ++k) {
        auto plus = theta;
        auto minus = theta;
        plus[k] += 1e-5;
        minus[k] -= 1e-5;
        const double fd = (vqc::predict(spec, plus, x) - vqc::predict(spec, minus, x)) / 2e-5;
        if (std::abs(fd - g.d_params[k]) > 1e-6) {
            return false;
        }
    }
    return true;
}

bool amplitude_roundtrip() {
    const std::vector<double> x{3.0, -4.0, 0.0};
    const auto p = hybrid::decode(hybrid::encode_amplitude(x));
    return p.size() == 4 && std::abs(p[0] - 0.36) < 1e-12 && std::abs(p[1] - 0.64) < 1e-12 &&
           p[2] == 0.0 && p[3] == 0.0;
}

bool hook_matches_classical() {
    const auto params = classical::init_params(1, 3, 1, 11);
    const std::vector<std::vector<double>> seq{{0.2}, {-0.5}, {0.9}};
    const auto ref = classical::forward(params, seq);
    const auto hooked = hybrid::forward(seq, 3, [&](std::span<const double> x, const CellState &s) {
        return classical::gate_activations(params, x, s.h);
    });
    for (std::size_t t = 0; t < seq.size(); ++t) {
        if (hooked.hidden[t] != ref[t]) {
            return false;
        }
    }
    return true;
}

bool phase_estimation_diagonal() {
    // Eigenvalues 0.8 and 0.2 of the normalised covariance round to 13/16 and 3/16.
    const auto x = qpca::DataMatrix::from_rows({{2.0, 0.0}, {0.0, 1.0}});
    const auto r = qpca::qpca_top_k(x, 2, 4, 0, 0);
    return r.phases.size() == 2 && r.phases[0] == 13.0 / 16.0 && r.phases[1] == 3.0 / 16.0;
}

bool experiment_deterministic() {
    bench::ExperimentConfig cfg;
    cfg.model = bench::ModelKind::classical_lstm;
    cfg.seed = 3;
    cfg.iterations = 5;
    cfg.data.n_sequences = 5;
    cfg.memory_delays = {1};
    return bench::deterministic_json(bench::run_experiment(cfg)) ==
           bench::deterministic_json(bench::run_experiment(cfg));
}

} // namespace

bool run_selftest(std::ostream &out) {
    bool ok = true;
    ok &= check(out, "bell state probabilities", bell_state);
    ok &= check(out, "qft followed by inverse qft", qft_roundtrip);
    ok &= check(out, "parameter shift vs central difference", shift_matches_difference);
    ok &= check(out, "amplitude encode/decode", amplitude_roundtrip);
    ok &= check(out, "activation hook reproduces classical lstm", hook_matches_classical);
    ok &= check(out, "phase estimation of a diagonal covariance", phase_estimation_diagonal);
    ok &= check(out, "experiment records are reproducible", experiment_deterministic);
    out << (ok ? "selftest passed\n" : "selftest FAILED\n");
    return ok;
}

} // namespace qlstm
