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

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qlstm/error.hpp"
#include "qlstm/hybrid.hpp"
#include "qlstm/rng.hpp"

namespace qlstm::hybrid {

using detail::require;

namespace {

bool sigmoid_like(GateFamily g) { return g != GateFamily::candidate; }

std::vector<double> concat(std::span<const double> x, std::span<const double> h) {
    std::vector<double> v(x.begin(), x.end());
    v.insert(v.end(), h.begin(), h.end());
    return v;
}

void check_dims(const CellState &state, std::span<const double> x_t, const QlstmConfig &config) {
    require(static_cast<int>(x_t.size()) == config.input_dim,
            "input has length " + std::to_string(x_t.size()) + ", expected " +
                std::to_string(config.input_dim));
    require(static_cast<int>(state.c.size()) == config.hidden_dim &&
                static_cast<int>(state.h.size()) == config.hidden_dim,
            "cell state does not match hidden_dim");
}

} // namespace

const char *to_string(GateFamily g) {
    switch (g) {
    case GateFamily::forget:
        return "forget";
    case GateFamily::input:
        return "input";
    case GateFamily::output:
        return "output";
    case GateFamily::candidate:
        return "candidate";
    }
    return "?";
}

void QlstmConfig::validate() const {
    require(input_dim >= 1 && hidden_dim >= 1, "input_dim and hidden_dim must be >= 1");
    require(ansatz_layers >= 1, "ansatz_layers must be >= 1");
    require(n_wires() <= sim::kDefaultQubitCap, "input_dim + hidden_dim exceeds the qubit cap");
}

vqc::AnsatzSpec gate_ansatz(const QlstmConfig &config) {
    config.validate();
    auto spec = vqc::hardware_efficient_ansatz(config.n_wires(), config.ansatz_layers);
    spec.qft_mixing = config.qft_mixing;
    return spec;
}

std::span<const double> QlstmParams::unit(GateFamily g, int j) const {
    const auto &v = (*this)[g];
    const auto offset = static_cast<std::size_t>(j) * static_cast<std::size_t>(params_per_unit);
    require(offset + static_cast<std::size_t>(params_per_unit) <= v.size(),
            "parameter slice out of range");
    return std::span<const double>(v).subspan(offset, static_cast<std::size_t>(params_per_unit));
}

QlstmParams QlstmParams::zeros(const QlstmConfig &config) {
    QlstmParams p;
    p.params_per_unit = gate_ansatz(config).n_params;
    for (auto &g : p.gates) {
        g.assign(static_cast<std::size_t>(p.params_per_unit * config.hidden_dim), 0.0);
    }
    return p;
}

QlstmParams init_params(const QlstmConfig &config, std::uint64_t seed) {
    QlstmParams p = QlstmParams::zeros(config);
    Rng rng(seed);
    for (auto &g : p.gates) {
        for (auto &v : g) {
            v = rng.uniform(-std::numbers::pi, std::numbers::pi);
        }
    }
    return p;
}

sim::Circuit embed(std::span<const double> x) {
    require(!x.empty(), "embedding needs at least one value");
    sim::Circuit c(static_cast<int>(x.size()));
    for (std::size_t j = 0; j < x.size(); ++j) {
        c.h(static_cast<int>(j));
    }
    for (std::size_t j = 0; j < x.size(); ++j) {
        require(std::isfinite(x[j]), "embedding input must be finite");
        c.ry(vqc::encoding_angle(x[j]), static_cast<int>(j));
    }
    return c;
}

std::vector<double> gate_activation(GateFamily kind, std::span<const double> h_prev,
                                    std::span<const double> x_t, const QlstmParams &params,
                                    const QlstmConfig &config, std::uint64_t shots,
                                    std::uint64_t seed) {
    require(static_cast<int>(h_prev.size()) == config.hidden_dim, "h_prev does not match hidden_dim");
    require(static_cast<int>(x_t.size()) == config.input_dim, "x_t does not match input_dim");
    const auto spec = gate_ansatz(config);
    require(params.params_per_unit == spec.n_params &&
                static_cast<int>(params[kind].size()) == spec.n_params * config.hidden_dim,
            "parameters do not match the configuration");
    const auto wires = concat(x_t, h_prev);
    std::vector<double> out(static_cast<std::size_t>(config.hidden_dim));
    for (int j = 0; j < config.hidden_dim; ++j) {
        const double v = vqc::predict(spec, params.unit(kind, j), wires, shots,
                                      derive_seed(seed, {static_cast<std::uint64_t>(j)}));
        out[static_cast<std::size_t>(j)] =
            sigmoid_like(kind) ? std::clamp((v + 1.0) / 2.0, 0.0, 1.0) : std::clamp(v, -1.0, 1.0);
    }
    return out;
}

CellState update_cell(const CellState &prev, const GateActivations &a) {
    const std::size_t n = prev.c.size();
    require(a.f.size() == n && a.i.size() == n && a.o.size() == n && a.c_tilde.size() == n,
            "activation vectors do not match the cell size");
    CellState next{std::vector<double>(n), std::vector<double>(n)};
    for (std::size_t j = 0; j < n; ++j) {
        next.c[j] = a.f[j] * prev.c[j] + a.i[j] * a.c_tilde[j];
        next.h[j] = a.o[j] * std::tanh(next.c[j]);
    }
    return next;
}

StepResult cell_step(const CellState &state, std::span<const double> x_t,
                     const QlstmParams &params, const QlstmConfig &config, std::size_t t,
                     std::uint64_t stream_seed) {
    config.validate();
    check_dims(state, x_t, config);
    auto seed_for = [&](GateFamily g) {
        return derive_seed(stream_seed, {t, static_cast<std::uint64_t>(g)});
    };
    auto activation = [&](GateFamily g) {
        return gate_activation(g, state.h, x_t, params, config, config.shots, seed_for(g));
    };
    GateActivations a{activation(GateFamily::forget), activation(GateFamily::input),
                      activation(GateFamily::output), activation(GateFamily::candidate)};
    CellState next = update_cell(state, a);
    return {std::move(next), std::move(a)};
}

StepResult cell_step(const CellState &state, std::span<const double> x_t,
                     const ActivationHook &hook) {
    require(static_cast<bool>(hook), "activation hook is empty");
    GateActivations a = hook(x_t, state);
    CellState next = update_cell(state, a);
    return {std::move(next), std::move(a)};
}

ForwardResult forward(std::span<const std::vector<double>> sequence, const QlstmParams &params,
                      const QlstmConfig &config) {
    return forward(sequence, params, config, config.seed);
}

ForwardResult forward(std::span<const std::vector<double>> sequence, const QlstmParams &params,
                      const QlstmConfig &config, std::uint64_t stream_seed) {
    require(!sequence.empty(), "sequence must not be empty");
    ForwardResult out;
    CellState state = CellState::zeros(config.hidden_dim);
    for (std::size_t t = 0; t < sequence.size(); ++t) {
        auto step = cell_step(state, sequence[t], params, config, t, stream_seed);
        state = std::move(step.state);
        out.hidden.push_back(state.h);
        out.activations.push_back(std::move(step.activations));
    }
    out.final_state = std::move(state);
    return out;
}

ForwardResult forward(std::span<const std::vector<double>> sequence, int hidden_dim,
                      const ActivationHook &hook, const CellState *initial) {
    require(!sequence.empty(), "sequence must not be empty");
    ForwardResult out;
    CellState state = initial ? *initial : CellState::zeros(hidden_dim);
    for (const auto &x : sequence) {
        auto step = cell_step(state, x, hook);
        state = std::move(step.state);
        out.hidden.push_back(state.h);
        out.activations.push_back(std::move(step.activations));
    }
    out.final_state = std::move(state);
    return out;
}

sim::QuantumState encode_amplitude(std::span<const double> x, int qubit_cap) {
    require(!x.empty(), "cannot encode an empty vector");
    double norm2 = 0.0;
    for (double v : x) {
        require(std::isfinite(v), "cannot encode non-finite values");
        norm2 += v * v;
    }
    require(norm2 > 0.0, "cannot encode the all-zero vector");
    std::size_t dim = 2;
    while (dim < x.size()) {
        dim <<= 1;
    }
    require(dim <= (std::size_t{1} << qubit_cap), "vector does not fit under the qubit cap");
    std::vector<sim::Complex> amps(dim, 0.0);
    const double inv = 1.0 / std::sqrt(norm2);
    for (std::size_t k = 0; k < x.size(); ++k) {
        amps[k] = x[k] * inv;
    }
    return sim::QuantumState::from_amplitudes(std::move(amps), qubit_cap);
}

std::vector<double> decode(const sim::QuantumState &state, std::uint64_t shots,
                           std::uint64_t seed) {
    if (shots == 0) {
        return sim::probabilities(state);
    }
    std::vector<double> freq(state.dimension(), 0.0);
    for (const auto &[index, count] : sim::sample_counts(state, shots, seed)) {
        freq[index] = static_cast<double>(count) / static_cast<double>(shots);
    }
    return freq;
}

} // namespace qlstm::hybrid
