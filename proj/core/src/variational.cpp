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

#include "qlstm/variational.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "qlstm/error.hpp"
#include "qlstm/rng.hpp"

namespace qlstm::vqc {

using detail::require;

namespace {

constexpr double kShift = std::numbers::pi / 2.0;

sim::Unitary2 rotation(Axis axis, double angle) {
    switch (axis) {
    case Axis::X:
        return sim::standard_gate(sim::GateKind::Rx, angle);
    case Axis::Y:
        return sim::standard_gate(sim::GateKind::Ry, angle);
    case Axis::Z:
        return sim::standard_gate(sim::GateKind::Rz, angle);
    }
    detail::fail("unknown rotation axis");
}

void add_entangler(sim::Circuit &c, Entangler e) {
    const int n = c.n_qubits();
    if (e == Entangler::none || n < 2) {
        return;
    }
    if (e == Entangler::cnot_ring && n > 2) {
        c.cnot(0, n - 1);
    }
    for (int w = n - 2; w >= 0; --w) {
        c.cnot(w + 1, w);
    }
}

std::vector<int> effective_input_map(const AnsatzSpec &spec) {
    if (spec.encoding == Encoding::none) {
        return std::vector<int>(static_cast<std::size_t>(spec.n_qubits), -1);
    }
    if (spec.input_map.empty()) {
        std::vector<int> m(static_cast<std::size_t>(spec.n_qubits));
        for (int w = 0; w < spec.n_qubits; ++w) {
            m[static_cast<std::size_t>(w)] = w;
        }
        return m;
    }
    return spec.input_map;
}

double mean_z_from_counts(const sim::Histogram &counts, std::uint64_t shots) {
    std::int64_t acc = 0;
    for (const auto &[index, n] : counts) {
        acc += (index & 1U) ? -static_cast<std::int64_t>(n) : static_cast<std::int64_t>(n);
    }
    return static_cast<double>(acc) / static_cast<double>(shots);
}

// The circuit with a single rotation site moved by `delta`.
sim::Circuit shifted(const BoundCircuit &bound, std::size_t op_index, Axis axis, double angle,
                     int wire, double delta) {
    sim::Circuit c = bound.circuit;
    c.replace(op_index, sim::GateOp{rotation(axis, angle + delta), wire, {}});
    return c;
}

} // namespace

int AnsatzSpec::input_arity() const {
    int arity = 0;
    for (int k : effective_input_map(*this)) {
        arity = std::max(arity, k + 1);
    }
    return arity;
}

void AnsatzSpec::validate() const {
    require(n_qubits >= 1, "ansatz needs at least one qubit");
    require(n_params >= 0, "n_params must be non-negative");
    std::set<int> used;
    for (const auto &layer : layers) {
        for (const auto &r : layer.rotations) {
            require(r.wire >= 0 && r.wire < n_qubits, "rotation wire out of range");
            require(r.slot >= 0 && r.slot < n_params, "rotation slot out of range");
            used.insert(r.slot);
        }
    }
    require(static_cast<int>(used.size()) == n_params, "every parameter slot must be used");
    if (encoding == Encoding::hadamard_arctan && !input_map.empty()) {
        require(static_cast<int>(input_map.size()) == n_qubits,
                "input_map needs one entry per wire");
        std::set<int> inputs;
        for (int k : input_map) {
            require(k >= -1, "input_map entries must be >= -1");
            if (k >= 0) {
                inputs.insert(k);
            }
        }
        require(inputs.empty() || (*inputs.begin() == 0 &&
                                   *inputs.rbegin() == static_cast<int>(inputs.size()) - 1),
                "input_map must cover input indices 0..k without gaps");
    }
}

AnsatzSpec hardware_efficient_ansatz(int n_qubits, int n_layers, Encoding encoding,
                                     Entangler entangler) {
    require(n_layers >= 0, "layer count must be non-negative");
    AnsatzSpec spec;
    spec.n_qubits = n_qubits;
    spec.encoding = encoding;
    int slot = 0;
    for (int l = 0; l < n_layers; ++l) {
        Layer layer;
        layer.entangler = entangler;
        for (Axis axis : {Axis::Y, Axis::Z}) {
            for (int w = 0; w < n_qubits; ++w) {
                layer.rotations.push_back({axis, w, slot++});
            }
        }
        spec.layers.push_back(std::move(layer));
    }
    spec.n_params = slot;
    spec.validate();
    return spec;
}

AnsatzSpec activation_ansatz() {
    AnsatzSpec spec = hardware_efficient_ansatz(2, 3);
    spec.input_map = {0, 0};
    spec.validate();
    return spec;
}

BoundCircuit bind_detailed(const AnsatzSpec &spec, std::span<const double> params,
                           std::span<const double> input) {
    spec.validate();
    require(static_cast<int>(params.size()) == spec.n_params,
            "expected " + std::to_string(spec.n_params) + " parameters, got " +
                std::to_string(params.size()));
    require(static_cast<int>(input.size()) == spec.input_arity(),
            "expected input of length " + std::to_string(spec.input_arity()) + ", got " +
                std::to_string(input.size()));
    for (double v : input) {
        require(std::isfinite(v), "input values must be finite");
    }

    BoundCircuit out{sim::Circuit(spec.n_qubits), {}, {}};
    auto &c = out.circuit;
    if (spec.encoding == Encoding::hadamard_arctan) {
        for (int w = 0; w < spec.n_qubits; ++w) {
            c.h(w);
        }
        const auto map = effective_input_map(spec);
        for (int w = 0; w < spec.n_qubits; ++w) {
            const int k = map[static_cast<std::size_t>(w)];
            if (k < 0) {
                continue;
            }
            const double angle = encoding_angle(input[static_cast<std::size_t>(k)]);
            out.input_sites.push_back({c.size(), k, w, angle});
            c.ry(angle, w);
        }
    }
    if (spec.qft_mixing) {
        std::vector<int> all(static_cast<std::size_t>(spec.n_qubits));
        for (int w = 0; w < spec.n_qubits; ++w) {
            all[static_cast<std::size_t>(w)] = w;
        }
        c.add(sim::QftOp{std::move(all), false});
    }
    for (const auto &layer : spec.layers) {
        for (const auto &r : layer.rotations) {
            const double angle = params[static_cast<std::size_t>(r.slot)];
            out.param_sites.push_back({c.size(), r.slot, r.wire, r.axis, angle});
            c.gate(rotation(r.axis, angle), r.wire);
        }
        add_entangler(c, layer.entangler);
    }
    return out;
}

sim::Circuit bind(const AnsatzSpec &spec, std::span<const double> params,
                  std::span<const double> input) {
    return bind_detailed(spec, params, input).circuit;
}

double readout(const sim::Circuit &circuit, std::uint64_t shots, std::uint64_t seed) {
    const sim::QuantumState state = sim::run_circuit(circuit);
    if (shots == 0) {
        return sim::expectation_z(state, 0);
    }
    return mean_z_from_counts(sim::sample_counts(state, shots, seed), shots);
}

double predict(const AnsatzSpec &spec, std::span<const double> params, std::span<const double> x,
               std::uint64_t shots, std::uint64_t seed) {
    return readout(bind(spec, params, x), shots, seed);
}

ExpectationGradient expectation_with_gradient(const AnsatzSpec &spec,
                                              std::span<const double> params,
                                              std::span<const double> x, std::uint64_t shots,
                                              std::uint64_t seed, bool with_input_gradient) {
    const BoundCircuit bound = bind_detailed(spec, params, x);
    ExpectationGradient g;
    g.d_params.assign(static_cast<std::size_t>(spec.n_params), 0.0);
    g.d_inputs.assign(x.size(), 0.0);

    std::uint64_t eval = 0;
    auto run = [&](const sim::Circuit &c) {
        const std::uint64_t s = shots ? derive_seed(seed, {eval}) : 0;
        ++eval;
        return readout(c, shots, s);
    };
    g.value = run(bound.circuit);

    for (const auto &site : bound.param_sites) {
        const double plus = run(shifted(bound, site.op_index, site.axis, site.angle, site.wire, kShift));
        const double minus =
            run(shifted(bound, site.op_index, site.axis, site.angle, site.wire, -kShift));
        g.d_params[static_cast<std::size_t>(site.slot)] += 0.5 * (plus - minus);
    }
    if (with_input_gradient) {
        for (const auto &site : bound.input_sites) {
            const double plus =
                run(shifted(bound, site.op_index, Axis::Y, site.angle, site.wire, kShift));
            const double minus =
                run(shifted(bound, site.op_index, Axis::Y, site.angle, site.wire, -kShift));
            const double xk = x[static_cast<std::size_t>(site.input)];
            // d(2 atan x)/dx = 2 / (1 + x^2)
            g.d_inputs[static_cast<std::size_t>(site.input)] +=
                0.5 * (plus - minus) * 2.0 / (1.0 + xk * xk);
        }
    }
    return g;
}

void TrainConfig::validate() const {
    require(learning_rate > 0.0 && std::isfinite(learning_rate), "learning_rate must be positive");
    require(max_iters >= 1, "max_iters must be at least 1");
}

double cost_mse(const AnsatzSpec &spec, std::span<const double> params,
                std::span<const TrainingSample> data, std::uint64_t shots, std::uint64_t seed) {
    require(!data.empty(), "dataset must not be empty");
    double acc = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double r = predict(spec, params, data[i].x, shots, derive_seed(seed, {i, 0})) -
                         data[i].y;
        acc += r * r;
    }
    return acc / static_cast<double>(data.size());
}

std::vector<double> gradient(const AnsatzSpec &spec, std::span<const double> params,
                             std::span<const TrainingSample> data, GradientMode mode,
                             std::uint64_t shots, std::uint64_t seed) {
    require(!data.empty(), "dataset must not be empty");
    std::vector<double> grad(static_cast<std::size_t>(spec.n_params), 0.0);
    const double n = static_cast<double>(data.size());

    if (mode == GradientMode::central_difference) {
        std::vector<double> p(params.begin(), params.end());
        for (std::size_t k = 0; k < p.size(); ++k) {
            const double keep = p[k];
            p[k] = keep + kCentralDifferenceStep;
            const double up = cost_mse(spec, p, data, shots, seed);
            p[k] = keep - kCentralDifferenceStep;
            const double down = cost_mse(spec, p, data, shots, seed);
            p[k] = keep;
            grad[k] = (up - down) / (2.0 * kCentralDifferenceStep);
        }
        return grad;
    }

    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto eg = expectation_with_gradient(spec, params, data[i].x, shots,
                                                  derive_seed(seed, {i}), false);
        const double residual = eg.value - data[i].y;
        for (std::size_t k = 0; k < grad.size(); ++k) {
            grad[k] += 2.0 * residual * eg.d_params[k] / n;
        }
    }
    return grad;
}

std::vector<double> initial_params(const AnsatzSpec &spec, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> p(static_cast<std::size_t>(spec.n_params));
    for (auto &v : p) {
        v = rng.uniform(-std::numbers::pi, std::numbers::pi);
    }
    return p;
}

TrainReport train(const AnsatzSpec &spec, std::span<const TrainingSample> data,
                  const TrainConfig &config) {
    config.validate();
    spec.validate();
    require(!data.empty(), "dataset must not be empty");
    for (const auto &s : data) {
        require(s.y >= -1.0 && s.y <= 1.0, "targets must lie in [-1, 1]");
    }

    TrainReport report;
    report.final_params = initial_params(spec, config.seed);
    auto &theta = report.final_params;
    for (int iter = 0; iter < config.max_iters; ++iter) {
        const std::uint64_t iter_seed = derive_seed(config.seed, {static_cast<std::uint64_t>(iter)});
        const double cost = cost_mse(spec, theta, data, config.shots, iter_seed);
        if (!std::isfinite(cost)) {
            throw DivergenceError("training diverged: non-finite MSE at iteration " +
                                  std::to_string(iter));
        }
        report.cost_history.push_back(cost);
        report.iterations_run = iter + 1;
        if (iter > 0 && std::abs(cost - report.cost_history[report.cost_history.size() - 2]) <
                            kStopTolerance) {
            break;
        }
        const auto grad =
            gradient(spec, theta, data, config.gradient_mode, config.shots, iter_seed);
        double step = 0.0;
        for (double g : grad) {
            step = std::max(step, std::abs(config.learning_rate * g));
        }
        if (step < 1e-15 || iter + 1 == config.max_iters) {
            break;
        }
        for (std::size_t k = 0; k < theta.size(); ++k) {
            theta[k] -= config.learning_rate * grad[k];
            if (!std::isfinite(theta[k])) {
                throw DivergenceError("training diverged: non-finite parameter after iteration " +
                                      std::to_string(iter));
            }
        }
    }
    return report;
}

std::vector<TrainingSample> activation_samples(ActivationKind kind) {
    std::vector<TrainingSample> out;
    out.reserve(41);
    for (int k = 0; k <= 40; ++k) {
        const double x = -2.0 + 0.1 * k;
        const double y = kind == ActivationKind::tanh ? std::tanh(x)
                                                      : 2.0 / (1.0 + std::exp(-x)) - 1.0;
        out.push_back({{x}, y});
    }
    return out;
}

TrainReport fit_activation(ActivationKind kind, const AnsatzSpec &spec, const TrainConfig &config) {
    require(spec.input_arity() == 1, "activation fitting needs a scalar-input ansatz");
    const auto samples = activation_samples(kind);
    return train(spec, samples, config);
}

} // namespace qlstm::vqc
