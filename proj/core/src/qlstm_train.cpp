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
#include <vector>

#include "qlstm/error.hpp"
#include "qlstm/hybrid.hpp"
#include "qlstm/rng.hpp"

namespace qlstm::hybrid {

using detail::require;

namespace {

std::size_t count_targets(std::span<const Sequence> data, int out_dim) {
    std::size_t n = 0;
    for (const auto &seq : data) {
        require(seq.inputs.size() == seq.targets.size(), "inputs and targets differ in length");
        require(!seq.inputs.empty(), "sequence must not be empty");
        for (const auto &y : seq.targets) {
            require(static_cast<int>(y.size()) == out_dim, "target width does not match readout");
            n += static_cast<std::size_t>(std::count_if(y.begin(), y.end(), has_target));
        }
    }
    require(n > 0, "dataset has no targets");
    return n;
}

// Everything the backward pass needs from one timestep.
struct StepTape {
    std::vector<double> c_prev;
    std::vector<double> c;
    std::vector<double> tanh_c;
    GateActivations act;
    std::array<std::vector<vqc::ExpectationGradient>, 4> circuit;
    std::vector<double> d_output; // dLoss/d(readout output)
};

} // namespace

QlstmModel init_model(const QlstmConfig &config, int output_dim) {
    require(output_dim >= 1, "output_dim must be >= 1");
    QlstmModel m{config, init_params(config, config.seed),
                 Readout::zeros(output_dim, config.hidden_dim)};
    Rng rng(derive_seed(config.seed, {0x5eed}));
    for (auto &w : m.readout.weights) {
        w = rng.normal(0.0, 0.1);
    }
    return m;
}

std::vector<std::vector<double>> predict_sequence(const QlstmModel &model,
                                                  std::span<const std::vector<double>> inputs) {
    const auto fwd = forward(inputs, model.params, model.config);
    std::vector<std::vector<double>> out;
    out.reserve(fwd.hidden.size());
    for (const auto &h : fwd.hidden) {
        out.push_back(model.readout.apply(h));
    }
    return out;
}

double sequence_loss(const QlstmModel &model, std::span<const Sequence> data,
                     std::uint64_t stream_seed) {
    const std::size_t n = count_targets(data, model.readout.out_dim);
    double acc = 0.0;
    for (std::size_t s = 0; s < data.size(); ++s) {
        const auto fwd = forward(data[s].inputs, model.params, model.config,
                                 derive_seed(stream_seed, {s}));
        for (std::size_t t = 0; t < fwd.hidden.size(); ++t) {
            const auto y = model.readout.apply(fwd.hidden[t]);
            for (std::size_t r = 0; r < y.size(); ++r) {
                const double target = data[s].targets[t][r];
                if (has_target(target)) {
                    acc += (y[r] - target) * (y[r] - target);
                }
            }
        }
    }
    return acc / static_cast<double>(n);
}

LossGradient loss_and_gradient(const QlstmModel &model, std::span<const Sequence> data,
                               std::uint64_t stream_seed) {
    const auto &cfg = model.config;
    cfg.validate();
    const auto spec = gate_ansatz(cfg);
    const int hidden = cfg.hidden_dim;
    const auto H = static_cast<std::size_t>(hidden);
    const auto in_dim = static_cast<std::size_t>(cfg.input_dim);
    const int out_dim = model.readout.out_dim;
    require(model.readout.hidden_dim == hidden, "readout does not match hidden_dim");
    const double n_targets = static_cast<double>(count_targets(data, out_dim));

    LossGradient g;
    g.d_params = QlstmParams::zeros(cfg);
    g.d_readout = Readout::zeros(out_dim, hidden);

    for (std::size_t s = 0; s < data.size(); ++s) {
        const auto &seq = data[s];
        const std::uint64_t seq_seed = derive_seed(stream_seed, {s});
        const std::size_t T = seq.inputs.size();
        if (g.step_contribution.size() < T) {
            g.step_contribution.resize(T, 0.0);
        }

        // Forward pass, recording circuit values and their derivatives.
        std::vector<StepTape> tape(T);
        CellState state = CellState::zeros(hidden);
        for (std::size_t t = 0; t < T; ++t) {
            const auto &x = seq.inputs[t];
            require(x.size() == in_dim, "input width does not match input_dim");
            std::vector<double> wires(x.begin(), x.end());
            wires.insert(wires.end(), state.h.begin(), state.h.end());

            auto &st = tape[t];
            st.c_prev = state.c;
            GateActivations &a = st.act;
            for (GateFamily fam : kGateFamilies) {
                const auto k = static_cast<std::size_t>(fam);
                const std::uint64_t fam_seed = derive_seed(seq_seed, {t, k});
                std::vector<double> values(H);
                st.circuit[k].reserve(H);
                for (int j = 0; j < hidden; ++j) {
                    auto eg = vqc::expectation_with_gradient(
                        spec, model.params.unit(fam, j), wires, cfg.shots,
                        derive_seed(fam_seed, {static_cast<std::uint64_t>(j)}), true);
                    values[static_cast<std::size_t>(j)] =
                        fam == GateFamily::candidate ? eg.value : (eg.value + 1.0) / 2.0;
                    st.circuit[k].push_back(std::move(eg));
                }
                switch (fam) {
                case GateFamily::forget:
                    a.f = std::move(values);
                    break;
                case GateFamily::input:
                    a.i = std::move(values);
                    break;
                case GateFamily::output:
                    a.o = std::move(values);
                    break;
                case GateFamily::candidate:
                    a.c_tilde = std::move(values);
                    break;
                }
            }
            state = update_cell(state, a);
            st.c = state.c;
            st.tanh_c.resize(H);
            for (std::size_t j = 0; j < H; ++j) {
                st.tanh_c[j] = std::tanh(state.c[j]);
            }

            const auto y = model.readout.apply(state.h);
            st.d_output.assign(y.size(), 0.0);
            for (std::size_t r = 0; r < y.size(); ++r) {
                const double target = seq.targets[t][r];
                if (!has_target(target)) {
                    continue;
                }
                const double residual = y[r] - target;
                g.loss += residual * residual / n_targets;
                st.d_output[r] = 2.0 * residual / n_targets;
                for (std::size_t k = 0; k < H; ++k) {
                    g.d_readout.weights[r * H + k] += st.d_output[r] * state.h[k];
                }
                g.d_readout.bias[r] += st.d_output[r];
            }
        }

        // Backward pass through the recursion.
        std::vector<double> dh_next(H, 0.0);
        std::vector<double> dc_next(H, 0.0);
        for (std::size_t t = T; t-- > 0;) {
            const auto &st = tape[t];
            const auto &a = st.act;
            std::vector<double> dh = dh_next;
            for (std::size_t r = 0; r < st.d_output.size(); ++r) {
                for (std::size_t k = 0; k < H; ++k) {
                    dh[k] += model.readout.weights[r * H + k] * st.d_output[r];
                }
            }
            std::array<std::vector<double>, 4> dv;
            for (auto &v : dv) {
                v.assign(H, 0.0);
            }
            for (std::size_t j = 0; j < H; ++j) {
                const double dc =
                    dc_next[j] + dh[j] * a.o[j] * (1.0 - st.tanh_c[j] * st.tanh_c[j]);
                const double d_o = dh[j] * st.tanh_c[j];
                const double d_f = dc * st.c_prev[j];
                const double d_i = dc * a.c_tilde[j];
                const double d_ct = dc * a.i[j];
                dc_next[j] = dc * a.f[j];
                // (v + 1) / 2 for f, i, o; v itself for the candidate.
                dv[0][j] = 0.5 * d_f;
                dv[1][j] = 0.5 * d_i;
                dv[2][j] = 0.5 * d_o;
                dv[3][j] = d_ct;
            }
            std::vector<double> dh_prev(H, 0.0);
            double contribution = 0.0;
            const auto ppu = static_cast<std::size_t>(g.d_params.params_per_unit);
            for (std::size_t k = 0; k < 4; ++k) {
                auto &dtheta = g.d_params.gates[k];
                for (std::size_t j = 0; j < H; ++j) {
                    const auto &eg = st.circuit[k][j];
                    for (std::size_t p = 0; p < ppu; ++p) {
                        const double d = dv[k][j] * eg.d_params[p];
                        dtheta[j * ppu + p] += d;
                        contribution = std::max(contribution, std::abs(d));
                    }
                    for (std::size_t m = 0; m < H; ++m) {
                        dh_prev[m] += dv[k][j] * eg.d_inputs[in_dim + m];
                    }
                }
            }
            g.step_contribution[t] = std::max(g.step_contribution[t], contribution);
            dh_next = std::move(dh_prev);
        }
    }
    return g;
}

SequenceTrainResult train_sequence(std::span<const Sequence> data, const QlstmModel &initial,
                                   const SequenceTrainConfig &settings) {
    require(settings.learning_rate > 0.0, "learning_rate must be positive");
    require(settings.iterations >= 0, "iterations must be non-negative");
    const double lr_out =
        settings.readout_learning_rate > 0.0 ? settings.readout_learning_rate : settings.learning_rate;
    SequenceTrainResult result{initial, {}};
    auto &model = result.model;
    auto check = [&](double loss, int iter) {
        if (!std::isfinite(loss)) {
            throw DivergenceError("qLSTM training diverged: non-finite loss at iteration " +
                                  std::to_string(iter));
        }
    };
    StepRule rule(settings.optimizer);
    for (int iter = 0; iter < settings.iterations; ++iter) {
        auto lg = loss_and_gradient(
            model, data, derive_seed(model.config.seed, {static_cast<std::uint64_t>(iter)}));
        check(lg.loss, iter);
        result.loss_history.push_back(lg.loss);

        std::vector<double *> values, grads;
        std::vector<double> rates;
        for (std::size_t k = 0; k < 4; ++k) {
            for (std::size_t q = 0; q < model.params.gates[k].size(); ++q) {
                values.push_back(&model.params.gates[k][q]);
                grads.push_back(&lg.d_params.gates[k][q]);
                rates.push_back(settings.learning_rate);
            }
        }
        for (std::size_t q = 0; q < model.readout.weights.size(); ++q) {
            values.push_back(&model.readout.weights[q]);
            grads.push_back(&lg.d_readout.weights[q]);
            rates.push_back(lr_out);
        }
        for (std::size_t q = 0; q < model.readout.bias.size(); ++q) {
            values.push_back(&model.readout.bias[q]);
            grads.push_back(&lg.d_readout.bias[q]);
            rates.push_back(lr_out);
        }

        rule.begin_step();
        for (std::size_t q = 0; q < values.size(); ++q) {
            *values[q] -= rates[q] * rule.direction(q, *grads[q]);
            if (!std::isfinite(*values[q])) {
                throw DivergenceError("qLSTM training diverged: non-finite parameter after iteration " +
                                      std::to_string(iter));
            }
        }
    }
    const double final_loss = sequence_loss(
        model, data,
        derive_seed(model.config.seed, {static_cast<std::uint64_t>(settings.iterations)}));
    check(final_loss, settings.iterations);
    result.loss_history.push_back(final_loss);
    return result;
}

SequenceTrainResult train_sequence(std::span<const Sequence> data, const QlstmConfig &config,
                                   int output_dim, const SequenceTrainConfig &settings) {
    return train_sequence(data, init_model(config, output_dim), settings);
}

} // namespace qlstm::hybrid
