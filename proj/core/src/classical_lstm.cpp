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

#include "qlstm/classical_lstm.hpp"

#include <cmath>

#include "qlstm/error.hpp"
#include "qlstm/rng.hpp"

namespace qlstm::classical {

using detail::require;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double tanh_activation(double x) { return std::tanh(x); }

void LstmParams::validate() const {
    require(input_dim >= 1 && hidden_dim >= 1, "LSTM dimensions must be >= 1");
    const auto w = static_cast<std::size_t>(hidden_dim * concat_dim());
    for (std::size_t k = 0; k < 4; ++k) {
        require(weights[k].size() == w, "LSTM weight matrix has the wrong shape");
        require(biases[k].size() == static_cast<std::size_t>(hidden_dim),
                "LSTM bias has the wrong length");
    }
    require(readout.hidden_dim == hidden_dim &&
                readout.weights.size() ==
                    static_cast<std::size_t>(readout.out_dim * readout.hidden_dim) &&
                readout.bias.size() == static_cast<std::size_t>(readout.out_dim),
            "LSTM readout has the wrong shape");
}

LstmParams LstmParams::zeros(int input_dim, int hidden_dim, int output_dim) {
    require(input_dim >= 1 && hidden_dim >= 1 && output_dim >= 1, "LSTM dimensions must be >= 1");
    LstmParams p;
    p.input_dim = input_dim;
    p.hidden_dim = hidden_dim;
    for (std::size_t k = 0; k < 4; ++k) {
        p.weights[k].assign(static_cast<std::size_t>(hidden_dim * (input_dim + hidden_dim)), 0.0);
        p.biases[k].assign(static_cast<std::size_t>(hidden_dim), 0.0);
    }
    p.readout = Readout::zeros(output_dim, hidden_dim);
    return p;
}

LstmParams init_params(int input_dim, int hidden_dim, int output_dim, std::uint64_t seed) {
    LstmParams p = LstmParams::zeros(input_dim, hidden_dim, output_dim);
    Rng rng(seed);
    for_each_parameter(p, [&rng](double &v) { v = rng.normal(0.0, 0.1); });
    return p;
}

namespace {

// Pre-activations z_k = W_k [x, h] + b_k for the four gates.
std::array<std::vector<double>, 4> preactivations(const LstmParams &p, std::span<const double> x,
                                                  std::span<const double> h) {
    const auto H = static_cast<std::size_t>(p.hidden_dim);
    const auto I = static_cast<std::size_t>(p.input_dim);
    const std::size_t cols = I + H;
    std::array<std::vector<double>, 4> z;
    for (std::size_t k = 0; k < 4; ++k) {
        z[k].assign(H, 0.0);
        for (std::size_t r = 0; r < H; ++r) {
            double acc = 0.0;
            for (std::size_t c = 0; c < I; ++c) {
                acc += p.weights[k][r * cols + c] * x[c];
            }
            for (std::size_t c = 0; c < H; ++c) {
                acc += p.weights[k][r * cols + I + c] * h[c];
            }
            z[k][r] = acc + p.biases[k][r];
        }
    }
    return z;
}

void check_step_shapes(const LstmParams &p, std::span<const double> x, std::span<const double> h) {
    require(static_cast<int>(x.size()) == p.input_dim, "input does not match input_dim");
    require(static_cast<int>(h.size()) == p.hidden_dim, "hidden state does not match hidden_dim");
}

std::size_t count_targets(std::span<const Sequence> data, int out_dim) {
    std::size_t n = 0;
    for (const auto &seq : data) {
        require(!seq.inputs.empty(), "sequence must not be empty");
        require(seq.inputs.size() == seq.targets.size(), "inputs and targets differ in length");
        for (const auto &y : seq.targets) {
            require(static_cast<int>(y.size()) == out_dim, "target width does not match readout");
            for (double v : y) {
                n += has_target(v) ? 1 : 0;
            }
        }
    }
    require(n > 0, "dataset has no targets");
    return n;
}

} // namespace

GateActivations gate_activations(const LstmParams &params, std::span<const double> x,
                                 std::span<const double> h) {
    check_step_shapes(params, x, h);
    auto z = preactivations(params, x, h);
    GateActivations a{std::move(z[0]), std::move(z[1]), std::move(z[2]), std::move(z[3])};
    for (auto *v : {&a.f, &a.i, &a.o}) {
        for (auto &e : *v) {
            e = sigmoid(e);
        }
    }
    for (auto &e : a.c_tilde) {
        e = tanh_activation(e);
    }
    return a;
}

StepResult cell_step(std::span<const double> c_prev, std::span<const double> h_prev,
                     std::span<const double> x_t, const LstmParams &params) {
    require(c_prev.size() == h_prev.size(), "c_prev and h_prev differ in length");
    StepResult out{{}, {}, gate_activations(params, x_t, h_prev)};
    const auto &a = out.activations;
    const std::size_t H = c_prev.size();
    out.c.resize(H);
    out.h.resize(H);
    for (std::size_t j = 0; j < H; ++j) {
        out.c[j] = a.f[j] * c_prev[j] + a.i[j] * a.c_tilde[j];
        out.h[j] = a.o[j] * tanh_activation(out.c[j]);
    }
    return out;
}

std::vector<std::vector<double>> forward(const LstmParams &params,
                                         std::span<const std::vector<double>> inputs) {
    params.validate();
    require(!inputs.empty(), "sequence must not be empty");
    const auto H = static_cast<std::size_t>(params.hidden_dim);
    std::vector<double> c(H, 0.0), h(H, 0.0);
    std::vector<std::vector<double>> hs;
    hs.reserve(inputs.size());
    for (const auto &x : inputs) {
        auto step = cell_step(c, h, x, params);
        c = std::move(step.c);
        h = std::move(step.h);
        hs.push_back(h);
    }
    return hs;
}

std::vector<std::vector<double>> predict_sequence(const LstmParams &params,
                                                  std::span<const std::vector<double>> inputs) {
    std::vector<std::vector<double>> out;
    for (const auto &h : forward(params, inputs)) {
        out.push_back(params.readout.apply(h));
    }
    return out;
}

double sequence_loss(const LstmParams &params, std::span<const Sequence> data) {
    const double n = static_cast<double>(count_targets(data, params.readout.out_dim));
    double acc = 0.0;
    for (const auto &seq : data) {
        const auto y = predict_sequence(params, seq.inputs);
        for (std::size_t t = 0; t < y.size(); ++t) {
            for (std::size_t r = 0; r < y[t].size(); ++r) {
                const double target = seq.targets[t][r];
                if (has_target(target)) {
                    acc += (y[t][r] - target) * (y[t][r] - target);
                }
            }
        }
    }
    return acc / n;
}

LossGradient loss_and_gradient(const LstmParams &params, std::span<const Sequence> data) {
    params.validate();
    const int out_dim = params.readout.out_dim;
    const double n = static_cast<double>(count_targets(data, out_dim));
    const auto H = static_cast<std::size_t>(params.hidden_dim);
    const auto I = static_cast<std::size_t>(params.input_dim);
    const std::size_t cols = I + H;

    LossGradient out{0.0, LstmParams::zeros(params.input_dim, params.hidden_dim, out_dim)};
    auto &g = out.grad;

    struct Tape {
        std::vector<double> x, h_prev, c_prev, c, tanh_c;
        GateActivations a;
        std::vector<double> d_output;
    };

    for (const auto &seq : data) {
        const std::size_t T = seq.inputs.size();
        std::vector<Tape> tape(T);
        std::vector<double> c(H, 0.0), h(H, 0.0);
        for (std::size_t t = 0; t < T; ++t) {
            auto &st = tape[t];
            st.x = seq.inputs[t];
            st.h_prev = h;
            st.c_prev = c;
            auto step = cell_step(c, h, st.x, params);
            c = std::move(step.c);
            h = std::move(step.h);
            st.a = std::move(step.activations);
            st.c = c;
            st.tanh_c.resize(H);
            for (std::size_t j = 0; j < H; ++j) {
                st.tanh_c[j] = std::tanh(c[j]);
            }
            const auto y = params.readout.apply(h);
            st.d_output.assign(y.size(), 0.0);
            for (std::size_t r = 0; r < y.size(); ++r) {
                const double target = seq.targets[t][r];
                if (!has_target(target)) {
                    continue;
                }
                const double residual = y[r] - target;
                out.loss += residual * residual / n;
                st.d_output[r] = 2.0 * residual / n;
                for (std::size_t k = 0; k < H; ++k) {
                    g.readout.weights[r * H + k] += st.d_output[r] * h[k];
                }
                g.readout.bias[r] += st.d_output[r];
            }
        }

        std::vector<double> dh_next(H, 0.0), dc_next(H, 0.0);
        for (std::size_t t = T; t-- > 0;) {
            const auto &st = tape[t];
            const auto &a = st.a;
            std::vector<double> dh = dh_next;
            for (std::size_t r = 0; r < st.d_output.size(); ++r) {
                for (std::size_t k = 0; k < H; ++k) {
                    dh[k] += params.readout.weights[r * H + k] * st.d_output[r];
                }
            }
            std::array<std::vector<double>, 4> dz;
            for (auto &v : dz) {
                v.assign(H, 0.0);
            }
            for (std::size_t j = 0; j < H; ++j) {
                const double dc = dc_next[j] + dh[j] * a.o[j] * (1.0 - st.tanh_c[j] * st.tanh_c[j]);
                dc_next[j] = dc * a.f[j];
                dz[0][j] = dc * st.c_prev[j] * a.f[j] * (1.0 - a.f[j]);
                dz[1][j] = dc * a.c_tilde[j] * a.i[j] * (1.0 - a.i[j]);
                dz[2][j] = dh[j] * st.tanh_c[j] * a.o[j] * (1.0 - a.o[j]);
                dz[3][j] = dc * a.i[j] * (1.0 - a.c_tilde[j] * a.c_tilde[j]);
            }
            std::vector<double> dh_prev(H, 0.0);
            for (std::size_t k = 0; k < 4; ++k) {
                for (std::size_t r = 0; r < H; ++r) {
                    const double d = dz[k][r];
                    for (std::size_t col = 0; col < I; ++col) {
                        g.weights[k][r * cols + col] += d * st.x[col];
                    }
                    for (std::size_t col = 0; col < H; ++col) {
                        g.weights[k][r * cols + I + col] += d * st.h_prev[col];
                        dh_prev[col] += params.weights[k][r * cols + I + col] * d;
                    }
                    g.biases[k][r] += d;
                }
            }
            dh_next = std::move(dh_prev);
        }
    }
    return out;
}

TrainResult train(std::span<const Sequence> data, const LstmParams &initial,
                  const TrainSettings &settings) {
    require(settings.learning_rate > 0.0, "learning_rate must be positive");
    require(settings.iterations >= 0, "iterations must be non-negative");
    TrainResult result{initial, {}};
    StepRule rule(settings.optimizer);
    for (int iter = 0; iter < settings.iterations; ++iter) {
        auto lg = loss_and_gradient(result.params, data);
        if (!std::isfinite(lg.loss)) {
            throw DivergenceError("LSTM training diverged at iteration " + std::to_string(iter));
        }
        result.loss_history.push_back(lg.loss);
        std::vector<double> flat;
        for_each_parameter(lg.grad, [&flat](double &v) { flat.push_back(v); });
        rule.begin_step();
        std::size_t q = 0;
        for_each_parameter(result.params, [&](double &v) {
            v -= settings.learning_rate * rule.direction(q, flat[q]);
            ++q;
        });
    }
    const double final_loss = sequence_loss(result.params, data);
    if (!std::isfinite(final_loss)) {
        throw DivergenceError("LSTM training diverged after the last update");
    }
    result.loss_history.push_back(final_loss);
    return result;
}

} // namespace qlstm::classical
