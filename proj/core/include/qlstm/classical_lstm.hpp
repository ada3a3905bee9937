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

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qlstm/optimizer.hpp"
#include "qlstm/sequence.hpp"

namespace qlstm::classical {

[[nodiscard]] double sigmoid(double x);
[[nodiscard]] double tanh_activation(double x);

/// Gate order in every array below: forget, input, output, candidate.
/// Each weight matrix is hidden_dim x (input_dim + hidden_dim), row major,
/// acting on concat(x, h).
struct LstmParams {
    int input_dim{1};
    int hidden_dim{1};
    std::array<std::vector<double>, 4> weights;
    std::array<std::vector<double>, 4> biases;
    Readout readout;

    [[nodiscard]] int concat_dim() const { return input_dim + hidden_dim; }
    void validate() const;

    static LstmParams zeros(int input_dim, int hidden_dim, int output_dim);
};

/// Every weight and bias ~ N(0, 0.1^2) from `seed`.
[[nodiscard]] LstmParams init_params(int input_dim, int hidden_dim, int output_dim,
                                     std::uint64_t seed);

/// f = sigmoid(W_f [x, h] + b_f), likewise i and o; c_tilde = tanh(W_c [x, h] + b_c).
[[nodiscard]] GateActivations gate_activations(const LstmParams &params,
                                               std::span<const double> x,
                                               std::span<const double> h);

struct StepResult {
    std::vector<double> c;
    std::vector<double> h;
    GateActivations activations;
};

[[nodiscard]] StepResult cell_step(std::span<const double> c_prev, std::span<const double> h_prev,
                                   std::span<const double> x_t, const LstmParams &params);

/// Hidden states h_1..h_T from zero initial state.
[[nodiscard]] std::vector<std::vector<double>> forward(const LstmParams &params,
                                                       std::span<const std::vector<double>> inputs);

[[nodiscard]] std::vector<std::vector<double>> predict_sequence(
    const LstmParams &params, std::span<const std::vector<double>> inputs);

struct LossGradient {
    double loss{0.0};
    LstmParams grad;
};

/// MSE over all present targets and its exact gradient by backpropagation
/// through time.
[[nodiscard]] LossGradient loss_and_gradient(const LstmParams &params,
                                             std::span<const Sequence> data);
[[nodiscard]] double sequence_loss(const LstmParams &params, std::span<const Sequence> data);

/// Applies fn(value&) to every trainable scalar, in a fixed order.
template <class Params, class Fn> void for_each_parameter(Params &p, Fn &&fn) {
    for (auto &w : p.weights) {
        for (auto &v : w) {
            fn(v);
        }
    }
    for (auto &b : p.biases) {
        for (auto &v : b) {
            fn(v);
        }
    }
    for (auto &v : p.readout.weights) {
        fn(v);
    }
    for (auto &v : p.readout.bias) {
        fn(v);
    }
}

struct TrainSettings {
    double learning_rate{0.1};
    int iterations{500};
    Optimizer optimizer{Optimizer::gradient_descent};
};

struct TrainResult {
    LstmParams params;
    std::vector<double> loss_history; ///< loss before each update, then the final loss
};

/// Full-batch gradient descent. Throws DivergenceError on a non-finite loss.
[[nodiscard]] TrainResult train(std::span<const Sequence> data, const LstmParams &initial,
                                const TrainSettings &settings);

// Same checkpoint layout as the hybrid model: params.{forget,input,output,
// candidate} hold {weights, bias}.
[[nodiscard]] std::string checkpoint_to_json(const LstmParams &params,
                                             std::span<const double> loss_history);
[[nodiscard]] LstmParams checkpoint_from_json(const std::string &text,
                                              std::vector<double> *loss_history = nullptr);

} // namespace qlstm::classical
