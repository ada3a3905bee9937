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

/**
 * @file
 * Hybrid quantum LSTM cell.
 *
 * Cell and hidden states are classical vectors. Each step, every hidden
 * unit of every gate family (forget, input, output, candidate) runs its own
 * parameterized circuit over input_dim + hidden_dim wires that encode
 * concat(x_t, h_{t-1}); the Z expectation of qubit 0 becomes the unit's
 * activation. f, i, o use (<Z> + 1) / 2 and the candidate uses <Z> itself.
 * The update is
 *
 *     c_t = f (*) c_{t-1} + i (*) c_tilde
 *     h_t = o (*) tanh(c_t)
 */
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qlstm/optimizer.hpp"
#include "qlstm/sequence.hpp"
#include "qlstm/statevector.hpp"
#include "qlstm/variational.hpp"

namespace qlstm::hybrid {

enum class GateFamily { forget = 0, input = 1, output = 2, candidate = 3 };

inline constexpr std::array<GateFamily, 4> kGateFamilies = {
    GateFamily::forget, GateFamily::input, GateFamily::output, GateFamily::candidate};

[[nodiscard]] const char *to_string(GateFamily g);

struct QlstmConfig {
    int input_dim{1};
    int hidden_dim{2};
    int ansatz_layers{2};
    std::uint64_t shots{0};
    std::uint64_t seed{0};
    /// Inserts a QFT over all wires after the encoding in every gate circuit.
    bool qft_mixing{false};

    [[nodiscard]] int n_wires() const { return input_dim + hidden_dim; }
    void validate() const;
};

/// The circuit layout shared by every unit of every gate family.
[[nodiscard]] vqc::AnsatzSpec gate_ansatz(const QlstmConfig &config);

/// One parameter vector per gate family, hidden_dim consecutive slices of
/// params_per_unit angles each.
struct QlstmParams {
    int params_per_unit{0};
    std::array<std::vector<double>, 4> gates;

    [[nodiscard]] std::vector<double> &operator[](GateFamily g) {
        return gates[static_cast<std::size_t>(g)];
    }
    [[nodiscard]] const std::vector<double> &operator[](GateFamily g) const {
        return gates[static_cast<std::size_t>(g)];
    }
    [[nodiscard]] std::span<const double> unit(GateFamily g, int j) const;

    static QlstmParams zeros(const QlstmConfig &config);
};

/// Angles drawn uniformly from (-pi, pi).
[[nodiscard]] QlstmParams init_params(const QlstmConfig &config, std::uint64_t seed);

/// Embedding prefix: H then Ry(2 atan(x_j)) on wire j. x = 0 leaves the
/// uniform superposition.
[[nodiscard]] sim::Circuit embed(std::span<const double> x);

/// Activations of one gate family for all hidden units. Unit j samples from
/// derive_seed(seed, {j}) when shots > 0.
[[nodiscard]] std::vector<double> gate_activation(GateFamily kind, std::span<const double> h_prev,
                                                  std::span<const double> x_t,
                                                  const QlstmParams &params,
                                                  const QlstmConfig &config, std::uint64_t shots,
                                                  std::uint64_t seed);

/// Applies c_t = f c_{t-1} + i c_tilde, h_t = o tanh(c_t) elementwise.
[[nodiscard]] CellState update_cell(const CellState &prev, const GateActivations &a);

struct StepResult {
    CellState state;
    GateActivations activations;
};

/// Replaces the quantum gate circuits, e.g. with classical stubs or forced
/// constant activations.
using ActivationHook =
    std::function<GateActivations(std::span<const double> x_t, const CellState &prev)>;

/// One recurrent step at timestep `t`. Gate family k samples from
/// derive_seed(stream_seed, {t, k}).
[[nodiscard]] StepResult cell_step(const CellState &state, std::span<const double> x_t,
                                   const QlstmParams &params, const QlstmConfig &config,
                                   std::size_t t = 0, std::uint64_t stream_seed = 0);

[[nodiscard]] StepResult cell_step(const CellState &state, std::span<const double> x_t,
                                   const ActivationHook &hook);

struct ForwardResult {
    std::vector<std::vector<double>> hidden; ///< h_1 .. h_T
    CellState final_state;
    std::vector<GateActivations> activations;
};

/// Runs the cell from c_0 = h_0 = 0. stream_seed defaults to config.seed.
[[nodiscard]] ForwardResult forward(std::span<const std::vector<double>> sequence,
                                    const QlstmParams &params, const QlstmConfig &config);
[[nodiscard]] ForwardResult forward(std::span<const std::vector<double>> sequence,
                                    const QlstmParams &params, const QlstmConfig &config,
                                    std::uint64_t stream_seed);
[[nodiscard]] ForwardResult forward(std::span<const std::vector<double>> sequence, int hidden_dim,
                                    const ActivationHook &hook,
                                    const CellState *initial = nullptr);

/// alpha_i = x_i / ||x||, zero padded to the next power of two (at least 2).
[[nodiscard]] sim::QuantumState encode_amplitude(std::span<const double> x,
                                                 int qubit_cap = sim::kDefaultQubitCap);

/// Basis-state probabilities: exact for shots == 0, else empirical frequencies.
[[nodiscard]] std::vector<double> decode(const sim::QuantumState &state, std::uint64_t shots = 0,
                                         std::uint64_t seed = 0);

// ---------------------------------------------------------------- training

struct QlstmModel {
    QlstmConfig config;
    QlstmParams params;
    Readout readout;
};

/// Circuit parameters from init_params(config, config.seed); readout weights
/// N(0, 0.1^2) and zero bias.
[[nodiscard]] QlstmModel init_model(const QlstmConfig &config, int output_dim);

struct SequenceTrainConfig {
    double learning_rate{0.1};
    int iterations{100};
    /// Separate step size for the readout layer; 0 means "same as learning_rate".
    double readout_learning_rate{0.0};
    Optimizer optimizer{Optimizer::gradient_descent};
};

struct LossGradient {
    double loss{0.0};
    QlstmParams d_params;
    Readout d_readout;
    /// Max-norm of the circuit-parameter gradient accumulated at each
    /// timestep index (over all sequences).
    std::vector<double> step_contribution;
};

/// Mean squared error over every target entry that has a value.
[[nodiscard]] double sequence_loss(const QlstmModel &model, std::span<const Sequence> data,
                                   std::uint64_t stream_seed = 0);

/// Loss and gradient. Circuit derivatives come from the parameter-shift rule
/// (including d<Z>/dh_{t-1} through the encoding angles) and are chained
/// through the c_t, h_t recursion by backpropagation through time.
[[nodiscard]] LossGradient loss_and_gradient(const QlstmModel &model,
                                             std::span<const Sequence> data,
                                             std::uint64_t stream_seed = 0);

[[nodiscard]] std::vector<std::vector<double>> predict_sequence(const QlstmModel &model,
                                                                std::span<const std::vector<double>> inputs);

struct SequenceTrainResult {
    QlstmModel model;
    std::vector<double> loss_history; ///< loss before each update, then the final loss
};

/// Full-batch gradient descent. Throws DivergenceError on a non-finite loss.
[[nodiscard]] SequenceTrainResult train_sequence(std::span<const Sequence> data,
                                                 const QlstmModel &initial,
                                                 const SequenceTrainConfig &settings);
[[nodiscard]] SequenceTrainResult train_sequence(std::span<const Sequence> data,
                                                 const QlstmConfig &config, int output_dim,
                                                 const SequenceTrainConfig &settings);

// Checkpoint JSON: {config, params: {forget, input, output, candidate},
// readout: {weights, bias}, loss_history}.
[[nodiscard]] std::string checkpoint_to_json(const QlstmModel &model,
                                             std::span<const double> loss_history);
[[nodiscard]] QlstmModel checkpoint_from_json(const std::string &text,
                                              std::vector<double> *loss_history = nullptr);

} // namespace qlstm::hybrid
