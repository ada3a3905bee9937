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
 * Parameterized ("ansatz") circuits, the Z-expectation MSE cost, gradient
 * estimation and a plain gradient-descent trainer.
 *
 * Every bound circuit has the same shape: a Hadamard on each wire, then an
 * input-encoding rotation Ry(2 atan(x)) on each encoded wire, then the
 * parameterized layers. The model output is <Z> on qubit 0.
 */
#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "qlstm/statevector.hpp"

namespace qlstm::vqc {

enum class Axis { X, Y, Z };

/// Parameterized rotation about `axis` on `wire`, angle taken from
/// parameter slot `slot`.
struct Rotation {
    Axis axis{Axis::Y};
    int wire{0};
    int slot{0};
};

/// Fixed entangling block closing a layer. A CNOT line runs toward the
/// readout wire: CNOT(n-1 -> n-2), ..., CNOT(1 -> 0). A ring adds
/// CNOT(0 -> n-1) first when n > 2.
enum class Entangler { none, cnot_line, cnot_ring };

struct Layer {
    std::vector<Rotation> rotations;
    Entangler entangler{Entangler::none};
};

enum class Encoding {
    none,            ///< no prefix; the circuit starts from |0...0>
    hadamard_arctan, ///< H on every wire, then Ry(2 atan(x_k)) per mapped wire
};

struct AnsatzSpec {
    int n_qubits{1};
    std::vector<Layer> layers;
    int n_params{0};
    Encoding encoding{Encoding::hadamard_arctan};
    /// Input index encoded on each wire, -1 for none. Empty means identity
    /// (wire k encodes x_k) when the encoding is active.
    std::vector<int> input_map;
    /// Optional QFT over all wires between the encoding and the layers.
    bool qft_mixing{false};

    /// Length the input vector must have.
    [[nodiscard]] int input_arity() const;
    /// Throws ValidationError if the ansatz is malformed (bad wires, unused
    /// parameter slots, inconsistent input map).
    void validate() const;
};

/// Per layer: Ry then Rz on every wire, then the entangler. Slots are
/// numbered layer by layer, Ry before Rz, wire ascending.
[[nodiscard]] AnsatzSpec hardware_efficient_ansatz(int n_qubits, int n_layers,
                                                   Encoding encoding = Encoding::hadamard_arctan,
                                                   Entangler entangler = Entangler::cnot_line);

/// The ansatz used for function fitting: two wires both encoding the scalar
/// input, three hardware-efficient layers.
[[nodiscard]] AnsatzSpec activation_ansatz();

/// Ry angle encoding a real input; 0 maps to 0, the reals onto (-pi, pi).
[[nodiscard]] inline double encoding_angle(double x);

/// Location of a trainable or input-dependent rotation inside a bound circuit.
struct ParamSite {
    std::size_t op_index{0};
    int slot{0};
    int wire{0};
    Axis axis{Axis::Y};
    double angle{0.0};
};

struct InputSite {
    std::size_t op_index{0};
    int input{0};
    int wire{0};
    double angle{0.0};
};

struct BoundCircuit {
    sim::Circuit circuit;
    std::vector<ParamSite> param_sites;
    std::vector<InputSite> input_sites;
};

[[nodiscard]] BoundCircuit bind_detailed(const AnsatzSpec &spec, std::span<const double> params,
                                         std::span<const double> input);

[[nodiscard]] sim::Circuit bind(const AnsatzSpec &spec, std::span<const double> params,
                                std::span<const double> input);

/// <Z> on qubit 0 of a bound circuit. shots == 0 is exact; otherwise the
/// mean of (-1)^bit over `shots` seeded samples.
[[nodiscard]] double readout(const sim::Circuit &circuit, std::uint64_t shots, std::uint64_t seed);

[[nodiscard]] double predict(const AnsatzSpec &spec, std::span<const double> params,
                             std::span<const double> x, std::uint64_t shots = 0,
                             std::uint64_t seed = 0);

/// <Z> together with its derivatives by the parameter-shift rule.
struct ExpectationGradient {
    double value{0.0};
    std::vector<double> d_params; ///< d<Z>/d(theta_k), summed over every use of slot k
    std::vector<double> d_inputs; ///< d<Z>/d(x_j) through Ry(2 atan(x_j))
};

/// Evaluates the circuit 1 + 2 (param sites + input sites) times. With
/// shots, evaluation e uses the stream derive_seed(seed, {e}).
[[nodiscard]] ExpectationGradient expectation_with_gradient(const AnsatzSpec &spec,
                                                            std::span<const double> params,
                                                            std::span<const double> x,
                                                            std::uint64_t shots = 0,
                                                            std::uint64_t seed = 0,
                                                            bool with_input_gradient = true);

struct TrainingSample {
    std::vector<double> x;
    double y{0.0};
};

enum class GradientMode { parameter_shift, central_difference };

struct TrainConfig {
    double learning_rate{0.1};
    int max_iters{100};
    std::uint64_t seed{0};
    GradientMode gradient_mode{GradientMode::parameter_shift};
    std::uint64_t shots{0};

    void validate() const;
};

struct TrainReport {
    std::vector<double> final_params;
    std::vector<double> cost_history;
    int iterations_run{0};
};

/// (1/N) sum (predict(x_i) - y_i)^2. Sample i draws from derive_seed(seed, {i, 0}).
[[nodiscard]] double cost_mse(const AnsatzSpec &spec, std::span<const double> params,
                              std::span<const TrainingSample> data, std::uint64_t shots = 0,
                              std::uint64_t seed = 0);

inline constexpr double kCentralDifferenceStep = 1e-5;

/// dMSE/dtheta. Parameter-shift chains d<Z>/dtheta through the squared
/// residuals; central difference perturbs the cost directly with step 1e-5.
[[nodiscard]] std::vector<double> gradient(const AnsatzSpec &spec, std::span<const double> params,
                                           std::span<const TrainingSample> data,
                                           GradientMode mode = GradientMode::parameter_shift,
                                           std::uint64_t shots = 0, std::uint64_t seed = 0);

/// theta_0 ~ U(-pi, pi) from `seed`.
[[nodiscard]] std::vector<double> initial_params(const AnsatzSpec &spec, std::uint64_t seed);

inline constexpr double kStopTolerance = 1e-9;

/// Gradient descent from initial_params(spec, config.seed). Stops after
/// max_iters recorded costs, when |delta MSE| < 1e-9, or when the update
/// would not move the parameters. Throws DivergenceError on a non-finite cost.
[[nodiscard]] TrainReport train(const AnsatzSpec &spec, std::span<const TrainingSample> data,
                                const TrainConfig &config);

enum class ActivationKind { sigmoid_rescaled, tanh };

/// 41 evenly spaced x in [-2, 2] with targets tanh(x) or 2 sigmoid(x) - 1.
[[nodiscard]] std::vector<TrainingSample> activation_samples(ActivationKind kind);

[[nodiscard]] TrainReport fit_activation(ActivationKind kind, const AnsatzSpec &spec,
                                         const TrainConfig &config);

// Fixture formats: CSV with header x0,...,xk,y; report JSON with fields
// params, cost_history, iterations_run.
[[nodiscard]] std::vector<TrainingSample> read_samples_csv(std::istream &in);
void write_samples_csv(std::ostream &out, std::span<const TrainingSample> data);
[[nodiscard]] std::string report_to_json(const TrainReport &report);
[[nodiscard]] TrainReport report_from_json(const std::string &text);

inline double encoding_angle(double x) { return 2.0 * std::atan(x); }

} // namespace qlstm::vqc
