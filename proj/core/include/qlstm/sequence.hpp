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
 * Types shared by the hybrid and classical recurrent models: the cell
 * state, gate activations, sequence datasets and the linear readout.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace qlstm {

/// Cell state c and hidden state h, one entry per hidden unit.
struct CellState {
    std::vector<double> c;
    std::vector<double> h;

    static CellState zeros(int hidden_dim) {
        const auto n = static_cast<std::size_t>(hidden_dim);
        return {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    }
};

/// f, i, o in [0, 1]; c_tilde in [-1, 1].
struct GateActivations {
    std::vector<double> f;
    std::vector<double> i;
    std::vector<double> o;
    std::vector<double> c_tilde;
};

/// One input vector per timestep and one target vector per timestep.
/// Non-finite target entries mark timesteps that carry no target (for
/// example the first D steps of a delayed-echo sequence).
struct Sequence {
    std::vector<std::vector<double>> inputs;
    std::vector<std::vector<double>> targets;
};

inline bool has_target(double y) { return std::isfinite(y); }

/// y = W h + b with W stored row major (out_dim x hidden_dim).
struct Readout {
    int out_dim{1};
    int hidden_dim{1};
    std::vector<double> weights;
    std::vector<double> bias;

    static Readout zeros(int out_dim, int hidden_dim) {
        return {out_dim, hidden_dim,
                std::vector<double>(static_cast<std::size_t>(out_dim * hidden_dim), 0.0),
                std::vector<double>(static_cast<std::size_t>(out_dim), 0.0)};
    }

    [[nodiscard]] std::vector<double> apply(std::span<const double> h) const {
        std::vector<double> y(bias);
        for (int r = 0; r < out_dim; ++r) {
            for (int k = 0; k < hidden_dim; ++k) {
                y[static_cast<std::size_t>(r)] +=
                    weights[static_cast<std::size_t>(r * hidden_dim + k)] *
                    h[static_cast<std::size_t>(k)];
            }
        }
        return y;
    }
};

} // namespace qlstm
