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

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "qlstm/bench.hpp"
#include "qlstm/classical_lstm.hpp"
#include "qlstm/error.hpp"
#include "qlstm/rng.hpp"

using namespace qlstm;
using namespace qlstm::classical;

namespace {

const double kTanh1 = 0.76159415595576488812; // tanh(1), tabulated

oracle::LstmCellOracle as_oracle(const LstmParams &p) {
    oracle::LstmCellOracle o{p.input_dim, p.hidden_dim, {}, {}};
    for (int g = 0; g < 4; ++g) {
        o.w.push_back(p.weights[static_cast<std::size_t>(g)]);
        o.b.push_back(p.biases[static_cast<std::size_t>(g)]);
    }
    return o;
}

std::vector<Sequence> random_sequences(Rng &rng, int n, int len, int in_dim, int out_dim) {
    std::vector<Sequence> data;
    for (int s = 0; s < n; ++s) {
        Sequence q;
        for (int t = 0; t < len; ++t) {
            std::vector<double> x(static_cast<std::size_t>(in_dim)), y(static_cast<std::size_t>(out_dim));
            for (auto &v : x) {
                v = rng.uniform(-1, 1);
            }
            for (auto &v : y) {
                v = t == 0 ? NAN : rng.uniform(-1, 1);
            }
            q.inputs.push_back(x);
            q.targets.push_back(y);
        }
        data.push_back(q);
    }
    return data;
}

} // namespace

TEST_CASE("activation functions") {
    CHECK(sigmoid(0.0) == 0.5);
    CHECK(tanh_activation(0.0) == 0.0);
    CHECK(tanh_activation(1.0) == doctest::Approx(kTanh1).epsilon(1e-15));
    CHECK(sigmoid(-800.0) >= 0.0);
    CHECK(sigmoid(800.0) <= 1.0);
}

TEST_CASE("cell step special cases") {
    SUBCASE("all-zero parameters halve the cell") {
        const auto p = LstmParams::zeros(1, 2, 1);
        const std::vector<double> c{0.8, -0.4}, h{0.3, 0.1}, x{0.5};
        const auto r = cell_step(c, h, x, p);
        CHECK(r.activations.f == std::vector<double>{0.5, 0.5});
        CHECK(r.activations.i == std::vector<double>{0.5, 0.5});
        CHECK(r.activations.o == std::vector<double>{0.5, 0.5});
        CHECK(r.activations.c_tilde == std::vector<double>{0.0, 0.0});
        CHECK(r.c == std::vector<double>{0.4, -0.2});
    }
    SUBCASE("saturated forget and input gates hold the cell") {
        auto p = LstmParams::zeros(2, 3, 1);
        Rng rng(1);
        for (auto &w : p.weights) {
            for (auto &v : w) {
                v = rng.normal(0.0, 0.1);
            }
        }
        p.biases[0].assign(3, 50.0);
        p.biases[1].assign(3, -50.0);
        const std::vector<double> c{1.5, -0.2, 0.7}, h{0.1, 0.2, 0.3}, x{0.4, -0.9};
        const auto r = cell_step(c, h, x, p);
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(std::abs(r.c[j] - c[j]) < 1e-10);
        }
    }
}

TEST_CASE("cell step matches the textbook oracle") {
    Rng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const int in = 1 + static_cast<int>(rng.bits() % 3);
        const int hid = 1 + static_cast<int>(rng.bits() % 4);
        const auto p = init_params(in, hid, 1, rng.bits());
        std::vector<double> c(static_cast<std::size_t>(hid)), h(c.size()), x(static_cast<std::size_t>(in));
        for (auto *v : {&c, &h, &x}) {
            for (auto &e : *v) {
                e = rng.uniform(-2, 2);
            }
        }
        const auto r = cell_step(c, h, x, p);
        as_oracle(p).step(c, h, x);
        for (std::size_t j = 0; j < c.size(); ++j) {
            CHECK(std::abs(r.c[j] - c[j]) < 1e-14);
            CHECK(std::abs(r.h[j] - h[j]) < 1e-14);
        }
    }
}

TEST_CASE("forward and readout") {
    const auto p = init_params(1, 3, 2, 4);
    const std::vector<std::vector<double>> seq{{0.1}, {0.5}, {-0.3}, {0.9}};
    const auto hs = forward(p, seq);
    const auto ys = predict_sequence(p, seq);
    REQUIRE(hs.size() == 4);
    REQUIRE(ys.size() == 4);
    std::vector<double> c(3, 0.0), h(3, 0.0);
    const auto o = as_oracle(p);
    for (std::size_t t = 0; t < seq.size(); ++t) {
        o.step(c, h, seq[t]);
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(std::abs(hs[t][j] - h[j]) < 1e-14);
        }
        for (int r = 0; r < 2; ++r) {
            double y = p.readout.bias[static_cast<std::size_t>(r)];
            for (int k = 0; k < 3; ++k) {
                y += p.readout.weights[static_cast<std::size_t>(r * 3 + k)] * h[static_cast<std::size_t>(k)];
            }
            CHECK(std::abs(ys[t][static_cast<std::size_t>(r)] - y) < 1e-14);
        }
    }
}

TEST_CASE("initialisation") {
    const auto p = init_params(2, 16, 1, 9);
    CHECK_NOTHROW(p.validate());
    double sum = 0.0, sq = 0.0;
    int n = 0;
    auto copy = p;
    for_each_parameter(copy, [&](double &v) {
        sum += v;
        sq += v * v;
        ++n;
    });
    CHECK(n == 4 * 16 * 18 + 4 * 16 + 16 + 1);
    const double sd = std::sqrt(sq / n - (sum / n) * (sum / n));
    CHECK(sd == doctest::Approx(0.1).epsilon(0.1));
    CHECK(init_params(2, 16, 1, 9).weights == p.weights);
    CHECK_THROWS_AS((void)init_params(0, 2, 1, 0), ValidationError);
}

TEST_CASE("backpropagation through time matches central differences") {
    Rng rng(8);
    for (int trial = 0; trial < 5; ++trial) {
        const int in = 1 + static_cast<int>(rng.bits() % 2);
        const int hid = 1 + static_cast<int>(rng.bits() % 3);
        auto p = init_params(in, hid, 2, rng.bits());
        for_each_parameter(p, [&](double &v) { v *= 5.0; });
        const auto data = random_sequences(rng, 2, 5, in, 2);
        const auto lg = loss_and_gradient(p, data);
        CHECK(lg.loss == doctest::Approx(sequence_loss(p, data)).epsilon(1e-14));

        std::vector<double> analytic;
        auto grad = lg.grad;
        for_each_parameter(grad, [&](double &v) { analytic.push_back(v); });
        std::size_t idx = 0;
        double worst = 0.0;
        auto probe = p;
        for_each_parameter(probe, [&](double &v) {
            const double keep = v;
            v = keep + 1e-5;
            const double up = sequence_loss(probe, data);
            v = keep - 1e-5;
            const double down = sequence_loss(probe, data);
            v = keep;
            worst = std::max(worst, std::abs((up - down) / 2e-5 - analytic[idx++]));
        });
        CHECK(worst <= 1e-6);
    }
}

TEST_CASE("training") {
    SUBCASE("zero gradient leaves parameters unchanged") {
        const auto p = init_params(1, 2, 1, 3);
        Rng rng(2);
        auto data = random_sequences(rng, 2, 4, 1, 1);
        for (auto &s : data) {
            s.targets = predict_sequence(p, s.inputs);
        }
        const auto r = train(data, p, {0.1, 10});
        CHECK(r.params.weights == p.weights);
        CHECK(r.params.biases == p.biases);
        CHECK(r.params.readout.weights == p.readout.weights);
    }
    SUBCASE("sine next-value prediction reaches MSE <= 0.05 in 500 iterations") {
        const auto data = bench::generate_dataset(bench::Task::sine, 1, {});
        const auto split = bench::split_dataset(data);
        const auto r = train(split.train, init_params(1, 8, 1, 1), {0.1, 500});
        CHECK(r.loss_history.size() == 501);
        CHECK(r.loss_history.back() <= 0.05);
    }
    SUBCASE("divergence") {
        const auto p = init_params(1, 2, 1, 3);
        Rng rng(2);
        auto data = random_sequences(rng, 1, 3, 1, 1);
        for (auto &s : data) {
            for (auto &y : s.targets) {
                y = {1e200};
            }
        }
        CHECK_THROWS_AS((void)train(data, p, {1e200, 5}), DivergenceError);
    }
}

TEST_CASE("checkpoint round trip") {
    const auto p = init_params(2, 3, 1, 5);
    const std::vector<double> history{0.9, 0.3, 0.1};
    std::vector<double> back_history;
    const auto back = checkpoint_from_json(checkpoint_to_json(p, history), &back_history);
    CHECK(back.weights == p.weights);
    CHECK(back.biases == p.biases);
    CHECK(back.readout.weights == p.readout.weights);
    CHECK(back.readout.bias == p.readout.bias);
    CHECK(back_history == history);
    CHECK_THROWS_AS((void)checkpoint_from_json("{}"), ValidationError);
}
