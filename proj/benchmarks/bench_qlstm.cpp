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

#include <benchmark/benchmark.h>

#include <vector>

#include "qlstm/classical_lstm.hpp"
#include "qlstm/hybrid.hpp"
#include "qlstm/variational.hpp"

using namespace qlstm;

namespace {

std::vector<std::vector<double>> ramp(int length) {
    std::vector<std::vector<double>> seq;
    for (int t = 0; t < length; ++t) {
        seq.push_back({0.1 * t - 0.5});
    }
    return seq;
}

void BM_ParameterShift(benchmark::State &state) {
    const auto spec = vqc::hardware_efficient_ansatz(static_cast<int>(state.range(0)), 2);
    const auto theta = vqc::initial_params(spec, 1);
    const std::vector<double> x(static_cast<std::size_t>(spec.input_arity()), 0.3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(vqc::expectation_with_gradient(spec, theta, x));
    }
}
BENCHMARK(BM_ParameterShift)->DenseRange(2, 6, 2);

void BM_QlstmForward(benchmark::State &state) {
    hybrid::QlstmConfig cfg;
    cfg.hidden_dim = static_cast<int>(state.range(0));
    const auto model = hybrid::init_model(cfg, 1);
    const auto seq = ramp(8);
    for (auto _ : state) {
        benchmark::DoNotOptimize(hybrid::predict_sequence(model, seq));
    }
}
BENCHMARK(BM_QlstmForward)->Arg(1)->Arg(2)->Arg(4);

void BM_QlstmGradient(benchmark::State &state) {
    hybrid::QlstmConfig cfg;
    const auto model = hybrid::init_model(cfg, 1);
    Sequence s{ramp(8), {}};
    for (int t = 0; t < 8; ++t) {
        s.targets.push_back({0.0});
    }
    const std::vector<Sequence> data{s};
    for (auto _ : state) {
        benchmark::DoNotOptimize(hybrid::loss_and_gradient(model, data));
    }
}
BENCHMARK(BM_QlstmGradient);

void BM_ClassicalForward(benchmark::State &state) {
    const auto params = classical::init_params(1, static_cast<int>(state.range(0)), 1, 1);
    const auto seq = ramp(32);
    for (auto _ : state) {
        benchmark::DoNotOptimize(classical::predict_sequence(params, seq));
    }
}
BENCHMARK(BM_ClassicalForward)->Arg(2)->Arg(8)->Arg(32);

} // namespace

BENCHMARK_MAIN();
