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

#include "qlstm/rng.hpp"
#include "qlstm/statevector.hpp"

using namespace qlstm;

namespace {

sim::Circuit layered(int n, int depth) {
    sim::Circuit c(n);
    Rng rng(42);
    for (int d = 0; d < depth; ++d) {
        for (int q = 0; q < n; ++q) {
            c.ry(rng.uniform(-3.0, 3.0), q);
        }
        for (int q = 0; q + 1 < n; ++q) {
            c.cnot(q, q + 1);
        }
    }
    return c;
}

void BM_LayeredCircuit(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    const auto c = layered(n, 10);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sim::run_circuit(c));
    }
    state.SetComplexityN(1LL << n);
}
BENCHMARK(BM_LayeredCircuit)->DenseRange(4, 16, 4)->Complexity(benchmark::oN);

void BM_Qft(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    std::vector<int> reg(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) {
        reg[static_cast<std::size_t>(q)] = q;
    }
    auto s = sim::run_circuit(layered(n, 1));
    for (auto _ : state) {
        sim::apply_qft(s, reg);
        benchmark::ClobberMemory();
    }
}
BENCHMARK(BM_Qft)->DenseRange(4, 14, 2);

void BM_SampleCounts(benchmark::State &state) {
    const auto s = sim::run_circuit(layered(10, 4));
    const auto shots = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(sim::sample_counts(s, shots, 7));
    }
}
BENCHMARK(BM_SampleCounts)->Arg(1000)->Arg(10000);

} // namespace

BENCHMARK_MAIN();
