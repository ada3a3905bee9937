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

#include "qlstm/statevector.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>

#include "qlstm/error.hpp"
#include "qlstm/rng.hpp"

namespace qlstm::sim {

using detail::require;

namespace {

constexpr double kUnitaryTol = 1e-10;

std::atomic<std::uint64_t> g_circuit_evaluations{0};
std::atomic<std::uint64_t> g_amplitude_updates{0};

void count_update(std::size_t amplitudes) {
    g_amplitude_updates.fetch_add(amplitudes, std::memory_order_relaxed);
}

void check_qubit(const QuantumState &state, int q, const char *what) {
    require(q >= 0 && q < state.n_qubits(),
            std::string(what) + " qubit " + std::to_string(q) + " out of range for " +
                std::to_string(state.n_qubits()) + "-qubit state");
}

std::uint64_t mask_of(std::span<const int> qubits) {
    std::uint64_t m = 0;
    for (int q : qubits) {
        m |= std::uint64_t{1} << q;
    }
    return m;
}

void check_distinct(std::vector<int> qubits, const char *what) {
    std::sort(qubits.begin(), qubits.end());
    require(std::adjacent_find(qubits.begin(), qubits.end()) == qubits.end(),
            std::string(what) + ": qubit indices must be pairwise distinct");
}

void check_register(std::span<const int> qubits, int n_qubits) {
    require(!qubits.empty(), "QFT register must not be empty");
    for (std::size_t i = 0; i < qubits.size(); ++i) {
        require(qubits[i] >= 0 && qubits[i] < n_qubits, "QFT qubit out of range");
        if (i > 0) {
            require(qubits[i] == qubits[i - 1] + 1,
                    "QFT register must be contiguous and ascending");
        }
    }
}

// Index with a zero bit inserted at position `bit`.
inline std::uint64_t insert_zero(std::uint64_t i, int bit) {
    const std::uint64_t low = i & ((std::uint64_t{1} << bit) - 1);
    return ((i >> bit) << (bit + 1)) | low;
}

void validate_indices(const CircuitOp &op, int n_qubits) {
    auto in_range = [n_qubits](int q) { return q >= 0 && q < n_qubits; };
    std::visit(
        [&](const auto &o) {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, GateOp>) {
                require(in_range(o.target), "gate target out of range");
                for (int c : o.controls) {
                    require(in_range(c), "gate control out of range");
                    require(c != o.target, "gate target appears among its controls");
                }
                check_distinct(o.controls, "gate controls");
            } else if constexpr (std::is_same_v<T, SwapOp>) {
                require(in_range(o.a) && in_range(o.b), "swap qubit out of range");
                std::vector<int> all = o.controls;
                all.push_back(o.a);
                all.push_back(o.b);
                for (int c : o.controls) {
                    require(in_range(c), "swap control out of range");
                }
                check_distinct(all, "swap");
            } else {
                check_register(o.qubits, n_qubits);
            }
        },
        op);
}

std::vector<double> cumulative(const QuantumState &state) {
    std::vector<double> cdf(state.dimension());
    double acc = 0.0;
    for (std::size_t i = 0; i < cdf.size(); ++i) {
        acc += std::norm(state[i]);
        cdf[i] = acc;
    }
    return cdf;
}

// Smallest index whose cumulative probability exceeds u * total. Outcomes with
// zero probability are never returned.
std::uint64_t inverse_cdf(const std::vector<double> &cdf, double u) {
    const double target = u * cdf.back();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
    if (it != cdf.end()) {
        return static_cast<std::uint64_t>(it - cdf.begin());
    }
    // u * total rounded up to the total: fall back to the last reachable outcome.
    std::size_t idx = cdf.size() - 1;
    while (idx > 0 && cdf[idx] == cdf[idx - 1]) {
        --idx;
    }
    return idx;
}

} // namespace

// ---------------------------------------------------------------- QuantumState

QuantumState::QuantumState(int n_qubits, int qubit_cap) : n_qubits_(n_qubits) {
    require(n_qubits >= 1, "n_qubits must be positive");
    require(qubit_cap <= 62, "qubit cap above 62 is not addressable");
    require(n_qubits <= qubit_cap, "n_qubits " + std::to_string(n_qubits) +
                                       " exceeds the qubit cap of " + std::to_string(qubit_cap));
    amplitudes_.assign(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
    amplitudes_[0] = 1.0;
}

QuantumState QuantumState::from_amplitudes(std::vector<Complex> amplitudes, int qubit_cap) {
    const std::size_t dim = amplitudes.size();
    require(dim >= 2 && (dim & (dim - 1)) == 0, "amplitude count must be a power of two >= 2");
    int n = 0;
    while ((std::size_t{1} << n) < dim) {
        ++n;
    }
    require(n <= qubit_cap, "state exceeds the qubit cap");
    QuantumState s;
    s.n_qubits_ = n;
    s.amplitudes_ = std::move(amplitudes);
    s.normalize();
    return s;
}

double QuantumState::norm_squared() const {
    double acc = 0.0;
    for (const auto &a : amplitudes_) {
        acc += std::norm(a);
    }
    return acc;
}

void QuantumState::normalize() {
    const double n2 = norm_squared();
    require(n2 > 0.0 && std::isfinite(n2), "cannot normalize a zero or non-finite state");
    const double inv = 1.0 / std::sqrt(n2);
    for (auto &a : amplitudes_) {
        a *= inv;
    }
}

QuantumState new_basis_state(int n_qubits, std::uint64_t index, int qubit_cap) {
    QuantumState s(n_qubits, qubit_cap);
    require(index < s.dimension(), "basis index " + std::to_string(index) + " out of range");
    s.amplitudes()[0] = 0.0;
    s.amplitudes()[index] = 1.0;
    return s;
}

// ------------------------------------------------------------------- Unitary2

Unitary2::Unitary2(Complex m00, Complex m01, Complex m10, Complex m11) : m_{m00, m01, m10, m11} {
    require(unitarity_error() <= kUnitaryTol, "matrix is not unitary");
}

Unitary2 Unitary2::adjoint() const {
    return {std::conj(m_[0]), std::conj(m_[2]), std::conj(m_[1]), std::conj(m_[3])};
}

Unitary2 Unitary2::operator*(const Unitary2 &rhs) const {
    const auto &a = *this;
    return {a(0, 0) * rhs(0, 0) + a(0, 1) * rhs(1, 0), a(0, 0) * rhs(0, 1) + a(0, 1) * rhs(1, 1),
            a(1, 0) * rhs(0, 0) + a(1, 1) * rhs(1, 0), a(1, 0) * rhs(0, 1) + a(1, 1) * rhs(1, 1)};
}

double Unitary2::unitarity_error() const {
    double err = 0.0;
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            Complex acc = std::conj(m_[r]) * m_[c] + std::conj(m_[2 + r]) * m_[2 + c];
            if (r == c) {
                acc -= 1.0;
            }
            err = std::max(err, std::abs(acc));
        }
    }
    return err;
}

Unitary2 standard_gate(GateKind kind) {
    using std::numbers::sqrt2;
    constexpr Complex zero{0.0, 0.0};
    constexpr Complex one{1.0, 0.0};
    switch (kind) {
    case GateKind::H:
        return {1.0 / sqrt2, 1.0 / sqrt2, 1.0 / sqrt2, -1.0 / sqrt2};
    case GateKind::S:
        return {one, zero, zero, Complex{0.0, 1.0}};
    case GateKind::T:
        return {one, zero, zero, std::polar(1.0, std::numbers::pi / 4.0)};
    case GateKind::X:
        return {zero, one, one, zero};
    case GateKind::Z:
        return {one, zero, zero, -one};
    case GateKind::Rx:
    case GateKind::Ry:
    case GateKind::Rz:
        break;
    }
    detail::fail("rotation gates require an angle");
}

Unitary2 standard_gate(GateKind kind, double angle) {
    require(std::isfinite(angle), "gate angle must be finite");
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    switch (kind) {
    case GateKind::Rx:
        return {c, Complex{0.0, -s}, Complex{0.0, -s}, c};
    case GateKind::Ry:
        return {c, -s, s, c};
    case GateKind::Rz:
        return {Complex{c, -s}, 0.0, 0.0, Complex{c, s}};
    default:
        break;
    }
    detail::fail("only Rx, Ry and Rz take an angle");
}

Unitary2 phase_gate(double phi) { return {1.0, 0.0, 0.0, std::polar(1.0, phi)}; }

// -------------------------------------------------------------------- Circuit

Circuit::Circuit(int n_qubits) : n_qubits_(n_qubits) {
    require(n_qubits >= 1, "circuit needs at least one qubit");
}

Circuit &Circuit::add(CircuitOp op) {
    validate_indices(op, n_qubits_);
    ops_.push_back(std::move(op));
    return *this;
}

Circuit &Circuit::gate(const Unitary2 &u, int target, std::vector<int> controls) {
    return add(GateOp{u, target, std::move(controls)});
}

void Circuit::replace(std::size_t index, CircuitOp op) {
    require(index < ops_.size(), "op index out of range");
    validate_indices(op, n_qubits_);
    ops_[index] = std::move(op);
}

// -------------------------------------------------------------------- kernels

void apply_gate(QuantumState &state, const GateOp &op) {
    check_qubit(state, op.target, "target");
    for (int c : op.controls) {
        check_qubit(state, c, "control");
        require(c != op.target, "gate target appears among its controls");
    }
    const int t = op.target;
    const std::uint64_t cmask = mask_of(op.controls);
    const std::uint64_t tbit = std::uint64_t{1} << t;
    const Complex u00 = op.gate(0, 0), u01 = op.gate(0, 1);
    const Complex u10 = op.gate(1, 0), u11 = op.gate(1, 1);
    auto amps = state.amplitudes();
    const std::uint64_t half = state.dimension() >> 1;
    for (std::uint64_t i = 0; i < half; ++i) {
        const std::uint64_t i0 = insert_zero(i, t);
        if ((i0 & cmask) != cmask) {
            continue;
        }
        const std::uint64_t i1 = i0 | tbit;
        const Complex a0 = amps[i0];
        const Complex a1 = amps[i1];
        amps[i0] = u00 * a0 + u01 * a1;
        amps[i1] = u10 * a0 + u11 * a1;
    }
    count_update(state.dimension());
}

void apply_swap(QuantumState &state, const SwapOp &op) {
    check_qubit(state, op.a, "swap");
    check_qubit(state, op.b, "swap");
    for (int c : op.controls) {
        check_qubit(state, c, "control");
    }
    std::vector<int> all = op.controls;
    all.push_back(op.a);
    all.push_back(op.b);
    check_distinct(all, "swap");
    const std::uint64_t cmask = mask_of(op.controls);
    const std::uint64_t abit = std::uint64_t{1} << op.a;
    const std::uint64_t bbit = std::uint64_t{1} << op.b;
    auto amps = state.amplitudes();
    // Visit each index with bit a = 1, bit b = 0 once; its partner has them exchanged.
    for (std::uint64_t i = 0; i < state.dimension(); ++i) {
        if ((i & abit) == 0 || (i & bbit) != 0 || (i & cmask) != cmask) {
            continue;
        }
        std::swap(amps[i], amps[(i & ~abit) | bbit]);
    }
    count_update(state.dimension());
}

void apply_cswap(QuantumState &state, int control, int a, int b) {
    apply_swap(state, SwapOp{a, b, {control}});
}

void apply_qft(QuantumState &state, std::span<const int> qubits) {
    check_register(qubits, state.n_qubits());
    const int m = static_cast<int>(qubits.size());
    const Unitary2 h = standard_gate(GateKind::H);
    // Highest register qubit first; it accumulates the phase of output bit 0.
    for (int k = m - 1; k >= 0; --k) {
        apply_gate(state, GateOp{h, qubits[k], {}});
        for (int l = k - 1; l >= 0; --l) {
            const double angle = 2.0 * std::numbers::pi / std::ldexp(1.0, k - l + 1);
            apply_gate(state, GateOp{phase_gate(angle), qubits[k], {qubits[l]}});
        }
    }
    for (int b = 0; b < m / 2; ++b) {
        apply_swap(state, SwapOp{qubits[b], qubits[m - 1 - b], {}});
    }
}

void apply_inverse_qft(QuantumState &state, std::span<const int> qubits) {
    check_register(qubits, state.n_qubits());
    const int m = static_cast<int>(qubits.size());
    const Unitary2 h = standard_gate(GateKind::H);
    for (int b = 0; b < m / 2; ++b) {
        apply_swap(state, SwapOp{qubits[b], qubits[m - 1 - b], {}});
    }
    for (int k = 0; k < m; ++k) {
        for (int l = 0; l < k; ++l) {
            const double angle = -2.0 * std::numbers::pi / std::ldexp(1.0, k - l + 1);
            apply_gate(state, GateOp{phase_gate(angle), qubits[k], {qubits[l]}});
        }
        apply_gate(state, GateOp{h, qubits[k], {}});
    }
}

void apply_op(QuantumState &state, const CircuitOp &op) {
    std::visit(
        [&state](const auto &o) {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, GateOp>) {
                apply_gate(state, o);
            } else if constexpr (std::is_same_v<T, SwapOp>) {
                apply_swap(state, o);
            } else if (o.inverse) {
                apply_inverse_qft(state, o.qubits);
            } else {
                apply_qft(state, o.qubits);
            }
        },
        op);
}

void apply_circuit(QuantumState &state, const Circuit &circuit) {
    require(circuit.n_qubits() <= state.n_qubits(), "circuit is wider than the state");
    for (const auto &op : circuit.ops()) {
        apply_op(state, op);
    }
}

QuantumState run_circuit(const Circuit &circuit, int qubit_cap) {
    QuantumState state(circuit.n_qubits(), qubit_cap);
    apply_circuit(state, circuit);
    g_circuit_evaluations.fetch_add(1, std::memory_order_relaxed);
    return state;
}

void apply_controlled_matrix(QuantumState &state, std::span<const Complex> matrix,
                             std::span<const int> targets, std::span<const int> controls) {
    require(!targets.empty(), "controlled matrix needs at least one target");
    const std::size_t sub = std::size_t{1} << targets.size();
    require(matrix.size() == sub * sub, "matrix size does not match the target count");
    std::vector<int> all(targets.begin(), targets.end());
    all.insert(all.end(), controls.begin(), controls.end());
    for (int q : all) {
        check_qubit(state, q, "matrix");
    }
    check_distinct(all, "controlled matrix");

    const std::uint64_t tmask = mask_of(targets);
    const std::uint64_t cmask = mask_of(controls);
    std::vector<std::uint64_t> offsets(sub, 0);
    for (std::size_t s = 0; s < sub; ++s) {
        for (std::size_t b = 0; b < targets.size(); ++b) {
            if ((s >> b) & 1U) {
                offsets[s] |= std::uint64_t{1} << targets[b];
            }
        }
    }
    auto amps = state.amplitudes();
    std::vector<Complex> in(sub), out(sub);
    for (std::uint64_t base = 0; base < state.dimension(); ++base) {
        if ((base & tmask) != 0 || (base & cmask) != cmask) {
            continue;
        }
        for (std::size_t s = 0; s < sub; ++s) {
            in[s] = amps[base | offsets[s]];
        }
        for (std::size_t r = 0; r < sub; ++r) {
            Complex acc{0.0, 0.0};
            for (std::size_t c = 0; c < sub; ++c) {
                acc += matrix[r * sub + c] * in[c];
            }
            out[r] = acc;
        }
        for (std::size_t s = 0; s < sub; ++s) {
            amps[base | offsets[s]] = out[s];
        }
    }
    count_update(state.dimension());
}

// ---------------------------------------------------------------- measurement

std::vector<double> probabilities(const QuantumState &state) {
    // Divide by the total mass so rounding in the amplitudes does not leak into
    // the distribution: H|0> gives (0.5, 0.5) exactly, not 0.4999...
    std::vector<double> p(state.dimension());
    double total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = std::norm(state[i]);
        total += p[i];
    }
    for (auto &v : p) {
        v /= total;
    }
    return p;
}

double expectation_z(const QuantumState &state, int qubit) {
    check_qubit(state, qubit, "readout");
    const std::uint64_t bit = std::uint64_t{1} << qubit;
    double acc = 0.0;
    for (std::uint64_t i = 0; i < state.dimension(); ++i) {
        const double p = std::norm(state[i]);
        acc += (i & bit) ? -p : p;
    }
    return std::clamp(acc, -1.0, 1.0);
}

double probability_one(const QuantumState &state, int qubit) {
    check_qubit(state, qubit, "readout");
    const std::uint64_t bit = std::uint64_t{1} << qubit;
    double acc = 0.0;
    for (std::uint64_t i = 0; i < state.dimension(); ++i) {
        if (i & bit) {
            acc += std::norm(state[i]);
        }
    }
    return acc;
}

std::string to_bitstring(std::uint64_t index, int n_qubits) {
    std::string s(static_cast<std::size_t>(n_qubits), '0');
    for (int q = 0; q < n_qubits; ++q) {
        if ((index >> q) & 1U) {
            s[static_cast<std::size_t>(n_qubits - 1 - q)] = '1';
        }
    }
    return s;
}

std::string MeasurementOutcome::bitstring() const { return to_bitstring(index, n_qubits); }

MeasurementOutcome measure_all(QuantumState &state, std::uint64_t rng_seed) {
    Rng rng(rng_seed);
    const auto cdf = cumulative(state);
    const std::uint64_t idx = inverse_cdf(cdf, rng.uniform());
    MeasurementOutcome out{idx, state.n_qubits(), std::norm(state[idx])};
    auto amps = state.amplitudes();
    std::fill(amps.begin(), amps.end(), Complex{0.0, 0.0});
    amps[idx] = 1.0;
    return out;
}

Histogram sample_counts(const QuantumState &state, std::uint64_t shots, std::uint64_t rng_seed) {
    require(shots >= 1, "shots must be positive");
    Rng rng(rng_seed);
    const auto cdf = cumulative(state);
    Histogram counts;
    for (std::uint64_t s = 0; s < shots; ++s) {
        ++counts[inverse_cdf(cdf, rng.uniform())];
    }
    return counts;
}

WorkCounters work_counters() {
    return {g_circuit_evaluations.load(std::memory_order_relaxed),
            g_amplitude_updates.load(std::memory_order_relaxed)};
}

void reset_work_counters() {
    g_circuit_evaluations.store(0, std::memory_order_relaxed);
    g_amplitude_updates.store(0, std::memory_order_relaxed);
}

} // namespace qlstm::sim
