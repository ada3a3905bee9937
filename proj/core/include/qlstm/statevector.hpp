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
 * Dense statevector simulation over n qubits.
 *
 * Basis index convention: bit k of a basis index is the state of qubit k,
 * so qubit 0 is the least significant bit. Bitstrings printed by this
 * library follow ket notation, highest qubit first: "10" means qubit 1 is
 * set and qubit 0 is clear.
 */
#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace qlstm::sim {

using Complex = std::complex<double>;

inline constexpr int kDefaultQubitCap = 20;

/// Complex amplitudes of an n-qubit register. Always normalized when
/// produced by library operations.
class QuantumState {
  public:
    /// |0...0> on n qubits. Throws if n is not in [1, cap].
    explicit QuantumState(int n_qubits, int qubit_cap = kDefaultQubitCap);

    /// Adopts an amplitude vector of length 2^n and normalizes it.
    /// Throws on wrong length or zero norm.
    static QuantumState from_amplitudes(std::vector<Complex> amplitudes,
                                        int qubit_cap = kDefaultQubitCap);

    [[nodiscard]] int n_qubits() const { return n_qubits_; }
    [[nodiscard]] std::size_t dimension() const { return amplitudes_.size(); }

    [[nodiscard]] std::span<const Complex> amplitudes() const { return amplitudes_; }
    [[nodiscard]] std::span<Complex> amplitudes() { return amplitudes_; }
    [[nodiscard]] const Complex &operator[](std::size_t i) const { return amplitudes_[i]; }

    /// Sum of squared magnitudes; 1 for a valid state.
    [[nodiscard]] double norm_squared() const;

    /// Rescales to unit norm. Throws if the norm is zero.
    void normalize();

  private:
    QuantumState() = default;

    int n_qubits_{0};
    std::vector<Complex> amplitudes_;
};

/// |index> on n qubits.
[[nodiscard]] QuantumState new_basis_state(int n_qubits, std::uint64_t index,
                                           int qubit_cap = kDefaultQubitCap);

/// 2x2 unitary, row major. Construction checks U^dagger U = I within 1e-10.
class Unitary2 {
  public:
    Unitary2(Complex m00, Complex m01, Complex m10, Complex m11);

    [[nodiscard]] const Complex &operator()(int row, int col) const { return m_[2 * row + col]; }
    [[nodiscard]] Unitary2 adjoint() const;
    [[nodiscard]] Unitary2 operator*(const Unitary2 &rhs) const;

    /// max |(U^dagger U - I)_ij|
    [[nodiscard]] double unitarity_error() const;

  private:
    Complex m_[4];
};

enum class GateKind { H, S, T, X, Z, Rx, Ry, Rz };

/// Catalog gates. The rotations use the half-angle convention
/// Rx(theta) = exp(-i theta X / 2). S = diag(1, i); Z = diag(1, -1).
/// `angle` must be given exactly for Rx/Ry/Rz.
[[nodiscard]] Unitary2 standard_gate(GateKind kind);
[[nodiscard]] Unitary2 standard_gate(GateKind kind, double angle);

/// diag(1, e^{i phi})
[[nodiscard]] Unitary2 phase_gate(double phi);

/// A 2x2 unitary on `target`, applied only where every control bit is 1.
struct GateOp {
    Unitary2 gate;
    int target{0};
    std::vector<int> controls{};
};

/// Exchanges qubits a and b; with controls, only where every control is 1.
struct SwapOp {
    int a{0};
    int b{0};
    std::vector<int> controls{};
};

/// Quantum Fourier transform on a contiguous ascending register, with the
/// final bit-reversal swaps. `inverse` selects the adjoint.
struct QftOp {
    std::vector<int> qubits;
    bool inverse{false};
};

using CircuitOp = std::variant<GateOp, SwapOp, QftOp>;

/// Ordered op list on a fixed register width.
class Circuit {
  public:
    explicit Circuit(int n_qubits);

    [[nodiscard]] int n_qubits() const { return n_qubits_; }
    [[nodiscard]] const std::vector<CircuitOp> &ops() const { return ops_; }
    [[nodiscard]] std::size_t size() const { return ops_.size(); }

    /// Appends after validating indices against the register width.
    Circuit &add(CircuitOp op);
    Circuit &gate(const Unitary2 &u, int target, std::vector<int> controls = {});
    Circuit &h(int q) { return gate(standard_gate(GateKind::H), q); }
    Circuit &x(int q) { return gate(standard_gate(GateKind::X), q); }
    Circuit &cnot(int control, int target) {
        return gate(standard_gate(GateKind::X), target, {control});
    }
    Circuit &rx(double angle, int q) { return gate(standard_gate(GateKind::Rx, angle), q); }
    Circuit &ry(double angle, int q) { return gate(standard_gate(GateKind::Ry, angle), q); }
    Circuit &rz(double angle, int q) { return gate(standard_gate(GateKind::Rz, angle), q); }

    /// Replaces op `index` in place (used for shifted parameter evaluations).
    void replace(std::size_t index, CircuitOp op);

  private:
    int n_qubits_;
    std::vector<CircuitOp> ops_;
};

void apply_gate(QuantumState &state, const GateOp &op);
void apply_swap(QuantumState &state, const SwapOp &op);
void apply_cswap(QuantumState &state, int control, int a, int b);
void apply_qft(QuantumState &state, std::span<const int> qubits);
void apply_inverse_qft(QuantumState &state, std::span<const int> qubits);
void apply_op(QuantumState &state, const CircuitOp &op);
void apply_circuit(QuantumState &state, const Circuit &circuit);

/// Runs `circuit` on |0...0> and returns the final state. Counted in
/// `circuit_evaluations()`.
[[nodiscard]] QuantumState run_circuit(const Circuit &circuit, int qubit_cap = kDefaultQubitCap);

/// Dense 2^r x 2^r unitary (row major) acting on `targets` (targets[0] is
/// the least significant bit of the sub-register), applied where every
/// control bit is 1. Used for controlled multi-qubit operators such as the
/// powers of U in phase estimation.
void apply_controlled_matrix(QuantumState &state, std::span<const Complex> matrix,
                             std::span<const int> targets, std::span<const int> controls);

/// p_i = |a_i|^2
[[nodiscard]] std::vector<double> probabilities(const QuantumState &state);

/// Sum_i (-1)^{bit(i, qubit)} |a_i|^2
[[nodiscard]] double expectation_z(const QuantumState &state, int qubit);

/// Marginal probability that `qubit` reads 1.
[[nodiscard]] double probability_one(const QuantumState &state, int qubit);

struct MeasurementOutcome {
    std::uint64_t index{0};
    int n_qubits{0};
    double probability{0.0};

    /// Ket-order bitstring, highest qubit first.
    [[nodiscard]] std::string bitstring() const;
};

/// Samples one outcome by inverse CDF over ascending basis index and
/// collapses `state` onto it.
MeasurementOutcome measure_all(QuantumState &state, std::uint64_t rng_seed);

using Histogram = std::map<std::uint64_t, std::uint64_t>;

/// Non-destructive sampling of `shots` computational-basis outcomes.
[[nodiscard]] Histogram sample_counts(const QuantumState &state, std::uint64_t shots,
                                      std::uint64_t rng_seed);

/// Ket-order bitstring of `index` on `n_qubits` qubits.
[[nodiscard]] std::string to_bitstring(std::uint64_t index, int n_qubits);

/// Process-wide counters of simulator work, for efficiency metrics.
struct WorkCounters {
    std::uint64_t circuit_evaluations{0};
    std::uint64_t amplitude_updates{0};
};
[[nodiscard]] WorkCounters work_counters();
void reset_work_counters();

} // namespace qlstm::sim
