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
 * Small-scale quantum principal component analysis.
 *
 * The covariance C = X^T X is trace-normalized to C~ = C / tr(C), whose
 * eigenvalues lie in [0, 1] and sum to 1, and exponentiated classically into
 * U = exp(2 pi i C~). Phase estimation on an eigenvector of C~ then reads the
 * eigenvalue out as an m-bit phase.
 */
#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "qlstm/statevector.hpp"

namespace qlstm::qpca {

inline constexpr int kMaxColumns = 8;
inline constexpr int kMaxAncillas = 10;

/// Row-major real matrix; rows are samples, columns are features.
struct DataMatrix {
    int rows{0};
    int cols{0};
    std::vector<double> values;

    [[nodiscard]] double at(int i, int j) const {
        return values[static_cast<std::size_t>(i * cols + j)];
    }
    [[nodiscard]] double frobenius_norm() const;
    void validate() const;

    static DataMatrix from_rows(const std::vector<std::vector<double>> &rows);
};

/// (1 / ||X||_F) sum_ij X_ij |i>|j>. The row register occupies the high
/// qubits, the column register the low ones; each has at least one qubit.
[[nodiscard]] sim::QuantumState prepare_data_state(const DataMatrix &x);

/// C / tr(C) as a dense d x d row-major matrix.
[[nodiscard]] std::vector<double> normalized_covariance(const DataMatrix &x);

struct CovarianceUnitary {
    int dim{0};
    std::vector<sim::Complex> unitary;             ///< exp(2 pi i C~), row major
    std::vector<double> eigenvalues;               ///< of C~, descending
    std::vector<std::vector<double>> eigenvectors; ///< unit norm, matching order

    [[nodiscard]] double unitarity_error() const;
};

[[nodiscard]] CovarianceUnitary covariance_unitary(const DataMatrix &x);

struct PhaseEstimate {
    int ancillas{0};
    std::vector<double> distribution; ///< exact outcome probabilities, length 2^m
    sim::Histogram counts;            ///< sampled outcomes; empty when shots == 0

    /// Most frequent sampled outcome, or the most probable one without shots.
    [[nodiscard]] std::uint64_t modal() const;
    [[nodiscard]] double modal_phase() const;
};

/// Textbook phase estimation: m Hadamards, controlled U^(2^k) with ancilla k
/// as control, inverse QFT on the ancillas, computational-basis readout.
/// `unitary` is dim x dim (row major), padded internally to a power of two.
[[nodiscard]] PhaseEstimate phase_estimate(std::span<const sim::Complex> unitary, int dim,
                                           std::span<const sim::Complex> eigenvector, int ancillas,
                                           std::uint64_t shots, std::uint64_t seed);

struct PcaResult {
    int ancillas{0};
    std::vector<double> phases;                  ///< modal measured phase per component
    std::vector<std::uint64_t> counts;           ///< shots landing on that phase (0 when exact)
    std::vector<double> modal_probability;       ///< exact probability of the modal outcome
    std::vector<double> eigenvalues;             ///< classical eigenvalue of C~ for the component
    std::vector<std::vector<double>> components; ///< unit-norm principal directions
    bool degenerate{false}; ///< two eigenvalues closer than 2^-m; ranking order then unspecified
};

/// Runs phase estimation on every eigenvector of C~, ranks by measured
/// phase (descending) and keeps the top k.
[[nodiscard]] PcaResult qpca_top_k(const DataMatrix &x, int k, int ancillas, std::uint64_t shots,
                                   std::uint64_t seed);

/// Plain numeric CSV, one row per line, no header.
[[nodiscard]] DataMatrix read_matrix_csv(std::istream &in);
/// {phases, counts, components, eigenvalues, modal_probability, degenerate, ancillas}
[[nodiscard]] std::string result_to_json(const PcaResult &result);

} // namespace qlstm::qpca
