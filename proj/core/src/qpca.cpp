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

#include "qlstm/qpca.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numbers>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "qlstm/error.hpp"
#include "qlstm/rng.hpp"

namespace qlstm::qpca {

using detail::require;
using sim::Complex;

namespace {

int register_bits(int size) {
    int bits = 1;
    while ((1 << bits) < size) {
        ++bits;
    }
    return bits;
}

using CMatrix = std::vector<Complex>;

CMatrix multiply(const CMatrix &a, const CMatrix &b, std::size_t n) {
    CMatrix c(n * n, Complex{0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const Complex aik = a[i * n + k];
            for (std::size_t j = 0; j < n; ++j) {
                c[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    return c;
}

} // namespace

double DataMatrix::frobenius_norm() const {
    double acc = 0.0;
    for (double v : values) {
        acc += v * v;
    }
    return std::sqrt(acc);
}

void DataMatrix::validate() const {
    require(rows >= 1 && cols >= 1, "data matrix must be non-empty");
    require(cols <= kMaxColumns, "at most 8 columns are supported");
    require(values.size() == static_cast<std::size_t>(rows * cols), "data matrix shape mismatch");
    for (double v : values) {
        require(std::isfinite(v), "data matrix entries must be finite");
    }
    require(frobenius_norm() > 0.0, "data matrix must not be all zero");
}

DataMatrix DataMatrix::from_rows(const std::vector<std::vector<double>> &rows) {
    require(!rows.empty() && !rows.front().empty(), "data matrix must be non-empty");
    DataMatrix m{static_cast<int>(rows.size()), static_cast<int>(rows.front().size()), {}};
    for (const auto &r : rows) {
        require(static_cast<int>(r.size()) == m.cols, "ragged data matrix");
        m.values.insert(m.values.end(), r.begin(), r.end());
    }
    return m;
}

sim::QuantumState prepare_data_state(const DataMatrix &x) {
    x.validate();
    const int row_bits = register_bits(x.rows);
    const int col_bits = register_bits(x.cols);
    std::vector<Complex> amps(std::size_t{1} << (row_bits + col_bits), 0.0);
    const double inv = 1.0 / x.frobenius_norm();
    for (int i = 0; i < x.rows; ++i) {
        for (int j = 0; j < x.cols; ++j) {
            amps[(static_cast<std::size_t>(i) << col_bits) | static_cast<std::size_t>(j)] =
                x.at(i, j) * inv;
        }
    }
    return sim::QuantumState::from_amplitudes(std::move(amps));
}

std::vector<double> normalized_covariance(const DataMatrix &x) {
    x.validate();
    const auto d = static_cast<std::size_t>(x.cols);
    std::vector<double> c(d * d, 0.0);
    for (int i = 0; i < x.rows; ++i) {
        for (std::size_t a = 0; a < d; ++a) {
            for (std::size_t b = 0; b < d; ++b) {
                c[a * d + b] += x.at(i, static_cast<int>(a)) * x.at(i, static_cast<int>(b));
            }
        }
    }
    double trace = 0.0;
    for (std::size_t a = 0; a < d; ++a) {
        trace += c[a * d + a];
    }
    require(trace > 0.0, "covariance has zero trace");
    for (double &v : c) {
        v /= trace;
    }
    return c;
}

double CovarianceUnitary::unitarity_error() const {
    const auto n = static_cast<std::size_t>(dim);
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Complex acc{0.0, 0.0};
            for (std::size_t k = 0; k < n; ++k) {
                acc += std::conj(unitary[k * n + i]) * unitary[k * n + j];
            }
            if (i == j) {
                acc -= 1.0;
            }
            err = std::max(err, std::abs(acc));
        }
    }
    return err;
}

CovarianceUnitary covariance_unitary(const DataMatrix &x) {
    const auto c = normalized_covariance(x);
    const int d = x.cols;
    Eigen::MatrixXd m(d, d);
    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
            m(a, b) = c[static_cast<std::size_t>(a * d + b)];
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    require(solver.info() == Eigen::Success, "eigendecomposition of the covariance failed");

    CovarianceUnitary out;
    out.dim = d;
    // Eigen returns ascending eigenvalues; store descending.
    for (int k = d - 1; k >= 0; --k) {
        out.eigenvalues.push_back(std::max(0.0, solver.eigenvalues()(k)));
        std::vector<double> v(static_cast<std::size_t>(d));
        int pivot = 0;
        for (int a = 0; a < d; ++a) {
            v[static_cast<std::size_t>(a)] = solver.eigenvectors()(a, k);
            if (std::abs(v[static_cast<std::size_t>(a)]) >
                std::abs(v[static_cast<std::size_t>(pivot)]) + 1e-12) {
                pivot = a;
            }
        }
        // Fix the sign so the largest entry is positive.
        if (v[static_cast<std::size_t>(pivot)] < 0.0) {
            for (double &e : v) {
                e = -e;
            }
        }
        out.eigenvectors.push_back(std::move(v));
    }

    const auto n = static_cast<std::size_t>(d);
    out.unitary.assign(n * n, Complex{0.0, 0.0});
    for (std::size_t k = 0; k < n; ++k) {
        const Complex phase = std::polar(1.0, 2.0 * std::numbers::pi * out.eigenvalues[k]);
        const auto &v = out.eigenvectors[k];
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = 0; b < n; ++b) {
                out.unitary[a * n + b] += phase * v[a] * v[b];
            }
        }
    }
    return out;
}

std::uint64_t PhaseEstimate::modal() const {
    if (!counts.empty()) {
        auto best = counts.begin();
        for (auto it = counts.begin(); it != counts.end(); ++it) {
            if (it->second > best->second) {
                best = it;
            }
        }
        return best->first;
    }
    return static_cast<std::uint64_t>(
        std::max_element(distribution.begin(), distribution.end()) - distribution.begin());
}

double PhaseEstimate::modal_phase() const {
    return static_cast<double>(modal()) / std::ldexp(1.0, ancillas);
}

PhaseEstimate phase_estimate(std::span<const Complex> unitary, int dim,
                             std::span<const Complex> eigenvector, int ancillas,
                             std::uint64_t shots, std::uint64_t seed) {
    require(ancillas >= 1 && ancillas <= kMaxAncillas, "ancilla count must be in [1, 10]");
    require(dim >= 1 && unitary.size() == static_cast<std::size_t>(dim * dim),
            "unitary must be dim x dim");
    require(eigenvector.size() == static_cast<std::size_t>(dim),
            "eigenvector length does not match the unitary");
    const CovarianceUnitary check{dim, {unitary.begin(), unitary.end()}, {}, {}};
    require(check.unitarity_error() <= 1e-10, "phase estimation needs a unitary matrix");

    const int t = register_bits(dim);
    const auto padded = std::size_t{1} << t;
    CMatrix power(padded * padded, Complex{0.0, 0.0});
    for (std::size_t a = 0; a < padded; ++a) {
        for (std::size_t b = 0; b < padded; ++b) {
            if (a < static_cast<std::size_t>(dim) && b < static_cast<std::size_t>(dim)) {
                power[a * padded + b] = unitary[a * static_cast<std::size_t>(dim) + b];
            } else if (a == b) {
                power[a * padded + b] = 1.0;
            }
        }
    }

    std::vector<Complex> amps(std::size_t{1} << (t + ancillas), 0.0);
    for (std::size_t a = 0; a < eigenvector.size(); ++a) {
        amps[a] = eigenvector[a];
    }
    auto state = sim::QuantumState::from_amplitudes(std::move(amps));

    std::vector<int> targets(static_cast<std::size_t>(t));
    std::iota(targets.begin(), targets.end(), 0);
    std::vector<int> anc(static_cast<std::size_t>(ancillas));
    std::iota(anc.begin(), anc.end(), t);

    const sim::Unitary2 h = sim::standard_gate(sim::GateKind::H);
    for (int q : anc) {
        sim::apply_gate(state, sim::GateOp{h, q, {}});
    }
    for (int k = 0; k < ancillas; ++k) {
        const int control = anc[static_cast<std::size_t>(k)];
        sim::apply_controlled_matrix(state, power, targets, std::span<const int>(&control, 1));
        if (k + 1 < ancillas) {
            power = multiply(power, power, padded);
        }
    }
    sim::apply_inverse_qft(state, anc);

    PhaseEstimate out;
    out.ancillas = ancillas;
    out.distribution.assign(std::size_t{1} << ancillas, 0.0);
    const auto probs = sim::probabilities(state);
    for (std::size_t i = 0; i < probs.size(); ++i) {
        out.distribution[i >> t] += probs[i];
    }
    if (shots > 0) {
        for (const auto &[index, n] : sim::sample_counts(state, shots, seed)) {
            out.counts[index >> t] += n;
        }
    }
    return out;
}

PcaResult qpca_top_k(const DataMatrix &x, int k, int ancillas, std::uint64_t shots,
                     std::uint64_t seed) {
    x.validate();
    require(k >= 1 && k <= x.cols, "k must be in [1, d]");
    const auto cov = covariance_unitary(x);
    const std::size_t d = cov.eigenvalues.size();
    const double resolution = std::ldexp(1.0, -ancillas);

    PcaResult all;
    all.ancillas = ancillas;
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = a + 1; b < d; ++b) {
            if (std::abs(cov.eigenvalues[a] - cov.eigenvalues[b]) < resolution) {
                all.degenerate = true;
            }
        }
    }

    struct Entry {
        double phase;
        std::uint64_t count;
        double modal_probability;
        std::size_t index;
    };
    std::vector<Entry> entries;
    for (std::size_t a = 0; a < d; ++a) {
        std::vector<Complex> vec(cov.eigenvectors[a].begin(), cov.eigenvectors[a].end());
        const auto est = phase_estimate(cov.unitary, cov.dim, vec, ancillas, shots,
                                        derive_seed(seed, {a}));
        const auto modal = est.modal();
        const std::uint64_t count = est.counts.count(modal) ? est.counts.at(modal) : 0;
        entries.push_back({est.modal_phase(), count, est.distribution[modal], a});
    }
    std::stable_sort(entries.begin(), entries.end(),
                     [](const Entry &l, const Entry &r) { return l.phase > r.phase; });

    for (int r = 0; r < k; ++r) {
        const auto &e = entries[static_cast<std::size_t>(r)];
        all.phases.push_back(e.phase);
        all.counts.push_back(e.count);
        all.modal_probability.push_back(e.modal_probability);
        all.eigenvalues.push_back(cov.eigenvalues[e.index]);
        all.components.push_back(cov.eigenvectors[e.index]);
    }
    return all;
}

DataMatrix read_matrix_csv(std::istream &in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        std::vector<double> row;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            const auto first = cell.find_first_not_of(" \t\r");
            const auto last = cell.find_last_not_of(" \t\r");
            require(first != std::string::npos,
                    "line " + std::to_string(number) + ": empty cell");
            cell = cell.substr(first, last - first + 1);
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            require(ec == std::errc{} && ptr == cell.data() + cell.size(),
                    "line " + std::to_string(number) + ": not a number: '" + cell + "'");
            row.push_back(v);
        }
        rows.push_back(std::move(row));
    }
    require(!rows.empty(), "matrix CSV is empty");
    auto m = DataMatrix::from_rows(rows);
    m.validate();
    return m;
}

std::string result_to_json(const PcaResult &r) {
    nlohmann::json j;
    j["phases"] = r.phases;
    j["counts"] = r.counts;
    j["components"] = r.components;
    j["eigenvalues"] = r.eigenvalues;
    j["modal_probability"] = r.modal_probability;
    j["degenerate"] = r.degenerate;
    j["ancillas"] = r.ancillas;
    return j.dump(2);
}

} // namespace qlstm::qpca
