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
#include <fstream>
#include <numbers>

#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"
#include "qlstm/error.hpp"
#include "qlstm/qpca.hpp"
#include "qlstm/rng.hpp"

using namespace qlstm;
using namespace qlstm::qpca;
using sim::Complex;

namespace {

constexpr double kPi = std::numbers::pi;

DataMatrix random_matrix(Rng &rng, int rows, int cols) {
    DataMatrix x{rows, cols, {}};
    for (int i = 0; i < rows * cols; ++i) {
        x.values.push_back(rng.normal(0.0, 1.0));
    }
    return x;
}

// exp(2 pi i C) by its Taylor series, for small symmetric C with ||C|| <= 1.
oracle::Matrix exp_2pi_i(const std::vector<double> &c, int d) {
    oracle::Matrix a(static_cast<std::size_t>(d));
    for (int i = 0; i < d * d; ++i) {
        a.a[static_cast<std::size_t>(i)] = Complex(0.0, 2.0 * kPi * c[static_cast<std::size_t>(i)]);
    }
    auto sum = oracle::Matrix::identity(static_cast<std::size_t>(d));
    auto term = sum;
    for (int k = 1; k < 80; ++k) {
        term = oracle::multiply(term, a);
        for (auto &z : term.a) {
            z /= static_cast<double>(k);
        }
        sum = oracle::add(sum, term);
    }
    return sum;
}

std::vector<double> covariance_oracle(const DataMatrix &x) {
    const int d = x.cols;
    std::vector<double> c(static_cast<std::size_t>(d * d), 0.0);
    double trace = 0.0;
    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
            for (int r = 0; r < x.rows; ++r) {
                c[static_cast<std::size_t>(a * d + b)] += x.at(r, a) * x.at(r, b);
            }
        }
        trace += c[static_cast<std::size_t>(a * d + a)];
    }
    for (auto &v : c) {
        v /= trace;
    }
    return c;
}

} // namespace

TEST_CASE("data state preparation") {
    const auto one = prepare_data_state(DataMatrix::from_rows({{1.0}}));
    CHECK(one.n_qubits() == 2);
    CHECK(one[0] == Complex(1.0));

    const auto ones = prepare_data_state(DataMatrix::from_rows({{1, 1}, {1, 1}}));
    for (auto a : ones.amplitudes()) {
        CHECK(std::abs(a - 0.5) < 1e-15);
    }

    const auto diag = prepare_data_state(DataMatrix::from_rows({{3, 0}, {0, 4}}));
    CHECK(std::abs(diag[0] - 0.6) < 1e-15);
    CHECK(diag[1] == Complex(0.0));
    CHECK(diag[2] == Complex(0.0));
    CHECK(std::abs(diag[3] - 0.8) < 1e-15);

    // 3 x 3 pads both registers to two qubits; entry (i, j) sits at i * 4 + j.
    const auto pad = prepare_data_state(DataMatrix::from_rows({{1, 2, 0}, {0, 0, 0}, {0, 0, 2}}));
    CHECK(pad.n_qubits() == 4);
    CHECK(std::abs(pad[1] - 2.0 / 3.0) < 1e-15);
    CHECK(std::abs(pad[10] - 2.0 / 3.0) < 1e-15);
}

TEST_CASE("matrix validation") {
    CHECK_THROWS_AS((void)DataMatrix::from_rows({}), ValidationError);
    CHECK_THROWS_AS((void)DataMatrix::from_rows({{1, 2}, {3}}), ValidationError);
    CHECK_THROWS_AS(DataMatrix::from_rows({{0, 0}}).validate(), ValidationError);
    CHECK_THROWS_AS(DataMatrix::from_rows({std::vector<double>(9, 1.0)}).validate(), ValidationError);
    CHECK_THROWS_AS(DataMatrix::from_rows({{1, NAN}}).validate(), ValidationError);
}

TEST_CASE("normalised covariance and its exponential") {
    SUBCASE("I/2 exponentiates to -I") {
        const double s = 1.0 / std::sqrt(2.0);
        const auto u = covariance_unitary(DataMatrix::from_rows({{s, 0}, {0, s}}));
        CHECK(std::abs(u.unitary[0] + 1.0) < 1e-12);
        CHECK(std::abs(u.unitary[1]) < 1e-12);
        CHECK(std::abs(u.unitary[2]) < 1e-12);
        CHECK(std::abs(u.unitary[3] + 1.0) < 1e-12);
    }
    SUBCASE("diagonal case") {
        const auto x = DataMatrix::from_rows({{std::sqrt(3.0), 0}, {0, 1}});
        const auto c = normalized_covariance(x);
        CHECK(c[0] == doctest::Approx(0.75).epsilon(1e-15));
        CHECK(c[3] == doctest::Approx(0.25).epsilon(1e-15));
        const auto u = covariance_unitary(x);
        CHECK(std::abs(u.unitary[0] - std::polar(1.0, 1.5 * kPi)) < 1e-12);
        CHECK(std::abs(u.unitary[3] - std::polar(1.0, 0.5 * kPi)) < 1e-12);
    }
    SUBCASE("random matrices against series and Jacobi oracles") {
        Rng rng(40);
        for (int trial = 0; trial < 20; ++trial) {
            const int d = 1 + static_cast<int>(rng.bits() % 4);
            const auto x = random_matrix(rng, 2 + static_cast<int>(rng.bits() % 5), d);
            const auto c = normalized_covariance(x);
            const auto expect_c = covariance_oracle(x);
            for (std::size_t i = 0; i < c.size(); ++i) {
                CHECK(std::abs(c[i] - expect_c[i]) < 1e-14);
            }
            const auto u = covariance_unitary(x);
            CHECK(u.unitarity_error() < 1e-10);
            oracle::Matrix lib(static_cast<std::size_t>(d));
            lib.a = u.unitary;
            CHECK(oracle::max_abs_diff(lib, exp_2pi_i(expect_c, d)) < 1e-10);
            const auto ev = oracle::symmetric_eigenvalues(expect_c, d);
            for (std::size_t k = 0; k < ev.size(); ++k) {
                CHECK(std::abs(u.eigenvalues[k] - ev[k]) < 1e-12);
            }
        }
    }
}

TEST_CASE("phase estimation") {
    const std::vector<Complex> quarter{1.0, 0.0, 0.0, std::polar(1.0, 2 * kPi * 0.25)};
    const std::vector<Complex> e0{1.0, 0.0}, e1{0.0, 1.0};

    SUBCASE("exact phases") {
        const auto a = phase_estimate(quarter, 2, e1, 2, 0, 0);
        CHECK(a.modal() == 1);
        CHECK(a.distribution[1] == doctest::Approx(1.0).epsilon(1e-12));
        const auto b = phase_estimate(quarter, 2, e0, 2, 0, 0);
        CHECK(b.modal() == 0);
        CHECK(b.distribution[0] == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("phase one third at four ancillas") {
        const std::vector<Complex> third{1.0, 0.0, 0.0, std::polar(1.0, 2 * kPi / 3)};
        const auto r = phase_estimate(third, 2, e1, 4, 0, 0);
        CHECK(r.modal() == 5);
        CHECK(sim::to_bitstring(r.modal(), 4) == "0101");
        CHECK(r.distribution[5] >= 0.4);
    }
    SUBCASE("distribution matches the closed form") {
        Rng rng(3);
        for (int m = 1; m <= 6; ++m) {
            const double phi = rng.uniform();
            const std::vector<Complex> u{std::polar(1.0, 2 * kPi * phi), 0.0, 0.0, 1.0};
            const auto r = phase_estimate(u, 2, e0, m, 0, 0);
            const auto expect = oracle::phase_estimation_distribution(phi, m);
            for (std::size_t k = 0; k < expect.size(); ++k) {
                CHECK(std::abs(r.distribution[k] - expect[k]) < 1e-12);
            }
        }
    }
    SUBCASE("sampled outcomes") {
        const std::vector<Complex> third{1.0, 0.0, 0.0, std::polar(1.0, 2 * kPi / 3)};
        const auto r = phase_estimate(third, 2, e1, 4, 2000, 5);
        std::uint64_t total = 0;
        for (const auto &[k, n] : r.counts) {
            total += n;
        }
        CHECK(total == 2000);
        CHECK(r.modal() == 5);
        CHECK(r.modal_phase() == 5.0 / 16.0);
        CHECK(phase_estimate(third, 2, e1, 4, 2000, 5).counts == r.counts);
    }
    SUBCASE("argument validation") {
        CHECK_THROWS_AS((void)phase_estimate(quarter, 2, e1, 0, 0, 0), ValidationError);
        CHECK_THROWS_AS((void)phase_estimate(quarter, 2, e1, 11, 0, 0), ValidationError);
        CHECK_THROWS_AS((void)phase_estimate(quarter, 3, e1, 2, 0, 0), ValidationError);
        const std::vector<Complex> bad{1.0, 1.0, 0.0, 1.0};
        CHECK_THROWS_AS((void)phase_estimate(bad, 2, e1, 2, 0, 0), ValidationError);
    }
}

TEST_CASE("principal components") {
    SUBCASE("diagonal example") {
        const auto r = qpca_top_k(DataMatrix::from_rows({{2, 0}, {0, 1}}), 2, 4, 0, 0);
        REQUIRE(r.phases.size() == 2);
        CHECK(r.phases[0] == 13.0 / 16.0);
        CHECK(r.phases[1] == 3.0 / 16.0);
        CHECK(r.eigenvalues[0] == doctest::Approx(0.8));
        CHECK(r.eigenvalues[1] == doctest::Approx(0.2));
        CHECK(std::abs(r.components[0][0] - 1.0) < 1e-12);
        CHECK(std::abs(r.components[0][1]) < 1e-12);
        CHECK_FALSE(r.degenerate);
        const auto top = qpca_top_k(DataMatrix::from_rows({{2, 0}, {0, 1}}), 1, 4, 0, 0);
        CHECK(top.phases.size() == 1);
        CHECK(top.components[0] == r.components[0]);
    }
    SUBCASE("isotropic data is flagged degenerate") {
        const auto r = qpca_top_k(DataMatrix::from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}), 3, 6, 0, 0);
        CHECK(r.degenerate);
    }
    SUBCASE("full rank components are orthonormal") {
        Rng rng(17);
        const auto x = random_matrix(rng, 6, 4);
        const auto r = qpca_top_k(x, 4, 6, 0, 0);
        for (std::size_t a = 0; a < 4; ++a) {
            for (std::size_t b = 0; b < 4; ++b) {
                double dot = 0.0;
                for (std::size_t k = 0; k < 4; ++k) {
                    dot += r.components[a][k] * r.components[b][k];
                }
                CHECK(std::abs(dot - (a == b ? 1.0 : 0.0)) < 1e-8);
            }
        }
    }
    SUBCASE("argument validation") {
        const auto x = DataMatrix::from_rows({{2, 0}, {0, 1}});
        CHECK_THROWS_AS((void)qpca_top_k(x, 0, 4, 0, 0), ValidationError);
        CHECK_THROWS_AS((void)qpca_top_k(x, 3, 4, 0, 0), ValidationError);
        CHECK_THROWS_AS((void)qpca_top_k(x, 1, 0, 0, 0), ValidationError);
    }
}

TEST_CASE("matrix CSV and result JSON") {
    std::ifstream in(std::string(QLSTM_FIXTURE_DIR) + "/matrix.csv");
    const auto x = read_matrix_csv(in);
    CHECK(x.rows == 2);
    CHECK(x.cols == 2);
    CHECK(x.values == std::vector<double>{2, 0, 0, 1});

    std::istringstream ragged("1,2\n3\n");
    CHECK_THROWS_AS((void)read_matrix_csv(ragged), ValidationError);
    std::istringstream text("1,a\n");
    CHECK_THROWS_AS((void)read_matrix_csv(text), ValidationError);

    const auto j = nlohmann::json::parse(result_to_json(qpca_top_k(x, 2, 4, 100, 1)));
    CHECK(j.at("ancillas") == 4);
    CHECK(j.at("phases").get<std::vector<double>>() == std::vector<double>{13.0 / 16, 3.0 / 16});
    CHECK(j.at("counts").size() == 2);
    CHECK(j.at("components").size() == 2);
    CHECK(j.at("degenerate") == false);
}
