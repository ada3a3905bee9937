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
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "qlstm/bench.hpp"
#include "qlstm/error.hpp"

using namespace qlstm;
using namespace qlstm::bench;

namespace {

std::string csv_of(const Dataset &d) {
    std::ostringstream out;
    write_dataset_csv(out, d);
    return out.str();
}

// Predicts x_{t-D} exactly: an ideal delay line.
std::vector<std::vector<double>> delay_line(const std::vector<std::vector<double>> &in, int delay) {
    std::vector<std::vector<double>> out;
    for (std::size_t t = 0; t < in.size(); ++t) {
        out.push_back(t >= static_cast<std::size_t>(delay) ? in[t - static_cast<std::size_t>(delay)]
                                                          : std::vector<double>{0.0});
    }
    return out;
}

ExperimentConfig parse(const std::string &text) {
    std::istringstream in(text);
    return parse_config(in);
}

} // namespace

TEST_CASE("sine dataset") {
    const auto d = generate_dataset(Task::sine, 3, {});
    REQUIRE(d.sequences.size() == 20);
    for (std::size_t s = 0; s < d.sequences.size(); ++s) {
        const int o = d.offsets[s];
        const auto &q = d.sequences[s];
        REQUIRE(q.inputs.size() == 8);
        for (int t = 0; t < 8; ++t) {
            const auto ts = static_cast<std::size_t>(t);
            CHECK(q.inputs[ts][0] == doctest::Approx(std::sin(2 * std::numbers::pi * (o + t) / 32)));
            CHECK(q.targets[ts][0] == doctest::Approx(std::sin(2 * std::numbers::pi * (o + t + 1) / 32)));
        }
    }
    DatasetParams p;
    p.n_sequences = 40;
    const auto many = generate_dataset(Task::sine, 3, p);
    bool found_zero = false;
    for (std::size_t s = 0; s < many.sequences.size(); ++s) {
        if (many.offsets[s] == 0) {
            found_zero = true;
            CHECK(many.sequences[s].targets[0][0] == doctest::Approx(std::sin(2 * std::numbers::pi / 32)));
        }
    }
    CHECK(found_zero);
}

TEST_CASE("delayed echo dataset") {
    DatasetParams p;
    p.delay = 3;
    const auto d = generate_dataset(Task::delayed_echo, 8, p);
    for (const auto &q : d.sequences) {
        for (std::size_t t = 0; t < q.inputs.size(); ++t) {
            CHECK(std::abs(q.inputs[t][0]) == 1.0);
            if (t < 3) {
                CHECK_FALSE(has_target(q.targets[t][0]));
            } else {
                CHECK(q.targets[t][0] == q.inputs[t - 3][0]);
            }
        }
    }
}

TEST_CASE("random walk dataset") {
    DatasetParams p;
    p.walk_step = 0.5;
    const auto d = generate_dataset(Task::random_walk, 2, p);
    for (const auto &q : d.sequences) {
        for (std::size_t t = 0; t < q.inputs.size(); ++t) {
            CHECK(std::abs(q.inputs[t][0]) <= 1.0);
            if (t + 1 < q.inputs.size()) {
                CHECK(q.targets[t][0] == q.inputs[t + 1][0]);
            }
        }
    }
}

TEST_CASE("datasets are deterministic and split 80/20") {
    CHECK(csv_of(generate_dataset(Task::random_walk, 5, {})) ==
          csv_of(generate_dataset(Task::random_walk, 5, {})));
    CHECK(csv_of(generate_dataset(Task::random_walk, 5, {})) !=
          csv_of(generate_dataset(Task::random_walk, 6, {})));

    const auto d = generate_dataset(Task::sine, 1, {});
    const auto s = split_dataset(d);
    CHECK(s.train.size() == 16);
    CHECK(s.test.size() == 4);
    CHECK(s.train[0].inputs == d.sequences[0].inputs);
    CHECK(s.test[0].inputs == d.sequences[16].inputs);

    DatasetParams two;
    two.n_sequences = 2;
    const auto t = split_dataset(generate_dataset(Task::sine, 1, two));
    CHECK(t.train.size() == 1);
    CHECK(t.test.size() == 1);

    DatasetParams bad;
    bad.n_sequences = 1;
    CHECK_THROWS_AS((void)generate_dataset(Task::sine, 1, bad), ValidationError);
    bad = {};
    bad.delay = 8;
    CHECK_THROWS_AS((void)generate_dataset(Task::delayed_echo, 1, bad), ValidationError);
    CHECK_THROWS_AS((void)parse_task("speech"), ValidationError);
    CHECK_THROWS_AS((void)parse_model("transformer"), ValidationError);
}

TEST_CASE("dataset CSV") {
    const auto d = generate_dataset(Task::delayed_echo, 4, {});
    std::istringstream in(csv_of(d));
    const auto back = read_dataset_csv(in);
    REQUIRE(back.size() == d.sequences.size());
    for (std::size_t s = 0; s < back.size(); ++s) {
        CHECK(back[s].inputs == d.sequences[s].inputs);
        for (std::size_t t = 0; t < back[s].targets.size(); ++t) {
            const double a = back[s].targets[t][0], b = d.sequences[s].targets[t][0];
            CHECK(((std::isnan(a) && std::isnan(b)) || a == b));
        }
    }
    CHECK(csv_of(d).rfind("seq_id,t,x0,y0\n", 0) == 0);

    std::ifstream fixture(std::string(QLSTM_FIXTURE_DIR) + "/echo.csv");
    const auto seqs = read_dataset_csv(fixture);
    REQUIRE(seqs.size() == 2);
    CHECK(seqs[1].inputs == std::vector<std::vector<double>>{{-1}, {-1}, {1}, {1}});
    CHECK(std::isnan(seqs[0].targets[1][0]));
    CHECK(seqs[0].targets[3][0] == -1.0);

    std::istringstream skipped("seq_id,t,x0,y0\n0,0,1,1\n0,2,1,1\n");
    CHECK_THROWS_AS((void)read_dataset_csv(skipped), ValidationError);
    std::istringstream header("id,t,x0,y0\n");
    CHECK_THROWS_AS((void)read_dataset_csv(header), ValidationError);
}

TEST_CASE("metric helpers") {
    const std::vector<Sequence> data{
        {{{0}, {0}, {0}, {0}}, {{NAN}, {1.0}, {-1.0}, {1.0}}},
    };
    const std::vector<std::vector<std::vector<double>>> pred{{{5}, {0.2}, {0.3}, {-0.1}}};
    CHECK(sign_accuracy(data, pred) == doctest::Approx(1.0 / 3.0));
    // residuals 0.8, 1.3, 1.1 -> MSE (0.64 + 1.69 + 1.21) / 3
    CHECK(mean_squared_error(data, pred) == doctest::Approx((0.64 + 1.69 + 1.21) / 3));
    // targets 1, -1, 1: variance 8/9
    CHECK(regression_accuracy(data, pred) == 0.0);
    const std::vector<std::vector<std::vector<double>>> good{{{0}, {0.9}, {-0.9}, {0.9}}};
    CHECK(regression_accuracy(data, good) == doctest::Approx(1.0 - 0.01 / (8.0 / 9.0)));
    CHECK(task_accuracy(Task::delayed_echo, data, good) == 1.0);

    const std::vector<double> x{1, 2, 4, 8}, y{3, 12, 48, 192};
    CHECK(log_log_slope(x, y) == doctest::Approx(2.0).epsilon(1e-12));
    const std::vector<double> neg{1, -1};
    CHECK_THROWS_AS((void)log_log_slope(neg, neg), ValidationError);
}

TEST_CASE("memory capacity") {
    const std::vector<int> delays{1, 2, 3, 4, 5};
    auto perfect = [](int delay) {
        DatasetParams p;
        p.delay = delay;
        const auto s = split_dataset(generate_dataset(Task::delayed_echo, 11, p));
        std::vector<std::vector<std::vector<double>>> pred;
        for (const auto &q : s.test) {
            pred.push_back(delay_line(q.inputs, delay));
        }
        return sign_accuracy(s.test, pred);
    };
    const auto m = memory_capacity(delays, perfect);
    CHECK(m.capacity == 5);
    CHECK(m.accuracies == std::vector<double>(5, 1.0));

    // A delay line that only reaches two steps back.
    auto short_memory = [&](int delay) { return delay <= 2 ? perfect(delay) : 0.5; };
    CHECK(memory_capacity(delays, short_memory).capacity == 2);
    CHECK(memory_capacity(delays, [](int) { return 0.3; }).capacity == 0);
}

TEST_CASE("configuration files") {
    const auto c = parse("task = delayed_echo\nmodel = classical_lstm # baseline\n"
                         "hidden_dim=3\nseed=7\nmemory_delays = 1, 3\noptimizer = gd\n"
                         "scalability = false\n");
    CHECK(c.task == Task::delayed_echo);
    CHECK(c.model == ModelKind::classical_lstm);
    CHECK(c.hidden_dim == 3);
    CHECK(c.seed == 7u);
    CHECK(c.memory_delays == std::vector<int>{1, 3});
    CHECK(c.optimizer == Optimizer::gradient_descent);
    CHECK_FALSE(c.scalability);

    CHECK_THROWS_AS(parse("task = sine\n"), ValidationError);
    CHECK_THROWS_AS(parse("seed = 1\ncolour = red\n"), ValidationError);
    CHECK_THROWS_AS(parse("seed = 1\ntask = speech\n"), ValidationError);
    CHECK_THROWS_AS(parse("seed = 1\nhidden_dim = two\n"), ValidationError);
    CHECK_THROWS_AS(parse("seed = 1\nhidden_dim = 0\n"), ValidationError);
    CHECK_THROWS_AS(parse("seed = 1\nmemory_delays = 9\n"), ValidationError);
    CHECK_THROWS_AS(parse("seed = 1\nlearning_rate = -1\n"), ValidationError);
    CHECK_THROWS_AS(parse("seed\n"), ValidationError);

    std::ifstream f(std::string(QLSTM_FIXTURE_DIR) + "/tiny_classical.cfg");
    CHECK(parse_config(f).iterations == 30);
}

TEST_CASE("classical experiment on sine") {
    ExperimentConfig cfg;
    cfg.model = ModelKind::classical_lstm;
    cfg.hidden_dim = 8;
    cfg.iterations = 500;
    cfg.seed = 1;
    const auto r = run_experiment(cfg);
    CHECK(r.status == "ok");
    CHECK(r.accuracy >= 0.9);
    CHECK((r.accuracy >= 0.0 && r.accuracy <= 1.0));
    CHECK(r.loss_history.size() == 501);
    CHECK(r.efficiency.circuit_evaluations == 0);
    CHECK(r.efficiency.work_units > 0);
    CHECK(r.efficiency.wall_seconds >= 0.0);
    CHECK(r.memory.delays == std::vector<int>{1, 2, 3});
    CHECK(r.scalability.slope_length == doctest::Approx(1.0));

    const auto back = record_from_json(record_to_json(r));
    CHECK(deterministic_json(back) == deterministic_json(r));
    CHECK(record_to_json(back) == record_to_json(r));
}

TEST_CASE("records are reproducible apart from timing") {
    ExperimentConfig cfg;
    cfg.task = Task::delayed_echo;
    cfg.model = ModelKind::qlstm;
    cfg.hidden_dim = 1;
    cfg.layers = 1;
    cfg.iterations = 2;
    cfg.data.n_sequences = 4;
    cfg.data.seq_len = 4;
    cfg.memory_delays = {1};
    cfg.memory_iterations = 1;
    cfg.seed = 3;
    const auto a = run_experiment(cfg);
    const auto b = run_experiment(cfg);
    CHECK(a.status == "ok");
    CHECK(a.efficiency.circuit_evaluations > 0);
    CHECK(a.efficiency.circuit_evaluations == b.efficiency.circuit_evaluations);
    CHECK(deterministic_json(a) == deterministic_json(b));
    const auto j = nlohmann::json::parse(deterministic_json(a));
    CHECK_FALSE(j.at("computational_efficiency").contains("wall_seconds"));
    CHECK(j.at("config").at("seed") == 3);
}

TEST_CASE("divergence becomes a failed record") {
    ExperimentConfig cfg;
    cfg.model = ModelKind::classical_lstm;
    cfg.optimizer = Optimizer::gradient_descent;
    cfg.learning_rate = 1e300;
    cfg.iterations = 5;
    cfg.seed = 2;
    const auto r = run_experiment(cfg);
    CHECK(r.status == "diverged");
    CHECK_FALSE(r.diagnostics.empty());
    CHECK(nlohmann::json::parse(record_to_json(r)).at("status") == "diverged");
}

TEST_CASE("comparison table") {
    MetricsRecord q;
    q.task = "sine";
    q.model = "qlstm";
    q.accuracy = 0.5;
    q.efficiency.work_units = 1234;
    q.memory.capacity = 2;
    q.scalability.slope_length = 1.0;
    MetricsRecord c = q;
    c.model = "classical_lstm";
    c.accuracy = 0.25;

    const std::vector<MetricsRecord> both{q, c};
    const auto csv = compare(both);
    std::istringstream lines(csv);
    std::vector<std::string> rows;
    for (std::string line; std::getline(lines, line);) {
        rows.push_back(line);
    }
    REQUIRE(rows.size() == 9);
    CHECK(rows[0] == "model,metric,value,paper_predicted");
    CHECK(rows[1] == "qlstm,accuracy,0.5,0.9");
    CHECK(rows[2] == "qlstm,computational_efficiency,1234,0.7");
    CHECK(rows[3] == "qlstm,memory_capacity,2,0.95");
    CHECK(rows[4] == "qlstm,scalability,1,0.8");
    CHECK(rows[5] == "classical_lstm,accuracy,0.25,0.8");
    CHECK(rows[6] == "classical_lstm,computational_efficiency,1234,0.85");
    CHECK(rows[7] == "classical_lstm,memory_capacity,2,0.9");
    CHECK(rows[8] == "classical_lstm,scalability,1,0.6");

    auto other = c;
    other.task = "random_walk";
    const std::vector<MetricsRecord> mixed{q, other};
    CHECK_THROWS_AS((void)compare(mixed), ValidationError);
    const std::vector<MetricsRecord> single{q};
    CHECK_THROWS_AS((void)compare(single), ValidationError);
}
