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

#include <chrono>
#include <cmath>
#include <istream>
#include <sstream>

#include "json.hpp"
#include "qlstm/bench.hpp"
#include "qlstm/classical_lstm.hpp"
#include "qlstm/error.hpp"
#include "qlstm/hybrid.hpp"
#include "qlstm/rng.hpp"
#include "qlstm/statevector.hpp"

namespace qlstm::bench {

using detail::require;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string trim(const std::string &s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <class T> T parse_value(const std::string &key, const std::string &value) {
    std::istringstream in(value);
    T v{};
    in >> v;
    require(!in.fail() && in.eof(), "config key '" + key + "': bad value '" + value + "'");
    return v;
}

bool parse_bool(const std::string &key, const std::string &value) {
    if (value == "true" || value == "1" || value == "yes") {
        return true;
    }
    if (value == "false" || value == "0" || value == "no") {
        return false;
    }
    detail::fail("config key '" + key + "': expected true or false");
}

// Multiply-adds of one classical LSTM step: four gate matrices plus readout.
std::uint64_t classical_step_macs(int input_dim, int hidden_dim, int out_dim) {
    const auto h = static_cast<std::uint64_t>(hidden_dim);
    return 4 * h * static_cast<std::uint64_t>(input_dim + hidden_dim) +
           static_cast<std::uint64_t>(out_dim) * h;
}

std::uint64_t total_steps(std::span<const Sequence> data) {
    std::uint64_t n = 0;
    for (const auto &s : data) {
        n += s.inputs.size();
    }
    return n;
}

struct Trained {
    Predictor predict;
    std::vector<double> loss_history;
};

Trained train_model(const ExperimentConfig &cfg, std::span<const Sequence> train, int iterations,
                    std::uint64_t seed) {
    if (cfg.model == ModelKind::qlstm) {
        hybrid::QlstmConfig qc;
        qc.input_dim = 1;
        qc.hidden_dim = cfg.hidden_dim;
        qc.ansatz_layers = cfg.layers;
        qc.shots = cfg.shots;
        qc.seed = seed;
        auto res = hybrid::train_sequence(train, qc, 1, {cfg.learning_rate, iterations, 0.0, cfg.optimizer});
        auto model = std::make_shared<hybrid::QlstmModel>(std::move(res.model));
        return {[model](const std::vector<std::vector<double>> &in) {
                    return hybrid::predict_sequence(*model, in);
                },
                std::move(res.loss_history)};
    }
    auto init = classical::init_params(1, cfg.hidden_dim, 1, seed);
    auto res = classical::train(train, init, {cfg.learning_rate, iterations, cfg.optimizer});
    auto params = std::make_shared<classical::LstmParams>(std::move(res.params));
    return {[params](const std::vector<std::vector<double>> &in) {
                return classical::predict_sequence(*params, in);
            },
            std::move(res.loss_history)};
}

std::vector<std::vector<std::vector<double>>> predict_all(const Trained &m,
                                                          std::span<const Sequence> data) {
    std::vector<std::vector<std::vector<double>>> out;
    for (const auto &s : data) {
        out.push_back(m.predict(s.inputs));
    }
    return out;
}

// Work and wall time of one forward pass over a random length-L sequence.
std::pair<double, double> forward_cost(const ExperimentConfig &cfg, int hidden, int length) {
    Rng rng(derive_seed(*cfg.seed, {0x5ca1e, static_cast<std::uint64_t>(hidden),
                                    static_cast<std::uint64_t>(length)}));
    std::vector<std::vector<double>> seq;
    for (int t = 0; t < length; ++t) {
        seq.push_back({rng.uniform(-1.0, 1.0)});
    }
    if (cfg.model == ModelKind::qlstm) {
        hybrid::QlstmConfig qc;
        qc.input_dim = 1;
        qc.hidden_dim = hidden;
        qc.ansatz_layers = cfg.layers;
        qc.shots = cfg.shots;
        qc.seed = *cfg.seed;
        const auto model = hybrid::init_model(qc, 1);
        const auto before = sim::work_counters().amplitude_updates;
        const auto start = Clock::now();
        (void)hybrid::predict_sequence(model, seq);
        const double secs = seconds_since(start);
        return {static_cast<double>(sim::work_counters().amplitude_updates - before), secs};
    }
    const auto params = classical::init_params(1, hidden, 1, *cfg.seed);
    const double work = static_cast<double>(classical_step_macs(1, hidden, 1)) * length;
    // Classical passes are microseconds long; repeat to get a measurable time.
    int reps = 0;
    const auto start = Clock::now();
    do {
        (void)classical::predict_sequence(params, seq);
        ++reps;
    } while (seconds_since(start) < 2e-3);
    return {work, seconds_since(start) / reps};
}

Scalability measure_scalability(const ExperimentConfig &cfg) {
    Scalability s;
    s.lengths = {8, 16, 32};
    s.hidden_dims = {1, 2, 4};
    std::vector<double> lx, hx, lsec, hsec;
    for (int len : s.lengths) {
        auto [work, secs] = forward_cost(cfg, cfg.hidden_dim, len);
        lx.push_back(len);
        s.length_work.push_back(work);
        lsec.push_back(std::max(secs, 1e-9));
    }
    for (int h : s.hidden_dims) {
        auto [work, secs] = forward_cost(cfg, h, 8);
        hx.push_back(h);
        s.hidden_work.push_back(work);
        hsec.push_back(std::max(secs, 1e-9));
    }
    s.slope_length = log_log_slope(lx, s.length_work);
    s.slope_hidden = log_log_slope(hx, s.hidden_work);
    s.slope_length_seconds = log_log_slope(lx, lsec);
    s.slope_hidden_seconds = log_log_slope(hx, hsec);
    return s;
}

nlohmann::json config_json(const ExperimentConfig &c) {
    return {{"task", to_string(c.task)},
            {"model", to_string(c.model)},
            {"hidden_dim", c.hidden_dim},
            {"layers", c.layers},
            {"shots", c.shots},
            {"seed", c.seed.value_or(0)},
            {"iterations", c.iterations},
            {"learning_rate", c.learning_rate},
            {"optimizer", to_string(c.optimizer)},
            {"n_sequences", c.data.n_sequences},
            {"seq_len", c.data.seq_len},
            {"period", c.data.period},
            {"delay", c.data.delay},
            {"walk_step", c.data.walk_step},
            {"memory_delays", c.memory_delays},
            {"memory_iterations", c.memory_iterations},
            {"scalability", c.scalability}};
}

nlohmann::json record_json(const MetricsRecord &r) {
    nlohmann::json j;
    j["task"] = r.task;
    j["model"] = r.model;
    j["status"] = r.status;
    j["diagnostics"] = r.diagnostics;
    j["accuracy"] = r.accuracy;
    j["test_mse"] = r.test_mse;
    j["loss_history"] = r.loss_history;
    j["computational_efficiency"] = {{"wall_seconds", r.efficiency.wall_seconds},
                                     {"circuit_evaluations", r.efficiency.circuit_evaluations},
                                     {"work_units", r.efficiency.work_units},
                                     {"parallelism", r.efficiency.parallelism}};
    j["memory_capacity"] = {{"delay", r.memory.capacity},
                            {"delays", r.memory.delays},
                            {"accuracies", r.memory.accuracies},
                            {"threshold", kMemoryThreshold}};
    const auto &s = r.scalability;
    j["scalability"] = {{"slope_length", s.slope_length},
                        {"slope_hidden", s.slope_hidden},
                        {"slope_length_seconds", s.slope_length_seconds},
                        {"slope_hidden_seconds", s.slope_hidden_seconds},
                        {"lengths", s.lengths},
                        {"hidden_dims", s.hidden_dims},
                        {"length_work", s.length_work},
                        {"hidden_work", s.hidden_work}};
    j["config"] = r.config_echo.empty() ? nlohmann::json::object()
                                        : nlohmann::json::parse(r.config_echo);
    return j;
}

} // namespace

void ExperimentConfig::validate() const {
    require(seed.has_value(), "config must set a seed");
    require(hidden_dim >= 1, "hidden_dim must be >= 1");
    require(layers >= 1, "layers must be >= 1");
    require(iterations >= 0, "iterations must be >= 0");
    require(memory_iterations >= 0, "memory_iterations must be >= 0");
    require(learning_rate > 0.0 && std::isfinite(learning_rate), "learning_rate must be positive");
    require(model != ModelKind::qlstm || 1 + hidden_dim <= sim::kDefaultQubitCap,
            "hidden_dim too large for the qubit cap");
    data.validate();
    for (int d : memory_delays) {
        require(d >= 1 && d < data.seq_len, "memory delays must be in [1, seq_len)");
    }
}

ExperimentConfig parse_config(std::istream &in) {
    ExperimentConfig c;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        require(eq != std::string::npos, "config line " + std::to_string(number) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "task") {
            c.task = parse_task(value);
        } else if (key == "model") {
            c.model = parse_model(value);
        } else if (key == "hidden_dim") {
            c.hidden_dim = parse_value<int>(key, value);
        } else if (key == "layers") {
            c.layers = parse_value<int>(key, value);
        } else if (key == "shots") {
            c.shots = parse_value<std::uint64_t>(key, value);
        } else if (key == "seed") {
            c.seed = parse_value<std::uint64_t>(key, value);
        } else if (key == "iterations") {
            c.iterations = parse_value<int>(key, value);
        } else if (key == "learning_rate") {
            c.learning_rate = parse_value<double>(key, value);
        } else if (key == "optimizer") {
            c.optimizer = parse_optimizer(value);
        } else if (key == "output") {
            c.output = value;
        } else if (key == "n_sequences") {
            c.data.n_sequences = parse_value<int>(key, value);
        } else if (key == "seq_len") {
            c.data.seq_len = parse_value<int>(key, value);
        } else if (key == "period") {
            c.data.period = parse_value<int>(key, value);
        } else if (key == "delay") {
            c.data.delay = parse_value<int>(key, value);
        } else if (key == "walk_step") {
            c.data.walk_step = parse_value<double>(key, value);
        } else if (key == "memory_delays") {
            c.memory_delays.clear();
            std::istringstream items(value);
            for (std::string item; std::getline(items, item, ',');) {
                c.memory_delays.push_back(parse_value<int>(key, trim(item)));
            }
        } else if (key == "memory_iterations") {
            c.memory_iterations = parse_value<int>(key, value);
        } else if (key == "scalability") {
            c.scalability = parse_bool(key, value);
        } else {
            detail::fail("config line " + std::to_string(number) + ": unknown key '" + key + "'");
        }
    }
    c.validate();
    return c;
}

MetricsRecord run_experiment(const ExperimentConfig &config) {
    config.validate();
    const std::uint64_t seed = *config.seed;
    MetricsRecord rec;
    rec.task = to_string(config.task);
    rec.model = to_string(config.model);
    rec.config_echo = config_json(config).dump();

    try {
        const auto start = Clock::now();
        const auto before = sim::work_counters();
        const Dataset data = generate_dataset(config.task, seed, config.data);
        const Split split = split_dataset(data);
        const Trained model = train_model(config, split.train, config.iterations, seed);
        const auto predictions = predict_all(model, split.test);
        rec.loss_history = model.loss_history;
        rec.accuracy = task_accuracy(config.task, split.test, predictions);
        rec.test_mse = mean_squared_error(split.test, predictions);
        rec.efficiency.wall_seconds = seconds_since(start);
        const auto after = sim::work_counters();
        rec.efficiency.circuit_evaluations = after.circuit_evaluations - before.circuit_evaluations;
        if (config.model == ModelKind::qlstm) {
            rec.efficiency.work_units = after.amplitude_updates - before.amplitude_updates;
        } else {
            // Forward + backward counted as three forward passes per training step.
            const std::uint64_t macs = classical_step_macs(1, config.hidden_dim, 1);
            rec.efficiency.work_units =
                macs * (3 * static_cast<std::uint64_t>(config.iterations) * total_steps(split.train) +
                        total_steps(split.train) + total_steps(split.test));
        }

        const int mem_iters = config.memory_iterations > 0 ? config.memory_iterations : config.iterations;
        rec.memory = memory_capacity(config.memory_delays, [&](int delay) {
            DatasetParams p = config.data;
            p.delay = delay;
            const auto echo = generate_dataset(Task::delayed_echo,
                                               derive_seed(seed, {0xec40, static_cast<std::uint64_t>(delay)}), p);
            const auto s = split_dataset(echo);
            const auto m = train_model(config, s.train, mem_iters, seed);
            return sign_accuracy(s.test, predict_all(m, s.test));
        });

        if (config.scalability) {
            rec.scalability = measure_scalability(config);
        }
    } catch (const DivergenceError &e) {
        rec.status = "diverged";
        rec.diagnostics = e.what();
    }
    return rec;
}

std::string record_to_json(const MetricsRecord &record) { return record_json(record).dump(2); }

std::string deterministic_json(const MetricsRecord &record) {
    auto j = record_json(record);
    j["computational_efficiency"].erase("wall_seconds");
    j["scalability"].erase("slope_length_seconds");
    j["scalability"].erase("slope_hidden_seconds");
    return j.dump(2);
}

MetricsRecord record_from_json(const std::string &text) {
    try {
        const auto j = nlohmann::json::parse(text);
        MetricsRecord r;
        r.task = j.at("task").get<std::string>();
        r.model = j.at("model").get<std::string>();
        (void)parse_task(r.task);
        (void)parse_model(r.model);
        r.status = j.value("status", std::string("ok"));
        r.diagnostics = j.value("diagnostics", std::string());
        r.accuracy = j.at("accuracy").get<double>();
        r.test_mse = j.value("test_mse", 0.0);
        r.loss_history = j.value("loss_history", std::vector<double>{});
        const auto &e = j.at("computational_efficiency");
        r.efficiency.wall_seconds = e.value("wall_seconds", 0.0);
        r.efficiency.circuit_evaluations = e.at("circuit_evaluations").get<std::uint64_t>();
        r.efficiency.work_units = e.at("work_units").get<std::uint64_t>();
        r.efficiency.parallelism = e.value("parallelism", 1);
        const auto &m = j.at("memory_capacity");
        r.memory.capacity = m.at("delay").get<int>();
        r.memory.delays = m.value("delays", std::vector<int>{});
        r.memory.accuracies = m.value("accuracies", std::vector<double>{});
        const auto &s = j.at("scalability");
        r.scalability.slope_length = s.at("slope_length").get<double>();
        r.scalability.slope_hidden = s.value("slope_hidden", 0.0);
        r.scalability.slope_length_seconds = s.value("slope_length_seconds", 0.0);
        r.scalability.slope_hidden_seconds = s.value("slope_hidden_seconds", 0.0);
        r.scalability.lengths = s.value("lengths", std::vector<int>{});
        r.scalability.hidden_dims = s.value("hidden_dims", std::vector<int>{});
        r.scalability.length_work = s.value("length_work", std::vector<double>{});
        r.scalability.hidden_work = s.value("hidden_work", std::vector<double>{});
        if (j.contains("config")) {
            r.config_echo = j.at("config").dump();
        }
        return r;
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError(std::string("bad metrics record JSON: ") + e.what());
    }
}

} // namespace qlstm::bench
