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
 * Benchmark harness: synthetic sequence tasks, the experiment runner and
 * the four evaluation metrics (accuracy, computational efficiency, memory
 * capacity, scalability).
 */
#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qlstm/optimizer.hpp"
#include "qlstm/sequence.hpp"

namespace qlstm::bench {

enum class Task { sine, delayed_echo, random_walk };
enum class ModelKind { qlstm, classical_lstm };

[[nodiscard]] std::string to_string(Task t);
[[nodiscard]] std::string to_string(ModelKind m);
[[nodiscard]] Task parse_task(const std::string &name);
[[nodiscard]] ModelKind parse_model(const std::string &name);

struct DatasetParams {
    int n_sequences{20};
    int seq_len{8};
    int period{32};       ///< sine
    int delay{2};         ///< delayed_echo
    double walk_step{0.1}; ///< random_walk step standard deviation

    void validate() const;
};

struct Dataset {
    Task task{Task::sine};
    DatasetParams params;
    std::vector<int> seq_ids;
    std::vector<int> offsets; ///< sine phase offset per sequence; 0 otherwise
    std::vector<Sequence> sequences;
};

/// Deterministic for a given (task, seed, params).
///  - sine:         x_t = sin(2 pi (o + t) / P), y_t = x_{t+1}
///  - delayed_echo: x_t uniform in {-1, +1}, y_t = x_{t-D} for t >= D, no target before
///  - random_walk:  Gaussian steps reflected into [-1, 1], y_t = x_{t+1}
[[nodiscard]] Dataset generate_dataset(Task task, std::uint64_t seed, const DatasetParams &params);

struct Split {
    std::vector<Sequence> train;
    std::vector<Sequence> test;
};

/// First 80% of sequence ids (at least one) train, the rest test.
[[nodiscard]] Split split_dataset(const Dataset &data);

/// CSV `seq_id,t,x0..xk,y0..ym`; missing targets are written as `nan`.
void write_dataset_csv(std::ostream &out, const Dataset &data);
[[nodiscard]] std::vector<Sequence> read_dataset_csv(std::istream &in);

/// Fraction of present targets whose sign is predicted (classification tasks).
[[nodiscard]] double sign_accuracy(std::span<const Sequence> data,
                                   std::span<const std::vector<std::vector<double>>> predictions);
/// 1 - MSE / Var(targets), clamped to [0, 1] (regression tasks).
[[nodiscard]] double regression_accuracy(std::span<const Sequence> data,
                                         std::span<const std::vector<std::vector<double>>> predictions);
[[nodiscard]] double mean_squared_error(std::span<const Sequence> data,
                                        std::span<const std::vector<std::vector<double>>> predictions);

/// Task-appropriate accuracy.
[[nodiscard]] double task_accuracy(Task task, std::span<const Sequence> data,
                                   std::span<const std::vector<std::vector<double>>> predictions);

/// Least-squares slope of log(y) against log(x).
[[nodiscard]] double log_log_slope(std::span<const double> x, std::span<const double> y);

struct MemoryCapacity {
    int capacity{0}; ///< longest tested delay with accuracy >= threshold, 0 if none
    std::vector<int> delays;
    std::vector<double> accuracies;
};

inline constexpr double kMemoryThreshold = 0.9;

[[nodiscard]] MemoryCapacity memory_capacity(std::span<const int> delays,
                                             const std::function<double(int)> &accuracy_at_delay,
                                             double threshold = kMemoryThreshold);

struct ExperimentConfig {
    Task task{Task::sine};
    ModelKind model{ModelKind::qlstm};
    int hidden_dim{2};
    int layers{2};
    std::uint64_t shots{0};
    std::optional<std::uint64_t> seed;
    int iterations{100};
    double learning_rate{0.05};
    Optimizer optimizer{Optimizer::adam};
    std::string output;
    DatasetParams data;
    std::vector<int> memory_delays{1, 2, 3};
    int memory_iterations{0}; ///< 0: use `iterations`
    bool scalability{true};

    void validate() const;
};

/// key=value lines, `#` comments. Unknown keys and a missing seed are errors.
[[nodiscard]] ExperimentConfig parse_config(std::istream &in);

struct Efficiency {
    double wall_seconds{0.0};
    std::uint64_t circuit_evaluations{0};
    std::uint64_t work_units{0}; ///< amplitude updates (qlstm) or multiply-adds (classical)
    int parallelism{1};
};

struct Scalability {
    std::vector<int> lengths;
    std::vector<int> hidden_dims;
    std::vector<double> length_work;
    std::vector<double> hidden_work;
    double slope_length{0.0}; ///< d log(work) / d log(sequence length)
    double slope_hidden{0.0}; ///< d log(work) / d log(hidden_dim)
    double slope_length_seconds{0.0};
    double slope_hidden_seconds{0.0};
};

struct MetricsRecord {
    std::string task;
    std::string model;
    std::string status{"ok"}; ///< "ok" or "diverged"
    std::string diagnostics;
    double accuracy{0.0};
    double test_mse{0.0};
    std::vector<double> loss_history;
    Efficiency efficiency;
    MemoryCapacity memory;
    Scalability scalability;
    std::string config_echo; ///< JSON of the resolved configuration
};

[[nodiscard]] MetricsRecord run_experiment(const ExperimentConfig &config);

[[nodiscard]] std::string record_to_json(const MetricsRecord &record);
[[nodiscard]] MetricsRecord record_from_json(const std::string &text);
/// The record JSON with every wall-clock field removed.
[[nodiscard]] std::string deterministic_json(const MetricsRecord &record);

/// Maps one input sequence to per-step outputs.
using Predictor = std::function<std::vector<std::vector<double>>(const std::vector<std::vector<double>> &)>;

/// Reference values the comparison table carries next to each measurement.
struct PredictedReference {
    double accuracy;
    double computational_efficiency;
    double memory_capacity;
    double scalability;
};
[[nodiscard]] PredictedReference predicted_reference(ModelKind model);

/// CSV `model,metric,value,paper_predicted`, one row per (record, metric).
/// Throws ValidationError for fewer than two records or mixed tasks.
[[nodiscard]] std::string compare(std::span<const MetricsRecord> records);

} // namespace qlstm::bench
