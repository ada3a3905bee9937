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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "qlstm/bench.hpp"
#include "qlstm/error.hpp"
#include "qlstm/rng.hpp"

namespace qlstm::bench {

using detail::require;

namespace {

std::string format_number(double v) {
    if (!std::isfinite(v)) {
        return "nan";
    }
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

double parse_number(const std::string &cell, std::size_t line) {
    if (cell == "nan" || cell.empty()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    require(ec == std::errc{} && ptr == cell.data() + cell.size(),
            "line " + std::to_string(line) + ": not a number: '" + cell + "'");
    return v;
}

std::vector<std::string> split(const std::string &line) {
    std::vector<std::string> cells;
    std::istringstream in(line);
    std::string cell;
    while (std::getline(in, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) {
            cell.pop_back();
        }
        cells.push_back(cell);
    }
    return cells;
}

template <class Fn>
void for_each_target(std::span<const Sequence> data,
                     std::span<const std::vector<std::vector<double>>> predictions, Fn &&fn) {
    require(data.size() == predictions.size(), "prediction count does not match the dataset");
    for (std::size_t s = 0; s < data.size(); ++s) {
        require(predictions[s].size() == data[s].targets.size(),
                "prediction length does not match the sequence");
        for (std::size_t t = 0; t < data[s].targets.size(); ++t) {
            for (std::size_t r = 0; r < data[s].targets[t].size(); ++r) {
                const double y = data[s].targets[t][r];
                if (has_target(y)) {
                    fn(predictions[s][t][r], y);
                }
            }
        }
    }
}

} // namespace

std::string to_string(Task t) {
    switch (t) {
    case Task::sine:
        return "sine";
    case Task::delayed_echo:
        return "delayed_echo";
    case Task::random_walk:
        return "random_walk";
    }
    return "?";
}

std::string to_string(ModelKind m) {
    return m == ModelKind::qlstm ? "qlstm" : "classical_lstm";
}

Task parse_task(const std::string &name) {
    if (name == "sine") {
        return Task::sine;
    }
    if (name == "delayed_echo") {
        return Task::delayed_echo;
    }
    if (name == "random_walk") {
        return Task::random_walk;
    }
    detail::fail("unknown task '" + name + "' (expected sine, delayed_echo or random_walk)");
}

ModelKind parse_model(const std::string &name) {
    if (name == "qlstm") {
        return ModelKind::qlstm;
    }
    if (name == "classical_lstm") {
        return ModelKind::classical_lstm;
    }
    detail::fail("unknown model '" + name + "' (expected qlstm or classical_lstm)");
}

void DatasetParams::validate() const {
    require(n_sequences >= 2, "n_sequences must be >= 2 for an 80/20 split");
    require(seq_len >= 1, "seq_len must be >= 1");
    require(period >= 2, "period must be >= 2");
    require(delay >= 0 && delay < seq_len, "delay must be in [0, seq_len)");
    require(walk_step > 0.0 && std::isfinite(walk_step), "walk_step must be positive");
}

Dataset generate_dataset(Task task, std::uint64_t seed, const DatasetParams &params) {
    params.validate();
    Dataset d;
    d.task = task;
    d.params = params;
    const auto L = static_cast<std::size_t>(params.seq_len);
    for (int id = 0; id < params.n_sequences; ++id) {
        Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(task), static_cast<std::uint64_t>(id)}));
        Sequence seq;
        int offset = 0;
        switch (task) {
        case Task::sine: {
            offset = static_cast<int>(rng.bits() % static_cast<std::uint64_t>(params.period));
            auto value = [&](std::size_t t) {
                return std::sin(2.0 * std::numbers::pi * static_cast<double>(offset + static_cast<int>(t)) /
                                static_cast<double>(params.period));
            };
            for (std::size_t t = 0; t < L; ++t) {
                seq.inputs.push_back({value(t)});
                seq.targets.push_back({value(t + 1)});
            }
            break;
        }
        case Task::delayed_echo: {
            for (std::size_t t = 0; t < L; ++t) {
                seq.inputs.push_back({(rng.bits() >> 63) ? 1.0 : -1.0});
            }
            const auto D = static_cast<std::size_t>(params.delay);
            for (std::size_t t = 0; t < L; ++t) {
                seq.targets.push_back({t >= D ? seq.inputs[t - D][0]
                                              : std::numeric_limits<double>::quiet_NaN()});
            }
            break;
        }
        case Task::random_walk: {
            std::vector<double> walk(L + 1, 0.0);
            for (std::size_t t = 1; t <= L; ++t) {
                double v = walk[t - 1] + rng.normal(0.0, params.walk_step);
                if (v > 1.0) {
                    v = 2.0 - v;
                } else if (v < -1.0) {
                    v = -2.0 - v;
                }
                walk[t] = std::clamp(v, -1.0, 1.0);
            }
            for (std::size_t t = 0; t < L; ++t) {
                seq.inputs.push_back({walk[t]});
                seq.targets.push_back({walk[t + 1]});
            }
            break;
        }
        }
        d.seq_ids.push_back(id);
        d.offsets.push_back(offset);
        d.sequences.push_back(std::move(seq));
    }
    return d;
}

Split split_dataset(const Dataset &data) {
    const auto n = data.sequences.size();
    require(n >= 2, "need at least two sequences to split");
    std::size_t n_train = std::max<std::size_t>(1, (n * 4) / 5);
    n_train = std::min(n_train, n - 1);
    Split s;
    for (std::size_t k = 0; k < n; ++k) {
        if (static_cast<std::size_t>(data.seq_ids[k]) < n_train) {
            s.train.push_back(data.sequences[k]);
        } else {
            s.test.push_back(data.sequences[k]);
        }
    }
    return s;
}

void write_dataset_csv(std::ostream &out, const Dataset &data) {
    require(!data.sequences.empty(), "dataset is empty");
    const std::size_t in_w = data.sequences.front().inputs.front().size();
    const std::size_t out_w = data.sequences.front().targets.front().size();
    out << "seq_id,t";
    for (std::size_t k = 0; k < in_w; ++k) {
        out << ",x" << k;
    }
    for (std::size_t k = 0; k < out_w; ++k) {
        out << ",y" << k;
    }
    out << '\n';
    for (std::size_t s = 0; s < data.sequences.size(); ++s) {
        const auto &seq = data.sequences[s];
        for (std::size_t t = 0; t < seq.inputs.size(); ++t) {
            out << data.seq_ids[s] << ',' << t;
            for (double v : seq.inputs[t]) {
                out << ',' << format_number(v);
            }
            for (double v : seq.targets[t]) {
                out << ',' << format_number(v);
            }
            out << '\n';
        }
    }
}

std::vector<Sequence> read_dataset_csv(std::istream &in) {
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), "dataset CSV is empty");
    const auto header = split(line);
    require(header.size() >= 4 && header[0] == "seq_id" && header[1] == "t",
            "dataset CSV header must start with seq_id,t");
    std::size_t in_w = 0, out_w = 0;
    for (std::size_t k = 2; k < header.size(); ++k) {
        if (header[k] == "x" + std::to_string(in_w) && out_w == 0) {
            ++in_w;
        } else if (header[k] == "y" + std::to_string(out_w)) {
            ++out_w;
        } else {
            detail::fail("unexpected dataset column '" + header[k] + "'");
        }
    }
    require(in_w >= 1 && out_w >= 1, "dataset needs x and y columns");

    std::map<long, Sequence> by_id;
    std::size_t number = 1;
    while (std::getline(in, line)) {
        ++number;
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto cells = split(line);
        require(cells.size() == header.size(), "line " + std::to_string(number) + ": wrong column count");
        const long id = std::stol(cells[0]);
        const auto t = static_cast<std::size_t>(std::stoul(cells[1]));
        auto &seq = by_id[id];
        require(t == seq.inputs.size(), "line " + std::to_string(number) + ": timesteps out of order");
        std::vector<double> x, y;
        for (std::size_t k = 0; k < in_w; ++k) {
            x.push_back(parse_number(cells[2 + k], number));
            require(std::isfinite(x.back()), "inputs must be finite");
        }
        for (std::size_t k = 0; k < out_w; ++k) {
            y.push_back(parse_number(cells[2 + in_w + k], number));
        }
        seq.inputs.push_back(std::move(x));
        seq.targets.push_back(std::move(y));
    }
    std::vector<Sequence> out;
    for (auto &[id, seq] : by_id) {
        out.push_back(std::move(seq));
    }
    return out;
}

double mean_squared_error(std::span<const Sequence> data,
                          std::span<const std::vector<std::vector<double>>> predictions) {
    double acc = 0.0;
    std::size_t n = 0;
    for_each_target(data, predictions, [&](double p, double y) {
        acc += (p - y) * (p - y);
        ++n;
    });
    require(n > 0, "no targets to score");
    return acc / static_cast<double>(n);
}

double sign_accuracy(std::span<const Sequence> data,
                     std::span<const std::vector<std::vector<double>>> predictions) {
    std::size_t correct = 0, n = 0;
    for_each_target(data, predictions, [&](double p, double y) {
        correct += ((p >= 0.0) == (y >= 0.0)) ? 1 : 0;
        ++n;
    });
    require(n > 0, "no targets to score");
    return static_cast<double>(correct) / static_cast<double>(n);
}

double regression_accuracy(std::span<const Sequence> data,
                           std::span<const std::vector<std::vector<double>>> predictions) {
    double sum = 0.0, sum2 = 0.0;
    std::size_t n = 0;
    for_each_target(data, predictions, [&](double, double y) {
        sum += y;
        sum2 += y * y;
        ++n;
    });
    require(n > 0, "no targets to score");
    const double mean = sum / static_cast<double>(n);
    const double var = sum2 / static_cast<double>(n) - mean * mean;
    const double mse = mean_squared_error(data, predictions);
    if (var <= 0.0) {
        return mse == 0.0 ? 1.0 : 0.0;
    }
    return std::clamp(1.0 - mse / var, 0.0, 1.0);
}

double task_accuracy(Task task, std::span<const Sequence> data,
                     std::span<const std::vector<std::vector<double>>> predictions) {
    return task == Task::delayed_echo ? sign_accuracy(data, predictions)
                                      : regression_accuracy(data, predictions);
}

double log_log_slope(std::span<const double> x, std::span<const double> y) {
    require(x.size() == y.size() && x.size() >= 2, "slope needs at least two points");
    double mx = 0.0, my = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        require(x[k] > 0.0 && y[k] > 0.0, "log-log slope needs positive values");
        mx += std::log(x[k]);
        my += std::log(y[k]);
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double dx = std::log(x[k]) - mx;
        sxy += dx * (std::log(y[k]) - my);
        sxx += dx * dx;
    }
    require(sxx > 0.0, "slope needs distinct x values");
    return sxy / sxx;
}

MemoryCapacity memory_capacity(std::span<const int> delays,
                               const std::function<double(int)> &accuracy_at_delay,
                               double threshold) {
    require(!delays.empty(), "memory capacity needs at least one delay");
    MemoryCapacity m;
    for (int d : delays) {
        require(d >= 1, "delays must be >= 1");
        const double acc = accuracy_at_delay(d);
        m.delays.push_back(d);
        m.accuracies.push_back(acc);
        if (acc >= threshold) {
            m.capacity = std::max(m.capacity, d);
        }
    }
    return m;
}

} // namespace qlstm::bench
