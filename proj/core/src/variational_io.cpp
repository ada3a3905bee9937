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

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "qlstm/error.hpp"
#include "qlstm/variational.hpp"

namespace qlstm::vqc {

namespace {

std::vector<std::string> split_csv(const std::string &line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) {
            cell.pop_back();
        }
        while (!cell.empty() && cell.front() == ' ') {
            cell.erase(cell.begin());
        }
        out.push_back(cell);
    }
    return out;
}

double to_double(const std::string &s, std::size_t line) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    detail::require(ec == std::errc{} && ptr == s.data() + s.size(),
                    "line " + std::to_string(line) + ": not a number: '" + s + "'");
    return v;
}

std::string shortest(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

} // namespace

std::vector<TrainingSample> read_samples_csv(std::istream &in) {
    std::string line;
    detail::require(static_cast<bool>(std::getline(in, line)), "CSV is empty");
    const auto header = split_csv(line);
    detail::require(header.size() >= 1 && header.back() == "y", "CSV header must end with 'y'");
    for (std::size_t k = 0; k + 1 < header.size(); ++k) {
        detail::require(header[k] == "x" + std::to_string(k),
                        "CSV header column " + std::to_string(k) + " must be x" +
                            std::to_string(k));
    }
    std::vector<TrainingSample> out;
    std::size_t number = 1;
    while (std::getline(in, line)) {
        ++number;
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto cells = split_csv(line);
        detail::require(cells.size() == header.size(),
                        "line " + std::to_string(number) + ": wrong column count");
        TrainingSample s;
        for (std::size_t k = 0; k + 1 < cells.size(); ++k) {
            s.x.push_back(to_double(cells[k], number));
        }
        s.y = to_double(cells.back(), number);
        out.push_back(std::move(s));
    }
    return out;
}

void write_samples_csv(std::ostream &out, std::span<const TrainingSample> data) {
    detail::require(!data.empty(), "nothing to write");
    const std::size_t k = data.front().x.size();
    for (std::size_t j = 0; j < k; ++j) {
        out << 'x' << j << ',';
    }
    out << "y\n";
    for (const auto &s : data) {
        detail::require(s.x.size() == k, "samples have inconsistent input widths");
        for (double v : s.x) {
            out << shortest(v) << ',';
        }
        out << shortest(s.y) << '\n';
    }
}

std::string report_to_json(const TrainReport &report) {
    nlohmann::json j;
    j["params"] = report.final_params;
    j["cost_history"] = report.cost_history;
    j["iterations_run"] = report.iterations_run;
    return j.dump(2);
}

TrainReport report_from_json(const std::string &text) {
    try {
        const auto j = nlohmann::json::parse(text);
        TrainReport r;
        r.final_params = j.at("params").get<std::vector<double>>();
        r.cost_history = j.at("cost_history").get<std::vector<double>>();
        r.iterations_run = j.at("iterations_run").get<int>();
        return r;
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError(std::string("bad training report JSON: ") + e.what());
    }
}

} // namespace qlstm::vqc
