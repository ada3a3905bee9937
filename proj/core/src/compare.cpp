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
#include <sstream>

#include "qlstm/bench.hpp"
#include "qlstm/error.hpp"

namespace qlstm::bench {

namespace {

std::string fmt(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

} // namespace

PredictedReference predicted_reference(ModelKind model) {
    // Forecast bar heights published for the two model families. Reference
    // only: measurements are never checked against them.
    if (model == ModelKind::qlstm) {
        return {0.9, 0.7, 0.95, 0.8};
    }
    return {0.8, 0.85, 0.9, 0.6};
}

std::string compare(std::span<const MetricsRecord> records) {
    detail::require(records.size() >= 2, "compare needs at least two records");
    for (const auto &r : records) {
        detail::require(r.task == records.front().task,
                        "cannot compare records from different tasks ('" + records.front().task +
                            "' vs '" + r.task + "')");
    }
    std::ostringstream out;
    out << "model,metric,value,paper_predicted\n";
    for (const auto &r : records) {
        const auto ref = predicted_reference(parse_model(r.model));
        out << r.model << ",accuracy," << fmt(r.accuracy) << ',' << fmt(ref.accuracy) << '\n';
        out << r.model << ",computational_efficiency," << r.efficiency.work_units << ','
            << fmt(ref.computational_efficiency) << '\n';
        out << r.model << ",memory_capacity," << r.memory.capacity << ','
            << fmt(ref.memory_capacity) << '\n';
        out << r.model << ",scalability," << fmt(r.scalability.slope_length) << ','
            << fmt(ref.scalability) << '\n';
    }
    return out.str();
}

} // namespace qlstm::bench
