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

#include "qlstm/optimizer.hpp"

#include <cmath>

#include "qlstm/error.hpp"

namespace qlstm {

std::string to_string(Optimizer o) {
    return o == Optimizer::adam ? "adam" : "gradient_descent";
}

Optimizer parse_optimizer(const std::string &name) {
    if (name == "gd" || name == "gradient_descent") {
        return Optimizer::gradient_descent;
    }
    if (name == "adam") {
        return Optimizer::adam;
    }
    detail::fail("unknown optimizer '" + name + "' (expected gradient_descent or adam)");
}

void StepRule::begin_step() {
    ++t_;
    c1_ = 1.0 - std::pow(0.9, t_);
    c2_ = 1.0 - std::pow(0.999, t_);
}

double StepRule::direction(std::size_t q, double g) {
    if (kind_ == Optimizer::gradient_descent) {
        return g;
    }
    if (q >= m1_.size()) {
        m1_.resize(q + 1, 0.0);
        m2_.resize(q + 1, 0.0);
    }
    m1_[q] = 0.9 * m1_[q] + 0.1 * g;
    m2_[q] = 0.999 * m2_[q] + 0.001 * g * g;
    return (m1_[q] / c1_) / (std::sqrt(m2_[q] / c2_) + 1e-8);
}

} // namespace qlstm
