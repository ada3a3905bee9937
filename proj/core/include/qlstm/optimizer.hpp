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

#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace qlstm {

enum class Optimizer { gradient_descent, adam };

[[nodiscard]] std::string to_string(Optimizer o);
/// "gd" / "gradient_descent" or "adam"; throws ValidationError otherwise.
[[nodiscard]] Optimizer parse_optimizer(const std::string &name);

/// Per-parameter update direction shared by the trainers:
///   value -= learning_rate * direction(q, gradient)
/// Gradient descent returns the gradient itself; Adam the bias-corrected
/// first moment over the root second moment (0.9, 0.999, eps 1e-8).
class StepRule {
public:
    explicit StepRule(Optimizer kind) : kind_(kind) {}

    /// Call once per iteration, before the direction() calls of that iteration.
    void begin_step();
    [[nodiscard]] double direction(std::size_t q, double gradient);

private:
    Optimizer kind_;
    int t_{0};
    double c1_{1.0}, c2_{1.0};
    std::vector<double> m1_, m2_;
};

} // namespace qlstm
