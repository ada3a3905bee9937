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

#include "json.hpp"
#include "qlstm/classical_lstm.hpp"
#include "qlstm/error.hpp"
#include "qlstm/hybrid.hpp"

namespace qlstm {

namespace {

constexpr const char *kGateNames[4] = {"forget", "input", "output", "candidate"};

nlohmann::json readout_json(const Readout &r) {
    return {{"out_dim", r.out_dim}, {"hidden_dim", r.hidden_dim}, {"weights", r.weights},
            {"bias", r.bias}};
}

Readout readout_from(const nlohmann::json &j) {
    Readout r;
    r.out_dim = j.at("out_dim").get<int>();
    r.hidden_dim = j.at("hidden_dim").get<int>();
    r.weights = j.at("weights").get<std::vector<double>>();
    r.bias = j.at("bias").get<std::vector<double>>();
    detail::require(r.weights.size() == static_cast<std::size_t>(r.out_dim * r.hidden_dim) &&
                        r.bias.size() == static_cast<std::size_t>(r.out_dim),
                    "readout shape mismatch in checkpoint");
    return r;
}

template <class Fn> auto parse_checkpoint(const std::string &text, Fn &&fn) {
    try {
        return fn(nlohmann::json::parse(text));
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError(std::string("bad checkpoint JSON: ") + e.what());
    }
}

} // namespace

namespace hybrid {

std::string checkpoint_to_json(const QlstmModel &model, std::span<const double> loss_history) {
    const auto &c = model.config;
    nlohmann::json j;
    j["model"] = "qlstm";
    j["config"] = {{"input_dim", c.input_dim},       {"hidden_dim", c.hidden_dim},
                   {"ansatz_layers", c.ansatz_layers}, {"shots", c.shots},
                   {"seed", c.seed},                 {"qft_mixing", c.qft_mixing}};
    for (std::size_t k = 0; k < 4; ++k) {
        j["params"][kGateNames[k]] = model.params.gates[k];
    }
    j["readout"] = readout_json(model.readout);
    j["loss_history"] = std::vector<double>(loss_history.begin(), loss_history.end());
    return j.dump(2);
}

QlstmModel checkpoint_from_json(const std::string &text, std::vector<double> *loss_history) {
    return parse_checkpoint(text, [&](const nlohmann::json &j) {
        const auto &jc = j.at("config");
        QlstmConfig c;
        c.input_dim = jc.at("input_dim").get<int>();
        c.hidden_dim = jc.at("hidden_dim").get<int>();
        c.ansatz_layers = jc.at("ansatz_layers").get<int>();
        c.shots = jc.at("shots").get<std::uint64_t>();
        c.seed = jc.at("seed").get<std::uint64_t>();
        c.qft_mixing = jc.value("qft_mixing", false);
        c.validate();
        QlstmModel m{c, QlstmParams::zeros(c), readout_from(j.at("readout"))};
        for (std::size_t k = 0; k < 4; ++k) {
            auto v = j.at("params").at(kGateNames[k]).get<std::vector<double>>();
            detail::require(v.size() == m.params.gates[k].size(),
                            std::string("wrong parameter count for gate ") + kGateNames[k]);
            m.params.gates[k] = std::move(v);
        }
        if (loss_history) {
            *loss_history = j.value("loss_history", std::vector<double>{});
        }
        return m;
    });
}

} // namespace hybrid

namespace classical {

std::string checkpoint_to_json(const LstmParams &params, std::span<const double> loss_history) {
    nlohmann::json j;
    j["model"] = "classical_lstm";
    j["config"] = {{"input_dim", params.input_dim}, {"hidden_dim", params.hidden_dim}};
    for (std::size_t k = 0; k < 4; ++k) {
        j["params"][kGateNames[k]] = {{"weights", params.weights[k]}, {"bias", params.biases[k]}};
    }
    j["readout"] = readout_json(params.readout);
    j["loss_history"] = std::vector<double>(loss_history.begin(), loss_history.end());
    return j.dump(2);
}

LstmParams checkpoint_from_json(const std::string &text, std::vector<double> *loss_history) {
    return parse_checkpoint(text, [&](const nlohmann::json &j) {
        const auto &jc = j.at("config");
        const Readout r = readout_from(j.at("readout"));
        LstmParams p = LstmParams::zeros(jc.at("input_dim").get<int>(),
                                         jc.at("hidden_dim").get<int>(), r.out_dim);
        p.readout = r;
        for (std::size_t k = 0; k < 4; ++k) {
            const auto &g = j.at("params").at(kGateNames[k]);
            p.weights[k] = g.at("weights").get<std::vector<double>>();
            p.biases[k] = g.at("bias").get<std::vector<double>>();
        }
        p.validate();
        if (loss_history) {
            *loss_history = j.value("loss_history", std::vector<double>{});
        }
        return p;
    });
}

} // namespace classical
} // namespace qlstm
