// Copyright 2026 The qeraser Authors
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

#include "qeraser/noise.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace qeraser {

void QubitNoiseParams::validate() const {
    if (!(t1 > 0) || !(t2 > 0)) {
        throw NoiseError("T1 and T2 must be positive");
    }
    if (t2 > 2 * t1) {
        throw NoiseError("unphysical relaxation times: T2 > 2 T1");
    }
    for (double p : {readout_flip_01, readout_flip_10}) {
        if (!(p >= 0 && p <= 1)) {
            throw NoiseError("readout flip probabilities must lie in [0, 1]");
        }
    }
}

std::vector<Matrix> delay_channel(const QubitNoiseParams &params, double seconds) {
    params.validate();
    if (!(seconds >= 0) || !std::isfinite(seconds)) {
        throw NoiseError("delay duration must be finite and >= 0");
    }
    // Amplitude damping keeps sqrt(1 - gamma) = exp(-t / 2T1) on the coherences;
    // dephasing supplies the rest of exp(-t / T2).
    double keep = std::exp(-seconds / (2 * params.t1));
    double gamma = 1 - keep * keep;
    double total = std::exp(-seconds / params.t2);
    double lambda = keep > 0 ? std::min(1.0, total / keep) : 0.0;

    std::vector<Matrix> damping{Matrix{{1, 0}, {0, keep}}};
    if (gamma > 0) {
        damping.push_back(Matrix{{0, std::sqrt(gamma)}, {0, 0}});
    }
    std::vector<Matrix> dephasing{Matrix::identity(2) * Complex{std::sqrt((1 + lambda) / 2)}};
    if (lambda < 1) {
        dephasing.push_back(Matrix{{1, 0}, {0, -1}} * Complex{std::sqrt((1 - lambda) / 2)});
    }
    std::vector<Matrix> out;
    for (const auto &d : dephasing) {
        for (const auto &a : damping) {
            out.push_back(d * a);
        }
    }
    return out;
}

int readout_channel(const QubitNoiseParams &params, int ideal_outcome, CounterRng &rng) {
    double u = rng.uniform();
    if (ideal_outcome == 0) {
        return u < params.readout_flip_01 ? 1 : 0;
    }
    return u < params.readout_flip_10 ? 0 : 1;
}

std::vector<QubitNoiseParams> NoiseModel::resolve(const Circuit &circuit) const {
    std::vector<QubitNoiseParams> out(static_cast<size_t>(circuit.num_qubits()));
    for (const auto &[label, params] : by_label) {
        int q;
        try {
            q = circuit.wire_index(label);
        } catch (const CircuitError &) {
            throw NoiseError("noise model names wire '" + label + "' which the circuit does not have");
        }
        params.validate();
        out[static_cast<size_t>(q)] = params;
    }
    return out;
}

bool NoiseModel::has_decoherence() const {
    for (const auto &[label, p] : by_label) {
        if (p.has_decoherence()) {
            return true;
        }
    }
    return false;
}

bool NoiseModel::has_readout_error() const {
    for (const auto &[label, p] : by_label) {
        if (p.has_readout_error()) {
            return true;
        }
    }
    return false;
}

namespace {

double time_from_us(const nlohmann::json &j, const char *key) {
    if (!j.contains(key) || j[key].is_null()) {
        return kInfiniteTime;
    }
    if (j[key].is_string()) {
        std::string s = j[key].get<std::string>();
        if (s == "inf" || s == "infinity") {
            return kInfiniteTime;
        }
        throw NoiseError(std::string("bad value for ") + key + ": " + s);
    }
    return j[key].get<double>() * 1e-6;
}

}  // namespace

std::map<std::string, QubitNoiseParams> noise_block_from_json(const nlohmann::json &block) {
    std::map<std::string, QubitNoiseParams> out;
    if (block.is_null()) {
        return out;
    }
    if (!block.is_object()) {
        throw NoiseError("noise block must be an object keyed by wire label");
    }
    try {
        for (const auto &[label, j] : block.items()) {
            QubitNoiseParams p;
            p.t1 = time_from_us(j, "t1_us");
            p.t2 = time_from_us(j, "t2_us");
            p.readout_flip_01 = j.value("readout_flip_01", 0.0);
            p.readout_flip_10 = j.value("readout_flip_10", 0.0);
            p.validate();
            out[label] = p;
        }
    } catch (const nlohmann::json::exception &e) {
        throw NoiseError(std::string("malformed noise block: ") + e.what());
    }
    return out;
}

nlohmann::json noise_block_to_json(const std::map<std::string, QubitNoiseParams> &block) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto &[label, p] : block) {
        // Rounded to 15 significant digits so a parse/write cycle is a fixed point.
        auto us = [](double t) {
            if (std::isinf(t)) {
                return nlohmann::json(nullptr);
            }
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.15g", t * 1e6);
            return nlohmann::json(std::strtod(buf, nullptr));
        };
        out[label] = {{"t1_us", us(p.t1)},
                      {"t2_us", us(p.t2)},
                      {"readout_flip_01", p.readout_flip_01},
                      {"readout_flip_10", p.readout_flip_10}};
    }
    return out;
}

}  // namespace qeraser
