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

#include "qeraser/eraser.h"

#include <cmath>
#include <numbers>

namespace qeraser {

const char *random_choice_name(RandomChoice choice) {
    switch (choice) {
        case RandomChoice::none:
            return "none";
        case RandomChoice::two_option:
            return "two_option";
        case RandomChoice::four_option:
            return "four_option";
    }
    return "?";
}

const char *layout_name(Layout layout) {
    switch (layout) {
        case Layout::abstract:
            return "abstract";
        case Layout::ibm_mapped:
            return "ibm_mapped";
        case Layout::ionq_mapped:
            return "ionq_mapped";
    }
    return "?";
}

RandomChoice parse_random_choice(const std::string &name) {
    for (auto c : {RandomChoice::none, RandomChoice::two_option, RandomChoice::four_option}) {
        if (name == random_choice_name(c)) {
            return c;
        }
    }
    throw EraserError("unknown random_choice '" + name + "'");
}

Layout parse_layout(const std::string &name) {
    for (auto l : {Layout::abstract, Layout::ibm_mapped, Layout::ionq_mapped}) {
        if (name == layout_name(l)) {
            return l;
        }
    }
    throw EraserError("unknown layout '" + name + "'");
}

void EraserConfig::validate() const {
    for (double a : {theta, phi, phi1, phi2}) {
        if (!std::isfinite(a)) {
            throw EraserError("angles must be finite");
        }
    }
    // The sweep grid closes at 2 pi, so the endpoint is accepted.
    if (theta < 0 || theta > 2 * std::numbers::pi + 1e-9) {
        throw EraserError("theta must lie in [0, 2 pi]");
    }
    if (t_delay < 0) {
        throw EraserError("t_delay must be >= 0");
    }
}

namespace {

constexpr int kS = 0, kX = 1, kY = 2, kA = 3, kA1 = 3, kA2 = 4;

Circuit make_register(RandomChoice choice) {
    std::vector<std::string> labels{"s", "x", "y"};
    if (choice == RandomChoice::two_option) {
        labels.push_back("a");
    } else if (choice == RandomChoice::four_option) {
        labels.push_back("a1");
        labels.push_back("a2");
    }
    int n = static_cast<int>(labels.size());
    return Circuit(n, n, labels, labels);
}

void anti_cx(Circuit &c, int control, int target) {
    c.x(control);
    c.cx(control, target);
    c.x(control);
}

void erasure_abstract(Circuit &c, const EraserConfig &config) {
    switch (config.random_choice) {
        case RandomChoice::none:
            c.gate(ry_gate(config.phi), {kX});
            break;
        case RandomChoice::two_option:
            c.h(kA);
            c.gate(controlled(ry_gate(config.phi)), {kA, kX});
            break;
        case RandomChoice::four_option:
            c.h(kA1);
            c.h(kA2);
            c.gate(controlled(ry_gate(config.phi1)), {kA1, kX});
            c.gate(controlled(ry_gate(config.phi2)), {kA2, kX});
            break;
    }
}

void measure_ancillas(Circuit &c, RandomChoice choice) {
    if (choice == RandomChoice::two_option) {
        c.measure(kA, kA);
    } else if (choice == RandomChoice::four_option) {
        c.measure(kA1, kA1);
        c.measure(kA2, kA2);
    }
}

Circuit build_abstract(const EraserConfig &config) {
    Circuit c = make_register(config.random_choice);
    c.h(kS);
    anti_cx(c, kS, kX);
    c.cx(kS, kY);
    c.gate(phase_gate(config.theta), {kS});
    if (config.t_delay > 0) {
        c.delay(kX, config.t_delay);
        c.delay(kY, config.t_delay);
    }
    c.cx(kX, kY);
    erasure_abstract(c, config);
    if (config.closed) {
        c.h(kS);
    }
    c.measure(kS, kS);
    c.measure(kX, kX);
    c.measure(kY, kY);
    measure_ancillas(c, config.random_choice);
    return c;
}

Circuit build_ibm(const EraserConfig &config) {
    Circuit c = make_register(config.random_choice);
    c.h(kS);
    c.cx(kS, kY);
    anti_cx(c, kS, kX);
    c.gate(phase_gate(config.theta), {kS});
    if (config.closed) {
        c.h(kS);
    }
    c.measure(kS, kS);
    if (config.t_delay > 0) {
        c.delay(kS, config.t_delay);
    }
    c.barrier();
    // From here the s wire carries the x record and the x wire is discarded.
    c.gate(swap_gate(), {kS, kX});
    c.cx(kS, kY);
    switch (config.random_choice) {
        case RandomChoice::none:
            c.gate(ry_gate(config.phi), {kS});
            break;
        case RandomChoice::two_option:
            c.h(kA);
            c.gate(controlled(ry_gate(config.phi)), {kA, kS});
            break;
        case RandomChoice::four_option:
            c.h(kA2);
            c.h(kA1);
            c.gate(controlled(ry_gate(config.phi2)), {kA2, kS});
            c.gate(swap_gate(), {kA2, kA1});
            c.gate(controlled(ry_gate(config.phi1)), {kA2, kS});
            break;
    }
    c.measure(kS, kX);
    c.measure(kY, kY);
    if (config.random_choice == RandomChoice::two_option) {
        c.measure(kA, kA);
    } else if (config.random_choice == RandomChoice::four_option) {
        c.measure(kA2, kA1);
        c.measure(kA1, kA2);
    }
    return c;
}

Circuit build_any(const EraserConfig &config) {
    config.validate();
    if (config.layout == Layout::ibm_mapped) {
        return build_ibm(config);
    }
    return build_abstract(config);
}

}  // namespace

Circuit build_simple_eraser(const EraserConfig &config) {
    config.validate();
    if (config.random_choice != RandomChoice::none) {
        throw EraserError("the simple eraser has no random choice");
    }
    Circuit c(2, 2, {"s", "i"}, {"s", "i"});
    c.h(0);
    c.cx(0, 1);
    c.gate(phase_gate(config.theta), {0});
    if (config.closed) {
        c.h(0);
    }
    c.measure(0, 0);
    if (config.t_delay > 0) {
        c.delay(1, config.t_delay);
    }
    c.gate(ry_gate(config.phi), {1});
    c.measure(1, 1);
    return c;
}

Circuit build_two_recorder_eraser(const EraserConfig &config) {
    if (config.random_choice != RandomChoice::none) {
        throw EraserError("two_recorder takes random_choice = none");
    }
    return build_any(config);
}

Circuit build_random_choice_eraser(const EraserConfig &config) {
    if (config.random_choice != RandomChoice::two_option) {
        throw EraserError("random2 takes random_choice = two_option");
    }
    return build_any(config);
}

Circuit build_four_option_eraser(const EraserConfig &config) {
    if (config.random_choice != RandomChoice::four_option) {
        throw EraserError("random4 takes random_choice = four_option");
    }
    return build_any(config);
}

Circuit build_eraser(const std::string &builder, EraserConfig config) {
    if (builder == "simple") {
        config.random_choice = RandomChoice::none;
        return build_simple_eraser(config);
    }
    if (builder == "two_recorder") {
        config.random_choice = RandomChoice::none;
        return build_two_recorder_eraser(config);
    }
    if (builder == "random2") {
        config.random_choice = RandomChoice::two_option;
        return build_random_choice_eraser(config);
    }
    if (builder == "random4") {
        config.random_choice = RandomChoice::four_option;
        return build_four_option_eraser(config);
    }
    throw EraserError("unknown builder '" + builder + "'");
}

std::array<size_t, 6> two_recorder_slice_ends(const EraserConfig &config) {
    if (config.layout == Layout::ibm_mapped || config.random_choice != RandomChoice::none) {
        throw EraserError("slices are defined for the abstract no-choice circuit");
    }
    size_t d = config.t_delay > 0 ? 2 : 0;
    size_t ry = 6 + d + 2;
    return {1, 5, 6, 6 + d + 1, ry, ry + (config.closed ? 1 : 0)};
}

AnalyticPrediction analytic_prediction(double theta, double phi, bool closed) {
    AnalyticPrediction p;
    p.p0s = 0.5;
    p.p_1x1y = 0.5;
    p.p_0x1y = 0.5;
    if (closed) {
        p.p0s_given_1x1y = (1 + std::sin(phi) * std::cos(theta)) / 2;
        p.p0s_given_0x1y = (1 - std::sin(phi) * std::cos(theta)) / 2;
    } else {
        p.p0s_given_1x1y = (1 + std::cos(phi)) / 2;
        p.p0s_given_0x1y = (1 - std::cos(phi)) / 2;
    }
    p.p_succ = (1 + std::cos(phi)) / 2;
    p.D = std::cos(phi);
    p.V = std::abs(std::sin(phi));
    return p;
}

AnalyticPrediction analytic_prediction(const EraserConfig &config) {
    if (config.random_choice != RandomChoice::none) {
        throw EraserError("analytic_prediction needs an effective angle; use effective_phi");
    }
    return analytic_prediction(config.theta, config.phi, config.closed);
}

double effective_phi(const EraserConfig &config, const std::vector<int> &ancilla_bits) {
    switch (config.random_choice) {
        case RandomChoice::none:
            if (!ancilla_bits.empty()) {
                throw EraserError("no ancillas in a no-choice circuit");
            }
            return config.phi;
        case RandomChoice::two_option:
            if (ancilla_bits.size() != 1) {
                throw EraserError("two_option takes one ancilla bit");
            }
            return ancilla_bits[0] ? config.phi : 0.0;
        case RandomChoice::four_option:
            if (ancilla_bits.size() != 2) {
                throw EraserError("four_option takes two ancilla bits");
            }
            return (ancilla_bits[0] ? config.phi1 : 0.0) + (ancilla_bits[1] ? config.phi2 : 0.0);
    }
    return 0;
}

std::map<std::string, int> ibm_two_option_layout() { return {{"s", 41}, {"x", 42}, {"y", 53}, {"a", 40}}; }

std::map<std::string, int> ibm_four_option_layout() {
    return {{"s", 102}, {"x", 103}, {"y", 92}, {"a1", 104}, {"a2", 101}};
}

}  // namespace qeraser
