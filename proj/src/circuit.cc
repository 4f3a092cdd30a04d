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

#include "qeraser/circuit.h"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

namespace qeraser {

const char *kind_name(InstructionKind kind) {
    switch (kind) {
        case InstructionKind::gate:
            return "gate";
        case InstructionKind::delay:
            return "delay";
        case InstructionKind::measure:
            return "measure";
        case InstructionKind::barrier:
            return "barrier";
    }
    return "?";
}

Instruction Instruction::make_gate(GateSpec gate, std::vector<int> qubits) {
    Instruction in;
    in.kind = InstructionKind::gate;
    in.gate = std::move(gate);
    in.qubits = std::move(qubits);
    return in;
}

Instruction Instruction::make_delay(std::vector<int> qubits, int64_t duration_dt) {
    Instruction in;
    in.kind = InstructionKind::delay;
    in.qubits = std::move(qubits);
    in.duration = duration_dt;
    return in;
}

Instruction Instruction::make_measure(int qubit, int clbit) {
    Instruction in;
    in.kind = InstructionKind::measure;
    in.qubits = {qubit};
    in.clbit = clbit;
    return in;
}

Instruction Instruction::make_barrier(std::vector<int> qubits) {
    Instruction in;
    in.kind = InstructionKind::barrier;
    in.qubits = std::move(qubits);
    return in;
}

std::string Instruction::name() const {
    if (kind == InstructionKind::gate) {
        return gate ? gate->name : "?";
    }
    return kind_name(kind);
}

Circuit::Circuit(int num_qubits, int num_clbits, std::vector<std::string> wire_labels,
                 std::vector<std::string> clbit_labels, double dt)
    : num_qubits_(num_qubits),
      num_clbits_(num_clbits),
      wire_labels_(std::move(wire_labels)),
      clbit_labels_(std::move(clbit_labels)),
      dt_(dt) {
    if (num_qubits < 1) {
        throw CircuitError("circuit needs at least one qubit");
    }
    if (num_clbits < 0 || num_clbits > 63) {
        throw CircuitError("num_clbits must lie in [0, 63]");
    }
    if (!(dt > 0)) {
        throw CircuitError("dt must be positive");
    }
    if (wire_labels_.empty()) {
        for (int q = 0; q < num_qubits; q++) {
            wire_labels_.push_back("q" + std::to_string(q));
        }
    }
    if (clbit_labels_.empty()) {
        for (int c = 0; c < num_clbits; c++) {
            clbit_labels_.push_back("c" + std::to_string(c));
        }
    }
    if (wire_labels_.size() != static_cast<size_t>(num_qubits) ||
        clbit_labels_.size() != static_cast<size_t>(num_clbits)) {
        throw CircuitError("label count does not match register size");
    }
    if (std::set(wire_labels_.begin(), wire_labels_.end()).size() != wire_labels_.size() ||
        std::set(clbit_labels_.begin(), clbit_labels_.end()).size() != clbit_labels_.size()) {
        throw CircuitError("labels must be unique");
    }
}

int Circuit::wire_index(const std::string &label) const {
    auto it = std::find(wire_labels_.begin(), wire_labels_.end(), label);
    if (it == wire_labels_.end()) {
        throw CircuitError("unknown wire label '" + label + "'");
    }
    return static_cast<int>(it - wire_labels_.begin());
}

int Circuit::clbit_index(const std::string &label) const {
    auto it = std::find(clbit_labels_.begin(), clbit_labels_.end(), label);
    if (it == clbit_labels_.end()) {
        throw CircuitError("unknown clbit label '" + label + "'");
    }
    return static_cast<int>(it - clbit_labels_.begin());
}

Circuit &Circuit::append(Instruction in) {
    std::set<int> seen;
    for (int q : in.qubits) {
        if (q < 0 || q >= num_qubits_) {
            throw CircuitError("wire " + std::to_string(q) + " out of range for " + in.name());
        }
        if (!seen.insert(q).second) {
            throw CircuitError("duplicate wire " + std::to_string(q) + " in " + in.name());
        }
    }
    switch (in.kind) {
        case InstructionKind::gate:
            if (!in.gate) {
                throw CircuitError("gate instruction without a gate");
            }
            if (in.qubits.size() != static_cast<size_t>(in.gate->arity)) {
                throw CircuitError("gate " + in.gate->name + " expects " + std::to_string(in.gate->arity) +
                                   " wire(s)");
            }
            if (in.duration != 0 || in.clbit) {
                throw CircuitError("gate instructions carry no duration or clbit");
            }
            break;
        case InstructionKind::delay:
            if (in.qubits.empty() || in.duration < 0 || in.gate || in.clbit) {
                throw CircuitError("delay needs wires and a duration >= 0");
            }
            break;
        case InstructionKind::measure:
            if (in.qubits.size() != 1 || !in.clbit || in.gate || in.duration != 0) {
                throw CircuitError("measure needs exactly one wire and one clbit");
            }
            if (*in.clbit < 0 || *in.clbit >= num_clbits_) {
                throw CircuitError("clbit " + std::to_string(*in.clbit) + " out of range");
            }
            break;
        case InstructionKind::barrier:
            if (in.gate || in.clbit || in.duration != 0) {
                throw CircuitError("barrier carries wires only");
            }
            if (in.qubits.empty()) {
                for (int q = 0; q < num_qubits_; q++) {
                    in.qubits.push_back(q);
                }
            }
            break;
    }
    if (in.condition) {
        if (in.condition->clbit < 0 || in.condition->clbit >= num_clbits_ ||
            (in.condition->value != 0 && in.condition->value != 1)) {
            throw CircuitError("invalid classical condition");
        }
    }
    instructions_.push_back(std::move(in));
    return *this;
}

Circuit &Circuit::gate(GateSpec g, std::vector<int> qubits) {
    return append(Instruction::make_gate(std::move(g), std::move(qubits)));
}

Circuit &Circuit::delay(int q, int64_t duration_dt) { return append(Instruction::make_delay({q}, duration_dt)); }

Circuit &Circuit::measure(int q, int clbit) { return append(Instruction::make_measure(q, clbit)); }

Circuit &Circuit::barrier(std::vector<int> qubits) { return append(Instruction::make_barrier(std::move(qubits))); }

Circuit Circuit::prefix(size_t count) const {
    Circuit out = empty_copy();
    count = std::min(count, instructions_.size());
    out.instructions_.assign(instructions_.begin(), instructions_.begin() + static_cast<ptrdiff_t>(count));
    return out;
}

Circuit Circuit::empty_copy() const { return Circuit(num_qubits_, num_clbits_, wire_labels_, clbit_labels_, dt_); }

bool Circuit::has_measurement() const {
    return std::any_of(instructions_.begin(), instructions_.end(),
                       [](const Instruction &in) { return in.kind == InstructionKind::measure; });
}

int64_t DurationTable::duration_of(const Instruction &in) const {
    switch (in.kind) {
        case InstructionKind::delay:
            return in.duration;
        case InstructionKind::barrier:
            return 0;
        case InstructionKind::measure:
            return measure;
        case InstructionKind::gate:
            break;
    }
    auto it = by_name.find(in.gate->name);
    if (it != by_name.end()) {
        return it->second;
    }
    const auto &fallback = in.gate->arity == 1 ? one_qubit_default : two_qubit_default;
    if (!fallback) {
        throw CircuitError("no duration known for gate '" + in.gate->name + "'");
    }
    return *fallback;
}

Schedule schedule(const Circuit &circuit, const DurationTable &durations) {
    Schedule out{circuit.empty_copy(), {}};
    std::vector<int64_t> wire_free(static_cast<size_t>(circuit.num_qubits()), 0);
    for (const auto &in : circuit.instructions()) {
        int64_t duration = durations.duration_of(in);
        int64_t start = 0;
        for (int q : in.qubits) {
            start = std::max(start, wire_free[static_cast<size_t>(q)]);
        }
        if (in.qubits.size() > 1) {
            for (int q : in.qubits) {
                int64_t idle = start - wire_free[static_cast<size_t>(q)];
                if (idle > 0) {
                    Instruction pad = Instruction::make_delay({q}, idle);
                    pad.padding = true;
                    out.circuit.append(std::move(pad));
                    out.timing.push_back({wire_free[static_cast<size_t>(q)], idle});
                }
            }
        }
        out.circuit.append(in);
        out.timing.push_back({start, duration});
        for (int q : in.qubits) {
            wire_free[static_cast<size_t>(q)] = start + duration;
        }
    }
    return out;
}

int64_t total_duration(const Schedule &s) {
    int64_t end = 0;
    for (const auto &t : s.timing) {
        end = std::max(end, t.start + t.duration);
    }
    return end;
}

Circuit strip_padding(const Circuit &circuit) {
    Circuit out = circuit.empty_copy();
    for (const auto &in : circuit.instructions()) {
        if (!in.padding) {
            out.append(in);
        }
    }
    return out;
}

std::string format_schedule(const Schedule &s) {
    std::ostringstream os;
    char line[256];
    std::snprintf(line, sizeof(line), "%10s %10s %8s  %-10s %s\n", "start_dt", "stop_dt", "dur_dt", "op", "wires");
    os << line;
    const auto &labels = s.circuit.wire_labels();
    for (size_t i = 0; i < s.timing.size(); i++) {
        const auto &in = s.circuit.instructions()[i];
        const auto &t = s.timing[i];
        std::string wires;
        for (int q : in.qubits) {
            if (!wires.empty()) {
                wires += ",";
            }
            wires += labels[static_cast<size_t>(q)];
        }
        std::string op = in.padding ? "delay*" : in.name();
        if (in.gate && !in.gate->params.empty()) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "(%.6g)", in.gate->params[0]);
            op += buf;
        }
        std::snprintf(line, sizeof(line), "%10lld %10lld %8lld  %-10s %s\n", static_cast<long long>(t.start),
                      static_cast<long long>(t.start + t.duration), static_cast<long long>(t.duration), op.c_str(),
                      wires.c_str());
        os << line;
    }
    std::snprintf(line, sizeof(line), "total_duration_dt %lld\n", static_cast<long long>(total_duration(s)));
    os << line;
    return os.str();
}

nlohmann::json circuit_to_json(const Circuit &circuit) {
    nlohmann::json doc;
    doc["format_version"] = kCircuitFormatVersion;
    doc["num_qubits"] = circuit.num_qubits();
    doc["num_clbits"] = circuit.num_clbits();
    doc["dt"] = circuit.dt();
    doc["wire_labels"] = circuit.wire_labels();
    doc["clbit_labels"] = circuit.clbit_labels();
    auto instructions = nlohmann::json::array();
    for (const auto &in : circuit.instructions()) {
        nlohmann::json j;
        j["kind"] = kind_name(in.kind);
        j["name"] = in.name();
        j["params"] = in.gate ? in.gate->params : std::vector<double>{};
        j["qubits"] = in.qubits;
        j["clbit"] = in.clbit ? nlohmann::json(*in.clbit) : nlohmann::json(nullptr);
        j["duration"] = in.kind == InstructionKind::delay ? nlohmann::json(in.duration) : nlohmann::json(nullptr);
        if (in.padding) {
            j["padding"] = true;
        }
        if (in.condition) {
            j["condition"] = {{"clbit", in.condition->clbit}, {"value", in.condition->value}};
        }
        instructions.push_back(std::move(j));
    }
    doc["instructions"] = std::move(instructions);
    return doc;
}

Circuit circuit_from_json(const nlohmann::json &doc) {
    try {
        int version = doc.at("format_version").get<int>();
        if (version != kCircuitFormatVersion) {
            throw CircuitError("unsupported circuit format_version " + std::to_string(version));
        }
        int nq = doc.at("num_qubits").get<int>();
        int nc = doc.at("num_clbits").get<int>();
        double dt = doc.value("dt", kDefaultDt);
        auto wires = doc.value("wire_labels", std::vector<std::string>{});
        auto clbits = doc.value("clbit_labels", std::vector<std::string>{});
        Circuit c(nq, nc, wires, clbits, dt);
        for (const auto &j : doc.at("instructions")) {
            std::string kind = j.at("kind").get<std::string>();
            auto qubits = j.at("qubits").get<std::vector<int>>();
            Instruction in;
            if (kind == "gate") {
                auto params = j.value("params", std::vector<double>{});
                in = Instruction::make_gate(make_gate(j.at("name").get<std::string>(), params), qubits);
            } else if (kind == "delay") {
                in = Instruction::make_delay(qubits, j.at("duration").get<int64_t>());
                in.padding = j.value("padding", false);
            } else if (kind == "measure") {
                if (qubits.size() != 1 || j.at("clbit").is_null()) {
                    throw CircuitError("measure needs exactly one wire and one clbit");
                }
                in = Instruction::make_measure(qubits[0], j.at("clbit").get<int>());
            } else if (kind == "barrier") {
                in = Instruction::make_barrier(qubits);
            } else {
                throw CircuitError("unknown instruction kind '" + kind + "'");
            }
            if (j.contains("condition") && !j["condition"].is_null()) {
                in.condition = Condition{j["condition"].at("clbit").get<int>(), j["condition"].at("value").get<int>()};
            }
            c.append(std::move(in));
        }
        return c;
    } catch (const nlohmann::json::exception &e) {
        throw CircuitError(std::string("malformed circuit JSON: ") + e.what());
    }
}

}  // namespace qeraser
