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

#ifndef QERASER_CIRCUIT_H
#define QERASER_CIRCUIT_H

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qeraser/gates.h"

namespace qeraser {

struct CircuitError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Seconds per scheduling cycle. 5000 dt ~ 1.111 us.
inline constexpr double kDefaultDt = 0.2222e-9;

enum class InstructionKind { gate, delay, measure, barrier };

const char *kind_name(InstructionKind kind);

/// Apply only when clbit currently holds value. Not produced by the eraser builders.
struct Condition {
    int clbit = 0;
    int value = 1;
    bool operator==(const Condition &) const = default;
};

struct Instruction {
    InstructionKind kind = InstructionKind::gate;
    std::optional<GateSpec> gate;
    std::vector<int> qubits;
    std::optional<int> clbit;
    /// In dt units; nonzero only for delays.
    int64_t duration = 0;
    std::optional<Condition> condition;
    /// Set on delays the scheduler inserted to align operand wires.
    bool padding = false;

    static Instruction make_gate(GateSpec gate, std::vector<int> qubits);
    static Instruction make_delay(std::vector<int> qubits, int64_t duration_dt);
    static Instruction make_measure(int qubit, int clbit);
    static Instruction make_barrier(std::vector<int> qubits);

    /// Gate name, or "delay" / "measure" / "barrier".
    std::string name() const;
    bool operator==(const Instruction &) const = default;
};

/// Ordered instruction list over quantum wires and classical bits.
class Circuit {
   public:
    Circuit(int num_qubits, int num_clbits, std::vector<std::string> wire_labels = {},
            std::vector<std::string> clbit_labels = {}, double dt = kDefaultDt);

    int num_qubits() const { return num_qubits_; }
    int num_clbits() const { return num_clbits_; }
    double dt() const { return dt_; }
    const std::vector<std::string> &wire_labels() const { return wire_labels_; }
    const std::vector<std::string> &clbit_labels() const { return clbit_labels_; }
    const std::vector<Instruction> &instructions() const { return instructions_; }
    size_t size() const { return instructions_.size(); }

    int wire_index(const std::string &label) const;
    int clbit_index(const std::string &label) const;

    /// Validates wires, clbits and per-kind invariants, then appends.
    Circuit &append(Instruction instruction);

    Circuit &gate(GateSpec gate, std::vector<int> qubits);
    Circuit &h(int q) { return gate(h_gate(), {q}); }
    Circuit &x(int q) { return gate(x_gate(), {q}); }
    Circuit &cx(int control, int target) { return gate(cx_gate(), {control, target}); }
    Circuit &delay(int q, int64_t duration_dt);
    Circuit &measure(int q, int clbit);
    /// Empty list means every wire.
    Circuit &barrier(std::vector<int> qubits = {});

    /// First `count` instructions, same registers.
    Circuit prefix(size_t count) const;
    /// Same registers, no instructions.
    Circuit empty_copy() const;

    bool has_measurement() const;
    bool operator==(const Circuit &) const = default;

   private:
    int num_qubits_;
    int num_clbits_;
    std::vector<std::string> wire_labels_;
    std::vector<std::string> clbit_labels_;
    double dt_;
    std::vector<Instruction> instructions_;
};

/// Instruction durations in dt. Unknown names fall back to the per-arity
/// defaults unless those are cleared.
struct DurationTable {
    std::map<std::string, int64_t> by_name{{"rz", 0}, {"p", 0}, {"id", 0}, {"ecr", 440}};
    std::optional<int64_t> one_qubit_default = 57;
    std::optional<int64_t> two_qubit_default = 440;
    int64_t measure = 1400;

    /// Throws CircuitError when a gate duration cannot be resolved.
    int64_t duration_of(const Instruction &instruction) const;
};

struct TimedInstruction {
    int64_t start = 0;
    int64_t duration = 0;
    bool operator==(const TimedInstruction &) const = default;
};

/// ASAP timing. `circuit` carries the inserted padding delays; `timing` is
/// parallel to its instruction list.
struct Schedule {
    Circuit circuit;
    std::vector<TimedInstruction> timing;
};

Schedule schedule(const Circuit &circuit, const DurationTable &durations = {});
int64_t total_duration(const Schedule &schedule);
/// Drops scheduler-inserted padding delays.
Circuit strip_padding(const Circuit &circuit);

/// Plain-text listing: one line per instruction with start/stop in dt and wires.
std::string format_schedule(const Schedule &schedule);

inline constexpr int kCircuitFormatVersion = 1;

nlohmann::json circuit_to_json(const Circuit &circuit);
Circuit circuit_from_json(const nlohmann::json &doc);

}  // namespace qeraser

#endif
