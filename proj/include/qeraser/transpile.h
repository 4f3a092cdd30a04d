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

#ifndef QERASER_TRANSPILE_H
#define QERASER_TRANSPILE_H

#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qeraser/circuit.h"

namespace qeraser {

struct TranspileError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Physical connectivity. Undirected unless `directed`, in which case an
/// edge (a, b) means ECR runs natively with a as the first operand.
class CouplingGraph {
   public:
    CouplingGraph(int num_qubits, std::vector<std::pair<int, int>> edges, bool directed = false);
    static CouplingGraph all_to_all(int num_qubits);

    int num_qubits() const { return num_qubits_; }
    const std::vector<std::pair<int, int>> &edges() const { return edges_; }
    bool directed() const { return directed_; }

    bool adjacent(int a, int b) const;
    /// ECR(a, b) is native. Always true for undirected graphs on adjacent pairs.
    bool native(int a, int b) const;
    /// Fewest-hop path from a to b inclusive; among equal-length paths the
    /// lexicographically smallest. Throws if disconnected.
    std::vector<int> shortest_path(int a, int b) const;

    /// {num_qubits, edges: [[a, b], ...], directed?, all_to_all?}
    static CouplingGraph from_json(const nlohmann::json &doc);
    nlohmann::json to_json() const;

   private:
    int num_qubits_;
    std::vector<std::pair<int, int>> edges_;
    bool directed_;
    bool all_to_all_ = false;
    std::vector<std::set<int>> neighbors_;
    std::set<std::pair<int, int>> native_;
};

/// The Eagle-processor regions used for the two- and four-option runs:
/// 40-41, 41-42, 41-53 and 92-102, 101-102, 102-103, 103-104 on 127 qubits.
CouplingGraph kyiv_subgraph();

/// Rz-SX-Rz-SX-Rz rewrite of a one-qubit unitary on operand 0, in time order.
/// Shorter when an Euler angle vanishes; equal to `u` up to global phase.
std::vector<GateApplication> lower_one_qubit(const Matrix &u);

/// Rewrites every gate into {rz, sx, x, ecr}. `native(a, b)` reports whether
/// ECR(a, b) runs natively on circuit wires a, b; reversed CX are flipped by
/// H conjugation. Delays, measurements and barriers pass through.
Circuit decompose_to_basis(const Circuit &circuit, const std::function<bool(int, int)> &native = {});

struct TranspiledCircuit {
    /// Primitive-basis circuit over the physical qubits in `physical_qubits`
    /// (wire k is physical_qubits[k], labelled "q<index>").
    Circuit circuit{1, 0};
    std::vector<int> physical_qubits;
    /// Logical wire -> physical qubit, before any SWAP and after the last.
    std::vector<int> initial_layout;
    std::vector<int> final_layout;
    /// Layout in force when each original instruction executed.
    std::vector<std::vector<int>> layout_at;
    std::vector<std::string> logical_labels;
    int swap_count = 0;
    Schedule schedule{Circuit{1, 0}, {}};
};

/// Places logical wire k on physical qubit initial_layout[k], inserts SWAPs
/// along shortest paths (moving the first operand toward the second) for
/// uncoupled two-qubit gates, lowers to the primitive basis and schedules.
TranspiledCircuit route(const Circuit &circuit, const CouplingGraph &coupling, const std::vector<int> &initial_layout,
                        const DurationTable &durations = {});

/// Same, with the layout given by wire label.
TranspiledCircuit route(const Circuit &circuit, const CouplingGraph &coupling,
                        const std::map<std::string, int> &initial_layout, const DurationTable &durations = {});

/// Circuit JSON plus {"layout": {physical_qubits, initial, final}, "swap_count"}.
nlohmann::json transpiled_to_json(const TranspiledCircuit &t);

struct EquivalenceReport {
    /// Max-norm distance up to global phase between the measurement-free
    /// prefixes, restricted to the logical subspace.
    double unitary_distance = 0;
    /// Total variation between exact clbit distributions.
    double tv_distance = 0;
};

EquivalenceReport verify_equivalence(const Circuit &original, const TranspiledCircuit &lowered);

}  // namespace qeraser

#endif
