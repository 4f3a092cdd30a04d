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

#include "qeraser/transpile.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>

#include "qeraser/engine.h"

namespace qeraser {

using std::numbers::pi;

CouplingGraph::CouplingGraph(int num_qubits, std::vector<std::pair<int, int>> edges, bool directed)
    : num_qubits_(num_qubits), edges_(std::move(edges)), directed_(directed) {
    if (num_qubits < 1) {
        throw TranspileError("coupling graph needs at least one qubit");
    }
    neighbors_.resize(static_cast<size_t>(num_qubits));
    for (auto [a, b] : edges_) {
        if (a < 0 || b < 0 || a >= num_qubits || b >= num_qubits || a == b) {
            throw TranspileError("coupling edge (" + std::to_string(a) + ", " + std::to_string(b) + ") is invalid");
        }
        neighbors_[static_cast<size_t>(a)].insert(b);
        neighbors_[static_cast<size_t>(b)].insert(a);
        native_.insert({a, b});
        if (!directed) {
            native_.insert({b, a});
        }
    }
}

CouplingGraph CouplingGraph::all_to_all(int num_qubits) {
    std::vector<std::pair<int, int>> edges;
    for (int a = 0; a < num_qubits; a++) {
        for (int b = a + 1; b < num_qubits; b++) {
            edges.emplace_back(a, b);
        }
    }
    CouplingGraph g(num_qubits, std::move(edges));
    g.all_to_all_ = true;
    return g;
}

bool CouplingGraph::adjacent(int a, int b) const {
    if (a < 0 || a >= num_qubits_) {
        return false;
    }
    return neighbors_[static_cast<size_t>(a)].contains(b);
}

bool CouplingGraph::native(int a, int b) const { return native_.contains({a, b}); }

std::vector<int> CouplingGraph::shortest_path(int a, int b) const {
    if (a < 0 || b < 0 || a >= num_qubits_ || b >= num_qubits_) {
        throw TranspileError("shortest_path: qubit out of range");
    }
    // BFS from b gives hop distances; walking from a through the smallest
    // neighbor that lowers the distance yields the lexicographic minimum.
    std::vector<int> dist(static_cast<size_t>(num_qubits_), -1);
    std::deque<int> queue{b};
    dist[static_cast<size_t>(b)] = 0;
    while (!queue.empty()) {
        int q = queue.front();
        queue.pop_front();
        for (int n : neighbors_[static_cast<size_t>(q)]) {
            if (dist[static_cast<size_t>(n)] < 0) {
                dist[static_cast<size_t>(n)] = dist[static_cast<size_t>(q)] + 1;
                queue.push_back(n);
            }
        }
    }
    if (dist[static_cast<size_t>(a)] < 0) {
        throw TranspileError("qubits " + std::to_string(a) + " and " + std::to_string(b) + " are not connected");
    }
    std::vector<int> path{a};
    int q = a;
    while (q != b) {
        for (int n : neighbors_[static_cast<size_t>(q)]) {
            if (dist[static_cast<size_t>(n)] == dist[static_cast<size_t>(q)] - 1) {
                q = n;
                break;
            }
        }
        path.push_back(q);
    }
    return path;
}

CouplingGraph CouplingGraph::from_json(const nlohmann::json &doc) {
    try {
        int n = doc.at("num_qubits").get<int>();
        if (doc.value("all_to_all", false)) {
            return all_to_all(n);
        }
        std::vector<std::pair<int, int>> edges;
        for (const auto &e : doc.at("edges")) {
            if (e.size() != 2) {
                throw TranspileError("coupling edges must be pairs");
            }
            edges.emplace_back(e[0].get<int>(), e[1].get<int>());
        }
        return CouplingGraph(n, std::move(edges), doc.value("directed", false));
    } catch (const nlohmann::json::exception &e) {
        throw TranspileError(std::string("malformed coupling JSON: ") + e.what());
    }
}

nlohmann::json CouplingGraph::to_json() const {
    nlohmann::json j;
    j["num_qubits"] = num_qubits_;
    if (all_to_all_) {
        j["all_to_all"] = true;
    }
    j["edges"] = nlohmann::json::array();
    for (auto [a, b] : edges_) {
        j["edges"].push_back({a, b});
    }
    if (directed_) {
        j["directed"] = true;
    }
    return j;
}

CouplingGraph kyiv_subgraph() {
    return CouplingGraph(127, {{40, 41}, {41, 42}, {41, 53}, {92, 102}, {101, 102}, {102, 103}, {103, 104}});
}

namespace {

constexpr double kAngleEps = 1e-12;

double wrap(double a) {
    a = std::remainder(a, 2 * pi);
    return a;
}

void push_rz(std::vector<GateApplication> &out, double angle) {
    angle = wrap(angle);
    if (std::abs(angle) > kAngleEps) {
        out.push_back({rz_gate(angle), {0}});
    }
}

Matrix product_in_time_order(const std::vector<GateApplication> &seq) {
    Matrix m = Matrix::identity(2);
    for (const auto &g : seq) {
        m = g.gate.matrix * m;
    }
    return m;
}

}  // namespace

std::vector<GateApplication> lower_one_qubit(const Matrix &u) {
    if (u.dim() != 2) {
        throw TranspileError("lower_one_qubit takes a 2x2 matrix");
    }
    std::vector<GateApplication> out;
    if (distance_up_to_phase(u, Matrix::identity(2)) < kAngleEps) {
        return out;
    }
    if (distance_up_to_phase(u, x_gate().matrix) < kAngleEps) {
        return {{x_gate(), {0}}};
    }
    if (distance_up_to_phase(u, sx_gate().matrix) < kAngleEps) {
        return {{sx_gate(), {0}}};
    }
    // u = e^{ia} Rz(phi) Ry(theta) Rz(lambda).
    Complex det = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
    Complex root = std::sqrt(det);
    Complex v00 = u(0, 0) / root;
    Complex v10 = u(1, 0) / root;
    double theta = 2 * std::atan2(std::abs(v10), std::abs(v00));
    double sum = std::abs(v00) > kAngleEps ? -2 * std::arg(v00) : 0.0;
    double diff = std::abs(v10) > kAngleEps ? 2 * std::arg(v10) : 0.0;
    double phi = (sum + diff) / 2;
    double lambda = (sum - diff) / 2;

    if (std::abs(theta) < kAngleEps) {
        push_rz(out, phi + lambda);
    } else if (std::abs(theta - pi / 2) < kAngleEps) {
        push_rz(out, lambda - pi / 2);
        out.push_back({sx_gate(), {0}});
        push_rz(out, phi + pi / 2);
    } else if (std::abs(theta - pi) < kAngleEps) {
        push_rz(out, lambda + pi);
        out.push_back({x_gate(), {0}});
        push_rz(out, phi);
    } else {
        push_rz(out, lambda);
        out.push_back({sx_gate(), {0}});
        push_rz(out, theta + pi);
        out.push_back({sx_gate(), {0}});
        push_rz(out, phi + pi);
    }
    if (distance_up_to_phase(product_in_time_order(out), u) > 1e-9) {
        throw std::logic_error("one-qubit lowering failed to reproduce the unitary");
    }
    return out;
}

namespace {

struct Lowerer {
    const std::function<bool(int, int)> &native;
    Circuit &out;
    std::optional<Condition> condition;

    void emit(GateSpec gate, std::vector<int> qubits) {
        Instruction in = Instruction::make_gate(std::move(gate), std::move(qubits));
        in.condition = condition;
        out.append(std::move(in));
    }

    void one(const Matrix &u, int q) {
        for (auto &g : lower_one_qubit(u)) {
            emit(std::move(g.gate), {q});
        }
    }

    void one(const GateSpec &g, int q) {
        if (is_primitive_gate(g.name) && g.name != "ecr") {
            if (g.name != "rz" || std::abs(wrap(g.params.at(0))) > kAngleEps) {
                emit(g, {q});
            }
            return;
        }
        one(g.matrix, q);
    }

    bool is_native(int a, int b) const { return !native || native(a, b); }

    void cx(int c, int t) {
        if (is_native(c, t)) {
            one(rz_gate(-pi / 2), c);
            one(x_gate(), t);
            emit(ecr_gate(), {c, t});
            one(x_gate(), c);
            one(sx_gate(), t);
        } else if (is_native(t, c)) {
            one(h_gate(), c);
            one(h_gate(), t);
            cx(t, c);
            one(h_gate(), c);
            one(h_gate(), t);
        } else {
            throw TranspileError("no ECR available between wires " + std::to_string(c) + " and " + std::to_string(t));
        }
    }

    void ecr(int a, int b) {
        if (is_native(a, b)) {
            emit(ecr_gate(), {a, b});
            return;
        }
        // ECR = X(a) CX(a, b) (S(a) (x) SX(b)) up to phase.
        one(phase_gate(pi / 2), a);
        one(sx_gate(), b);
        cx(a, b);
        one(x_gate(), a);
    }

    void gate(const GateSpec &g, const std::vector<int> &q) {
        if (g.arity == 1) {
            one(g, q[0]);
            return;
        }
        if (g.arity != 2) {
            throw TranspileError("cannot lower " + std::to_string(g.arity) + "-qubit gate '" + g.name + "'");
        }
        int a = q[0], b = q[1];
        if (g.name == "cx") {
            cx(a, b);
        } else if (g.name == "ecr") {
            ecr(a, b);
        } else if (g.name == "cz") {
            one(h_gate(), b);
            cx(a, b);
            one(h_gate(), b);
        } else if (g.name == "swap") {
            cx(a, b);
            cx(b, a);
            cx(a, b);
        } else if (g.name == "cry") {
            double phi = g.params.at(0);
            one(ry_gate(phi / 2), b);
            cx(a, b);
            one(ry_gate(-phi / 2), b);
            cx(a, b);
        } else if (g.name == "crz") {
            double lambda = g.params.at(0);
            one(rz_gate(lambda / 2), b);
            cx(a, b);
            one(rz_gate(-lambda / 2), b);
            cx(a, b);
        } else if (g.name == "cp") {
            double lambda = g.params.at(0);
            one(rz_gate(lambda / 2), a);
            gate(controlled(rz_gate(lambda)), {a, b});
        } else {
            throw TranspileError("unknown two-qubit gate '" + g.name + "'");
        }
    }
};

}  // namespace

Circuit decompose_to_basis(const Circuit &circuit, const std::function<bool(int, int)> &native) {
    Circuit out = circuit.empty_copy();
    for (const auto &in : circuit.instructions()) {
        if (in.kind != InstructionKind::gate) {
            out.append(in);
            continue;
        }
        Lowerer lower{native, out, in.condition};
        lower.gate(*in.gate, in.qubits);
    }
    return out;
}

TranspiledCircuit route(const Circuit &circuit, const CouplingGraph &coupling, const std::vector<int> &initial_layout,
                        const DurationTable &durations) {
    const int n = circuit.num_qubits();
    if (static_cast<int>(initial_layout.size()) != n) {
        throw TranspileError("initial layout must place every logical wire");
    }
    std::vector<int> log2phys = initial_layout;
    std::map<int, int> phys2log;
    for (int k = 0; k < n; k++) {
        int p = initial_layout[static_cast<size_t>(k)];
        if (p < 0 || p >= coupling.num_qubits()) {
            throw TranspileError("layout places a wire outside the coupling graph");
        }
        if (!phys2log.emplace(p, k).second) {
            throw TranspileError("initial layout is not injective");
        }
    }

    TranspiledCircuit t;
    t.initial_layout = initial_layout;
    t.logical_labels = circuit.wire_labels();
    std::set<int> used(initial_layout.begin(), initial_layout.end());
    // Instructions over physical indices, compacted once every wire is known.
    std::vector<Instruction> routed;

    auto swap_physical = [&](int p, int q) {
        routed.push_back(Instruction::make_gate(swap_gate(), {p, q}));
        used.insert(p);
        used.insert(q);
        auto lp = phys2log.find(p);
        auto lq = phys2log.find(q);
        std::optional<int> a = lp == phys2log.end() ? std::nullopt : std::optional<int>(lp->second);
        std::optional<int> b = lq == phys2log.end() ? std::nullopt : std::optional<int>(lq->second);
        phys2log.erase(p);
        phys2log.erase(q);
        if (a) {
            phys2log[q] = *a;
            log2phys[static_cast<size_t>(*a)] = q;
        }
        if (b) {
            phys2log[p] = *b;
            log2phys[static_cast<size_t>(*b)] = p;
        }
        t.swap_count++;
    };

    for (const auto &in : circuit.instructions()) {
        if (in.kind == InstructionKind::gate && in.qubits.size() == 2) {
            int pa = log2phys[static_cast<size_t>(in.qubits[0])];
            int pb = log2phys[static_cast<size_t>(in.qubits[1])];
            if (!coupling.adjacent(pa, pb)) {
                auto path = coupling.shortest_path(pa, pb);
                for (size_t k = 0; k + 2 < path.size(); k++) {
                    swap_physical(path[k], path[k + 1]);
                }
            }
        } else if (in.kind == InstructionKind::gate && in.qubits.size() > 2) {
            throw TranspileError("routing supports gates on at most two qubits");
        }
        t.layout_at.push_back(log2phys);
        Instruction mapped = in;
        for (auto &q : mapped.qubits) {
            q = log2phys[static_cast<size_t>(q)];
        }
        routed.push_back(std::move(mapped));
    }
    t.final_layout = log2phys;

    t.physical_qubits.assign(used.begin(), used.end());
    std::map<int, int> wire_of;
    std::vector<std::string> labels;
    for (size_t k = 0; k < t.physical_qubits.size(); k++) {
        wire_of[t.physical_qubits[k]] = static_cast<int>(k);
        labels.push_back("q" + std::to_string(t.physical_qubits[k]));
    }
    Circuit physical(static_cast<int>(t.physical_qubits.size()), circuit.num_clbits(), labels, circuit.clbit_labels(),
                     circuit.dt());
    for (auto &in : routed) {
        for (auto &q : in.qubits) {
            q = wire_of.at(q);
        }
        physical.append(std::move(in));
    }
    auto native = [&](int a, int b) {
        return coupling.native(t.physical_qubits[static_cast<size_t>(a)], t.physical_qubits[static_cast<size_t>(b)]);
    };
    t.circuit = decompose_to_basis(physical, native);
    t.schedule = schedule(t.circuit, durations);
    return t;
}

TranspiledCircuit route(const Circuit &circuit, const CouplingGraph &coupling,
                        const std::map<std::string, int> &initial_layout, const DurationTable &durations) {
    std::vector<int> layout;
    for (const auto &label : circuit.wire_labels()) {
        auto it = initial_layout.find(label);
        if (it == initial_layout.end()) {
            throw TranspileError("layout does not place wire '" + label + "'");
        }
        layout.push_back(it->second);
    }
    if (initial_layout.size() != layout.size()) {
        throw TranspileError("layout names wires the circuit does not have");
    }
    return route(circuit, coupling, layout, durations);
}

nlohmann::json transpiled_to_json(const TranspiledCircuit &t) {
    nlohmann::json j = circuit_to_json(t.circuit);
    nlohmann::json initial = nlohmann::json::object();
    nlohmann::json final_ = nlohmann::json::object();
    for (size_t k = 0; k < t.logical_labels.size(); k++) {
        initial[t.logical_labels[k]] = t.initial_layout[k];
        final_[t.logical_labels[k]] = t.final_layout[k];
    }
    j["layout"] = {{"physical_qubits", t.physical_qubits}, {"initial", initial}, {"final", final_}};
    j["swap_count"] = t.swap_count;
    j["total_duration_dt"] = total_duration(t.schedule);
    return j;
}

namespace {

size_t first_measurement(const Circuit &c) {
    for (size_t i = 0; i < c.size(); i++) {
        if (c.instructions()[i].kind == InstructionKind::measure) {
            return i;
        }
    }
    return c.size();
}

}  // namespace

EquivalenceReport verify_equivalence(const Circuit &original, const TranspiledCircuit &lowered) {
    const int n = original.num_qubits();
    const int m = lowered.circuit.num_qubits();
    if (n > 10 || m > 10) {
        throw TranspileError("verify_equivalence supports at most 10 qubits");
    }
    EquivalenceReport report;

    size_t cut = first_measurement(original);
    Circuit original_prefix = original.prefix(cut);
    Circuit lowered_prefix = lowered.circuit.prefix(first_measurement(lowered.circuit));
    const auto &end_layout = cut < lowered.layout_at.size() ? lowered.layout_at[cut] : lowered.final_layout;

    std::map<int, int> wire_of;
    for (size_t k = 0; k < lowered.physical_qubits.size(); k++) {
        wire_of[lowered.physical_qubits[k]] = static_cast<int>(k);
    }
    auto embed = [&](uint64_t logical, const std::vector<int> &layout) {
        uint64_t idx = 0;
        for (int k = 0; k < n; k++) {
            if (logical >> k & 1) {
                idx |= uint64_t{1} << wire_of.at(layout[static_cast<size_t>(k)]);
            }
        }
        return idx;
    };

    const size_t dim = size_t{1} << n;
    Matrix expected(dim), actual(dim);
    double leak = 0;
    for (size_t j = 0; j < dim; j++) {
        StateVector col = simulate_statevector(original_prefix, StateVector::basis(n, j));
        StateVector phys = simulate_statevector(lowered_prefix, StateVector::basis(m, embed(j, lowered.initial_layout)));
        double kept = 0;
        for (size_t i = 0; i < dim; i++) {
            expected(i, j) = col[i];
            actual(i, j) = phys[embed(i, end_layout)];
            kept += std::norm(actual(i, j));
        }
        leak = std::max(leak, std::abs(1 - kept));
    }
    report.unitary_distance = std::max(distance_up_to_phase(actual, expected), leak);
    report.tv_distance = total_variation(run_exact(original).distribution, run_exact(lowered.circuit).distribution);
    return report;
}

}  // namespace qeraser
