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

#include "qeraser/engine.h"

#include <algorithm>
#include <cmath>
#include <thread>

#include "qeraser/rng.h"

namespace qeraser {

std::string bits_to_key(uint64_t bits, int num_clbits) {
    std::string key(static_cast<size_t>(num_clbits), '0');
    for (int c = 0; c < num_clbits; c++) {
        if (bits & (uint64_t{1} << c)) {
            key[static_cast<size_t>(c)] = '1';
        }
    }
    return key;
}

uint64_t key_to_bits(const std::string &key) {
    uint64_t bits = 0;
    for (size_t c = 0; c < key.size(); c++) {
        if (key[c] == '1') {
            bits |= uint64_t{1} << c;
        } else if (key[c] != '0') {
            throw EngineError("outcome key '" + key + "' is not a bit string");
        }
    }
    return bits;
}

double Distribution::probability(const std::map<std::string, int> &assignment) const {
    std::vector<std::pair<size_t, char>> want;
    for (const auto &[label, value] : assignment) {
        auto it = std::find(clbit_labels.begin(), clbit_labels.end(), label);
        if (it == clbit_labels.end()) {
            throw EngineError("unknown clbit label '" + label + "'");
        }
        want.emplace_back(static_cast<size_t>(it - clbit_labels.begin()), value ? '1' : '0');
    }
    double p = 0;
    for (const auto &[key, prob] : probabilities) {
        bool match = std::all_of(want.begin(), want.end(), [&](const auto &w) { return key[w.first] == w.second; });
        if (match) {
            p += prob;
        }
    }
    return p;
}

double total_variation(const Distribution &a, const Distribution &b) {
    if (a.clbit_labels != b.clbit_labels) {
        throw EngineError("total_variation: registers differ");
    }
    double tv = 0;
    for (const auto &[key, p] : a.probabilities) {
        auto it = b.probabilities.find(key);
        tv += std::abs(p - (it == b.probabilities.end() ? 0.0 : it->second));
    }
    for (const auto &[key, q] : b.probabilities) {
        if (!a.probabilities.contains(key)) {
            tv += std::abs(q);
        }
    }
    return tv / 2;
}

namespace {

bool condition_holds(const Instruction &in, uint64_t bits) {
    return !in.condition || static_cast<int>((bits >> in.condition->clbit) & 1) == in.condition->value;
}

// Zeroes every row and column whose qubit-q bit differs from `outcome`.
DensityMatrix project(const DensityMatrix &rho, int q, int outcome) {
    DensityMatrix out = rho;
    const size_t d = rho.dim();
    const uint64_t bit = uint64_t{1} << q;
    auto keep = [&](size_t i) { return ((i & bit) != 0) == (outcome == 1); };
    for (size_t r = 0; r < d; r++) {
        for (size_t c = 0; c < d; c++) {
            if (!keep(r) || !keep(c)) {
                out.matrix()(r, c) = 0;
            }
        }
    }
    return out;
}

struct ExactRunner {
    const Circuit &circuit;
    std::vector<QubitNoiseParams> params;
    const NoiseModel *noise;
    std::map<uint64_t, DensityMatrix> branches;

    void decohere(const std::vector<int> &qubits, int64_t duration_dt) {
        if (duration_dt <= 0) {
            return;
        }
        double seconds = static_cast<double>(duration_dt) * circuit.dt();
        for (int q : qubits) {
            const auto &p = params[static_cast<size_t>(q)];
            if (!p.has_decoherence()) {
                continue;
            }
            auto kraus = delay_channel(p, seconds);
            int target[] = {q};
            for (auto &[bits, rho] : branches) {
                rho = apply_kraus(rho, kraus, target);
            }
        }
    }

    void measure(const Instruction &in) {
        int q = in.qubits[0];
        int c = *in.clbit;
        const auto &p = params[static_cast<size_t>(q)];
        std::map<uint64_t, DensityMatrix> next;
        auto deposit = [&](uint64_t bits, DensityMatrix rho, double weight) {
            if (weight <= 0 || rho.trace().real() <= 0) {
                return;
            }
            rho *= weight;
            auto it = next.find(bits);
            if (it == next.end()) {
                next.emplace(bits, std::move(rho));
            } else {
                it->second += rho;
            }
        };
        for (auto &[bits, rho] : branches) {
            if (!condition_holds(in, bits)) {
                deposit(bits, rho, 1);
                continue;
            }
            uint64_t cleared = bits & ~(uint64_t{1} << c);
            uint64_t set = bits | (uint64_t{1} << c);
            DensityMatrix zero = project(rho, q, 0);
            DensityMatrix one = project(rho, q, 1);
            deposit(cleared, zero, 1 - p.readout_flip_01);
            deposit(set, zero, p.readout_flip_01);
            deposit(set, one, 1 - p.readout_flip_10);
            deposit(cleared, one, p.readout_flip_10);
        }
        branches = std::move(next);
    }

    ExactResult run(const Circuit &timed) {
        branches.emplace(0, DensityMatrix(timed.num_qubits()));
        bool gate_noise = noise && !noise->apply_during_delays_only;
        for (const auto &in : timed.instructions()) {
            switch (in.kind) {
                case InstructionKind::gate:
                    for (auto &[bits, rho] : branches) {
                        if (condition_holds(in, bits)) {
                            conjugate_inplace(rho, in.gate->matrix, in.qubits);
                        }
                    }
                    if (gate_noise) {
                        decohere(in.qubits, noise->durations.duration_of(in));
                    }
                    break;
                case InstructionKind::delay:
                    if (noise) {
                        decohere(in.qubits, in.duration);
                    }
                    break;
                case InstructionKind::measure:
                    measure(in);
                    if (gate_noise) {
                        decohere(in.qubits, noise->durations.measure);
                    }
                    break;
                case InstructionKind::barrier:
                    break;
            }
        }
        ExactResult result{DensityMatrix(timed.num_qubits(), Matrix(size_t{1} << timed.num_qubits())),
                           Distribution{timed.clbit_labels(), {}}};
        for (const auto &[bits, rho] : branches) {
            result.state += rho;
            result.distribution.probabilities[bits_to_key(bits, timed.num_clbits())] += rho.trace().real();
        }
        return result;
    }
};

void check_exact_size(const Circuit &circuit) {
    if (circuit.num_qubits() > 10) {
        throw EngineError("exact engine supports at most 10 qubits");
    }
}

}  // namespace

ExactResult run_exact(const Circuit &circuit) {
    check_exact_size(circuit);
    ExactRunner runner{circuit, std::vector<QubitNoiseParams>(static_cast<size_t>(circuit.num_qubits())), nullptr, {}};
    return runner.run(circuit);
}

ExactResult run_exact(const Circuit &circuit, const NoiseModel &noise) {
    check_exact_size(circuit);
    Schedule timed = schedule(circuit, noise.durations);
    ExactRunner runner{timed.circuit, noise.resolve(circuit), &noise, {}};
    return runner.run(timed.circuit);
}

StateVector simulate_statevector(const Circuit &circuit, StateVector state) {
    if (state.num_qubits() != circuit.num_qubits()) {
        throw EngineError("initial state width does not match circuit");
    }
    for (const auto &in : circuit.instructions()) {
        if (in.kind == InstructionKind::measure) {
            throw EngineError("simulate_statevector: circuit contains a measurement");
        }
        if (in.kind == InstructionKind::gate) {
            if (in.condition) {
                throw EngineError("simulate_statevector: conditioned gate");
            }
            apply_unitary_inplace(state, in.gate->matrix, in.qubits);
        }
    }
    return state;
}

uint64_t CountsTable::count(const std::string &key) const {
    auto it = counts_.find(key);
    return it == counts_.end() ? 0 : it->second;
}

void CountsTable::add(const std::string &key, uint64_t n) {
    if (key.size() != labels_.size()) {
        throw EngineError("outcome key '" + key + "' does not match register width");
    }
    key_to_bits(key);
    if (n == 0) {
        return;
    }
    counts_[key] += n;
    total_ += n;
}

void CountsTable::merge(const CountsTable &other) {
    if (other.labels_ != labels_) {
        throw EngineError("cannot merge counts over different registers");
    }
    for (const auto &[key, n] : other.counts_) {
        add(key, n);
    }
}

nlohmann::json CountsTable::to_json() const {
    nlohmann::json counts = nlohmann::json::object();
    for (const auto &[key, n] : counts_) {
        counts[key] = n;
    }
    return {{"clbits", labels_}, {"shots", total_}, {"counts", counts}};
}

CountsTable CountsTable::from_json(const nlohmann::json &doc, std::vector<std::string> labels) {
    try {
        const nlohmann::json *counts = &doc;
        if (doc.contains("counts") && doc["counts"].is_object()) {
            counts = &doc["counts"];
            if (doc.contains("clbits")) {
                labels = doc["clbits"].get<std::vector<std::string>>();
            }
        }
        if (labels.empty()) {
            throw EngineError("counts JSON does not name its clbits");
        }
        CountsTable table(labels);
        for (const auto &[key, n] : counts->items()) {
            table.add(key, n.get<uint64_t>());
        }
        if (doc.contains("shots") && doc["shots"].get<uint64_t>() != table.total()) {
            throw EngineError("counts do not sum to the declared shot total");
        }
        return table;
    } catch (const nlohmann::json::exception &e) {
        throw EngineError(std::string("malformed counts JSON: ") + e.what());
    }
}

std::string render_shot(uint64_t bits, const std::vector<std::string> &labels) {
    std::string out;
    for (size_t c = 0; c < labels.size(); c++) {
        if (!out.empty()) {
            out += ", ";
        }
        out += labels[c] + "=" + ((bits >> c) & 1 ? "1" : "0");
    }
    return out;
}

namespace {

struct CompiledOp {
    enum class Kind { unitary1, unitary2, unitary_n, kraus, measure } kind;
    std::vector<int> qubits;
    Matrix matrix;
    std::vector<Matrix> kraus;
    int clbit = -1;
    QubitNoiseParams readout;
    std::optional<Condition> condition;
};

void apply_1q(std::vector<Complex> &amps, const Matrix &m, int q) {
    const size_t bit = size_t{1} << q;
    const Complex a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
    for (size_t i = 0; i < amps.size(); i++) {
        if (i & bit) {
            continue;
        }
        Complex x = amps[i];
        Complex y = amps[i | bit];
        amps[i] = a * x + b * y;
        amps[i | bit] = c * x + d * y;
    }
}

void apply_2q(std::vector<Complex> &amps, const Matrix &m, int q0, int q1) {
    // q0 is the more significant local bit.
    const size_t b0 = size_t{1} << q0;
    const size_t b1 = size_t{1} << q1;
    const size_t off[4] = {0, b1, b0, b0 | b1};
    for (size_t i = 0; i < amps.size(); i++) {
        if (i & (b0 | b1)) {
            continue;
        }
        Complex in[4] = {amps[i], amps[i + off[1]], amps[i + off[2]], amps[i + off[3]]};
        for (size_t r = 0; r < 4; r++) {
            amps[i + off[r]] = m(r, 0) * in[0] + m(r, 1) * in[1] + m(r, 2) * in[2] + m(r, 3) * in[3];
        }
    }
}

std::vector<CompiledOp> compile(const Circuit &timed, const NoiseModel *noise) {
    std::vector<QubitNoiseParams> params(static_cast<size_t>(timed.num_qubits()));
    if (noise) {
        params = noise->resolve(timed);
    }
    bool gate_noise = noise && !noise->apply_during_delays_only;
    std::vector<CompiledOp> ops;
    auto decohere = [&](const std::vector<int> &qubits, int64_t duration_dt) {
        if (duration_dt <= 0) {
            return;
        }
        for (int q : qubits) {
            const auto &p = params[static_cast<size_t>(q)];
            if (!p.has_decoherence()) {
                continue;
            }
            CompiledOp op{CompiledOp::Kind::kraus, {q}, {}, {}, -1, {}, std::nullopt};
            op.kraus = delay_channel(p, static_cast<double>(duration_dt) * timed.dt());
            ops.push_back(std::move(op));
        }
    };
    for (const auto &in : timed.instructions()) {
        switch (in.kind) {
            case InstructionKind::gate: {
                auto kind = in.qubits.size() == 1   ? CompiledOp::Kind::unitary1
                            : in.qubits.size() == 2 ? CompiledOp::Kind::unitary2
                                                    : CompiledOp::Kind::unitary_n;
                ops.push_back({kind, in.qubits, in.gate->matrix, {}, -1, {}, in.condition});
                if (gate_noise) {
                    decohere(in.qubits, noise->durations.duration_of(in));
                }
                break;
            }
            case InstructionKind::delay:
                if (noise) {
                    decohere(in.qubits, in.duration);
                }
                break;
            case InstructionKind::measure:
                ops.push_back({CompiledOp::Kind::measure, in.qubits, {}, {}, *in.clbit,
                               params[static_cast<size_t>(in.qubits[0])], in.condition});
                if (gate_noise) {
                    decohere(in.qubits, noise->durations.measure);
                }
                break;
            case InstructionKind::barrier:
                break;
        }
    }
    return ops;
}

struct Trajectory {
    const std::vector<CompiledOp> &ops;
    int num_qubits;
    std::vector<Complex> amps;
    std::vector<Complex> scratch;

    uint64_t run(CounterRng &rng) {
        std::fill(amps.begin(), amps.end(), Complex{});
        amps[0] = 1;
        uint64_t bits = 0;
        for (const auto &op : ops) {
            if (op.condition && static_cast<int>((bits >> op.condition->clbit) & 1) != op.condition->value) {
                continue;
            }
            switch (op.kind) {
                case CompiledOp::Kind::unitary1:
                    apply_1q(amps, op.matrix, op.qubits[0]);
                    break;
                case CompiledOp::Kind::unitary2:
                    apply_2q(amps, op.matrix, op.qubits[0], op.qubits[1]);
                    break;
                case CompiledOp::Kind::unitary_n:
                    apply_local(amps.data(), 1, num_qubits, op.matrix, op.qubits);
                    break;
                case CompiledOp::Kind::kraus:
                    select_kraus(op, rng);
                    break;
                case CompiledOp::Kind::measure:
                    bits = measure(op, bits, rng);
                    break;
            }
        }
        return bits;
    }

    void select_kraus(const CompiledOp &op, CounterRng &rng) {
        double u = rng.uniform();
        double cumulative = 0;
        for (size_t k = 0; k < op.kraus.size(); k++) {
            scratch = amps;
            apply_1q(scratch, op.kraus[k], op.qubits[0]);
            double weight = 0;
            for (const auto &a : scratch) {
                weight += std::norm(a);
            }
            cumulative += weight;
            if ((u < cumulative && weight > 0) || k + 1 == op.kraus.size()) {
                if (weight <= 0) {
                    continue;
                }
                double scale = 1 / std::sqrt(weight);
                for (size_t i = 0; i < amps.size(); i++) {
                    amps[i] = scratch[i] * scale;
                }
                return;
            }
        }
        throw EngineError("Kraus selection failed: no operator with positive weight");
    }

    uint64_t measure(const CompiledOp &op, uint64_t bits, CounterRng &rng) {
        const size_t bit = size_t{1} << op.qubits[0];
        double p1 = 0;
        for (size_t i = 0; i < amps.size(); i++) {
            if (i & bit) {
                p1 += std::norm(amps[i]);
            }
        }
        int outcome = rng.uniform() < p1 ? 1 : 0;
        double keep = outcome ? p1 : 1 - p1;
        double scale = 1 / std::sqrt(keep);
        for (size_t i = 0; i < amps.size(); i++) {
            bool is_one = (i & bit) != 0;
            amps[i] = is_one == (outcome == 1) ? amps[i] * scale : Complex{};
        }
        if (op.readout.has_readout_error()) {
            outcome = readout_channel(op.readout, outcome, rng);
        }
        uint64_t mask = uint64_t{1} << op.clbit;
        return outcome ? (bits | mask) : (bits & ~mask);
    }
};

ShotResult run_compiled(const Circuit &circuit, const std::vector<CompiledOp> &ops, uint64_t num_shots,
                        uint64_t seed, const ShotOptions &options) {
    if (num_shots < 1) {
        throw EngineError("num_shots must be >= 1");
    }
    if (circuit.num_qubits() > 24) {
        throw EngineError("shot engine supports at most 24 qubits");
    }
    const int nc = circuit.num_clbits();
    const bool dense = nc <= 16;
    const unsigned workers = static_cast<unsigned>(std::clamp<uint64_t>(
        static_cast<uint64_t>(std::max(1, options.workers)), 1, num_shots));
    std::vector<std::vector<uint64_t>> dense_counts(workers);
    std::vector<std::map<uint64_t, uint64_t>> sparse_counts(workers);
    std::vector<uint64_t> records(options.keep_records ? num_shots : 0);

    auto work = [&](unsigned w) {
        uint64_t begin = num_shots * w / workers;
        uint64_t end = num_shots * (w + 1) / workers;
        Trajectory traj{ops, circuit.num_qubits(), std::vector<Complex>(size_t{1} << circuit.num_qubits()), {}};
        if (dense) {
            dense_counts[w].assign(size_t{1} << nc, 0);
        }
        for (uint64_t shot = begin; shot < end; shot++) {
            CounterRng rng(seed, shot);
            uint64_t bits = traj.run(rng);
            if (dense) {
                dense_counts[w][bits]++;
            } else {
                sparse_counts[w][bits]++;
            }
            if (options.keep_records) {
                records[shot] = bits;
            }
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> threads;
        for (unsigned w = 0; w < workers; w++) {
            threads.emplace_back(work, w);
        }
        for (auto &t : threads) {
            t.join();
        }
    }
    ShotResult result{CountsTable(circuit.clbit_labels()), std::move(records)};
    for (unsigned w = 0; w < workers; w++) {
        if (dense) {
            for (size_t bits = 0; bits < dense_counts[w].size(); bits++) {
                result.counts.add(bits_to_key(bits, nc), dense_counts[w][bits]);
            }
        } else {
            for (const auto &[bits, n] : sparse_counts[w]) {
                result.counts.add(bits_to_key(bits, nc), n);
            }
        }
    }
    return result;
}

}  // namespace

ShotResult run_shots(const Circuit &circuit, uint64_t num_shots, uint64_t seed, const ShotOptions &options) {
    return run_compiled(circuit, compile(circuit, nullptr), num_shots, seed, options);
}

ShotResult run_shots(const Circuit &circuit, const NoiseModel &noise, uint64_t num_shots, uint64_t seed,
                     const ShotOptions &options) {
    Schedule timed = schedule(circuit, noise.durations);
    return run_compiled(timed.circuit, compile(timed.circuit, &noise), num_shots, seed, options);
}

Circuit defer_measurements(const Circuit &circuit) {
    const auto &ins = circuit.instructions();
    std::vector<bool> mid(ins.size(), false);
    int ancillas = 0;
    for (size_t i = 0; i < ins.size(); i++) {
        if (ins[i].condition) {
            throw EngineError("cannot defer measurements past classically conditioned instructions");
        }
        if (ins[i].kind != InstructionKind::measure) {
            continue;
        }
        int q = ins[i].qubits[0];
        for (size_t j = i + 1; j < ins.size(); j++) {
            const auto &later = ins[j];
            if (later.kind == InstructionKind::barrier || later.padding) {
                continue;
            }
            if (std::find(later.qubits.begin(), later.qubits.end(), q) != later.qubits.end()) {
                mid[i] = true;
                ancillas++;
                break;
            }
        }
    }
    auto labels = circuit.wire_labels();
    for (int k = 0; k < ancillas; k++) {
        labels.push_back("defer" + std::to_string(k));
    }
    Circuit out(circuit.num_qubits() + ancillas, circuit.num_clbits(), labels, circuit.clbit_labels(), circuit.dt());
    std::vector<Instruction> tail;
    int next_ancilla = circuit.num_qubits();
    for (size_t i = 0; i < ins.size(); i++) {
        const auto &in = ins[i];
        if (in.kind != InstructionKind::measure) {
            out.append(in);
        } else if (mid[i]) {
            out.cx(in.qubits[0], next_ancilla);
            tail.push_back(Instruction::make_measure(next_ancilla, *in.clbit));
            next_ancilla++;
        } else {
            tail.push_back(in);
        }
    }
    for (auto &in : tail) {
        out.append(std::move(in));
    }
    return out;
}

DeferredCheck deferred_measurement_check(const Circuit &circuit, double tolerance) {
    Circuit deferred = defer_measurements(circuit);
    double tv = total_variation(run_exact(circuit).distribution, run_exact(deferred).distribution);
    return {tv < tolerance, tv};
}

}  // namespace qeraser
