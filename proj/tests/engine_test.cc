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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qeraser/eraser.h"

using namespace qeraser;
using std::numbers::pi;

namespace {

EraserConfig two_recorder(double theta, double phi, bool closed = true) {
    EraserConfig c;
    c.theta = theta;
    c.phi = phi;
    c.closed = closed;
    return c;
}

double sigma(double p, double n) { return std::sqrt(p * (1 - p) / n); }

double conditional(const Distribution &d, int x, int y) {
    double joint = d.probability({{"s", 0}, {"x", x}, {"y", y}});
    return joint / d.probability({{"x", x}, {"y", y}});
}

}  // namespace

TEST(engine, key_encoding) {
    EXPECT_EQ(bits_to_key(0b110, 3), "011");
    EXPECT_EQ(key_to_bits("011"), 0b110u);
    EXPECT_EQ(render_shot(0b110, {"s", "x", "y"}), "s=0, x=1, y=1");
}

TEST(engine, two_recorder_outcomes_at_theta_zero) {
    auto d = run_exact(build_two_recorder_eraser(two_recorder(0, pi / 2))).distribution;
    EXPECT_EQ(d.clbit_labels, (std::vector<std::string>{"s", "x", "y"}));
    EXPECT_NEAR(d.probability({{"s", 0}, {"x", 1}, {"y", 1}}), 0.5, 1e-12);
    EXPECT_NEAR(d.probability({{"s", 1}, {"x", 0}, {"y", 1}}), 0.5, 1e-12);
    double others = 0;
    for (const auto &[k, p] : d.probabilities) {
        if (k != "011" && k != "101") others += p;
    }
    EXPECT_NEAR(others, 0, 1e-12);
}

TEST(engine, marginal_is_flat_and_no_leakage) {
    for (double phi : {0.0, 0.4, pi / 3, 2.0}) {
        for (double theta : {0.0, 0.7, 2.5, 5.9}) {
            auto d = run_exact(build_two_recorder_eraser(two_recorder(theta, phi))).distribution;
            EXPECT_NEAR(d.probability({{"s", 0}}), 0.5, 1e-12);
            EXPECT_NEAR(d.probability({{"x", 0}, {"y", 0}}), 0, 1e-12);
            EXPECT_NEAR(d.probability({{"x", 1}, {"y", 0}}), 0, 1e-12);
        }
    }
}

TEST(engine, slice_states_match_closed_form) {
    const Complex i(0, 1);
    for (auto [theta, phi] : {std::pair{0.3, 1.1}, {2.0, pi / 2}, {5.5, 0.2}, {pi, pi / 6}}) {
        EraserConfig c = two_recorder(theta, phi);
        Circuit circuit = build_two_recorder_eraser(c);
        auto ends = two_recorder_slice_ends(c);
        // Amplitude index s + 2x + 4y; kets below are |s>|x y>.
        auto ket = [](int s, int x, int y) { return static_cast<size_t>(s + 2 * x + 4 * y); };
        const double r = 1 / std::sqrt(2.0), cs = std::cos(phi / 2), sn = std::sin(phi / 2);
        const Complex e = std::exp(i * theta);
        std::vector<std::vector<Complex>> expected(6, std::vector<Complex>(8));
        expected[0][ket(0, 0, 0)] = r;
        expected[0][ket(1, 0, 0)] = r;
        expected[1][ket(0, 1, 0)] = r;
        expected[1][ket(1, 0, 1)] = r;
        expected[2][ket(0, 1, 0)] = r;
        expected[2][ket(1, 0, 1)] = r * e;
        expected[3][ket(0, 1, 1)] = r;
        expected[3][ket(1, 0, 1)] = r * e;
        expected[4][ket(0, 0, 1)] = -r * sn;
        expected[4][ket(0, 1, 1)] = r * cs;
        expected[4][ket(1, 0, 1)] = r * e * cs;
        expected[4][ket(1, 1, 1)] = r * e * sn;
        expected[5][ket(0, 1, 1)] = 0.5 * (cs + e * sn);
        expected[5][ket(1, 1, 1)] = 0.5 * (cs - e * sn);
        expected[5][ket(0, 0, 1)] = -0.5 * (sn - e * cs);
        expected[5][ket(1, 0, 1)] = -0.5 * (sn + e * cs);
        for (size_t k = 0; k < 6; k++) {
            StateVector got = simulate_statevector(circuit.prefix(ends[k]), StateVector(3));
            EXPECT_GE(fidelity(got, StateVector(3, expected[k])), 1 - 1e-12) << "slice " << k + 1;
            // The exact engine agrees with the trajectory evolution.
            EXPECT_GE(run_exact(circuit.prefix(ends[k])).state.fidelity(StateVector(3, expected[k])), 1 - 1e-12);
        }
    }
}

TEST(engine, fair_coin) {
    Circuit c(1, 1);
    c.h(0).measure(0, 0);
    const uint64_t n = 1000000;
    auto r = run_shots(c, n, 5);
    EXPECT_EQ(r.counts.total(), n);
    EXPECT_NEAR(static_cast<double>(r.counts.count("1")) / n, 0.5, 5 * sigma(0.5, n));
}

TEST(engine, shot_conditional_fringe) {
    const uint64_t n = 5000;
    auto r = run_shots(build_two_recorder_eraser(two_recorder(0, pi / 4)), n, 17);
    double n11 = r.counts.count("011") + r.counts.count("111");
    double p = r.counts.count("011") / n11;
    double expected = (1 + std::sin(pi / 4)) / 2;
    EXPECT_NEAR(p, expected, 5 * sigma(expected, n11));
}

TEST(engine, shots_deterministic_across_runs_and_workers) {
    EraserConfig c = two_recorder(1.2, pi / 3);
    c.random_choice = RandomChoice::two_option;
    c.layout = Layout::ibm_mapped;
    c.t_delay = 5000;
    Circuit circuit = build_random_choice_eraser(c);
    NoiseModel noise;
    noise.by_label["x"] = QubitNoiseParams{50e-6, 20e-6, 0.01, 0.02};
    noise.by_label["y"] = QubitNoiseParams{kInfiniteTime, 10e-6, 0.01, 0.02};
    ShotOptions one;
    one.keep_records = true;
    auto a = run_shots(circuit, noise, 3000, 99, one);
    auto b = run_shots(circuit, noise, 3000, 99, one);
    EXPECT_EQ(a.counts, b.counts);
    EXPECT_EQ(a.records, b.records);
    for (int w : {2, 3, 8}) {
        ShotOptions o;
        o.workers = w;
        o.keep_records = true;
        auto c2 = run_shots(circuit, noise, 3000, 99, o);
        EXPECT_EQ(c2.counts, a.counts) << w;
        EXPECT_EQ(c2.records, a.records) << w;
    }
    EXPECT_NE(run_shots(circuit, noise, 3000, 100).counts, a.counts);
}

TEST(engine, trajectories_agree_with_density_matrix) {
    EraserConfig c = two_recorder(0.9, pi / 4);
    c.random_choice = RandomChoice::two_option;
    c.layout = Layout::ibm_mapped;
    c.t_delay = 25000;
    Circuit circuit = build_random_choice_eraser(c);
    NoiseModel noise;
    for (const char *w : {"s", "x", "y", "a"}) noise.by_label[w] = QubitNoiseParams{40e-6, 30e-6, 0.03, 0.05};
    auto exact = run_exact(circuit, noise).distribution;
    const uint64_t n = 20000;
    auto shots = run_shots(circuit, noise, n, 3);
    double total = 0;
    for (const auto &[key, p] : exact.probabilities) {
        total += p;
        double f = static_cast<double>(shots.counts.count(key)) / n;
        EXPECT_NEAR(f, p, 5 * sigma(p, n) + 1e-12) << key;
    }
    EXPECT_NEAR(total, 1, 1e-12);
    for (const auto &[key, count] : shots.counts.counts()) {
        EXPECT_TRUE(exact.probabilities.contains(key) || count == 0) << key;
    }
}

TEST(engine, readout_flips_mix_branches) {
    Circuit c(1, 1, {"q"}, {"q"});
    c.measure(0, 0);
    NoiseModel noise;
    noise.by_label["q"] = QubitNoiseParams{kInfiniteTime, kInfiniteTime, 0.1, 0.3};
    auto d = run_exact(c, noise).distribution;
    EXPECT_NEAR(d.probability({{"q", 1}}), 0.1, 1e-15);
    Circuit c1(1, 1, {"q"}, {"q"});
    c1.x(0).measure(0, 0);
    EXPECT_NEAR(run_exact(c1, noise).distribution.probability({{"q", 0}}), 0.3, 1e-15);
}

TEST(engine, dephasing_during_delay_reduces_fringe) {
    EraserConfig c = two_recorder(0, pi / 2);
    c.t_delay = 40000;
    NoiseModel noise;
    noise.by_label["x"] = QubitNoiseParams{kInfiniteTime, 8e-6, 0, 0};
    Circuit circuit = build_two_recorder_eraser(c);
    auto d = run_exact(circuit, noise).distribution;
    // Only x dephases, during its delay and any scheduler padding after its
    // first gate (before that x is |0> and has no coherence to lose), so
    // p(0s|1x1y) = (1 + e^{-t/T2}) / 2 with t that idle time.
    Schedule sched = schedule(circuit);
    const int x = circuit.wire_index("x");
    int64_t idle = 0;
    bool touched = false;
    for (const auto &in : sched.circuit.instructions()) {
        if (in.qubits.empty() || std::find(in.qubits.begin(), in.qubits.end(), x) == in.qubits.end()) continue;
        if (in.kind == InstructionKind::gate) touched = true;
        if (in.kind == InstructionKind::delay && touched) idle += in.duration;
    }
    EXPECT_GT(idle, 40000);
    double decay = std::exp(-static_cast<double>(idle) * kDefaultDt / 8e-6);
    EXPECT_NEAR(conditional(d, 1, 1), (1 + decay) / 2, 1e-12);
    // Without noise the delay is a no-op.
    auto clean = run_exact(build_two_recorder_eraser(c)).distribution;
    EXPECT_NEAR(conditional(clean, 1, 1), 1, 1e-12);
}

TEST(engine, mid_circuit_measurement_collapses) {
    Circuit c(2, 2);
    c.h(0).measure(0, 0).cx(0, 1).measure(1, 1);
    auto d = run_exact(c).distribution;
    EXPECT_NEAR(d.probabilities.at("00"), 0.5, 1e-15);
    EXPECT_NEAR(d.probabilities.at("11"), 0.5, 1e-15);
    auto s = run_shots(c, 1000, 1);
    EXPECT_EQ(s.counts.count("00") + s.counts.count("11"), 1000u);
}

TEST(engine, classical_condition) {
    Circuit c(2, 2);
    c.h(0).measure(0, 0);
    Instruction flip = Instruction::make_gate(x_gate(), {1});
    flip.condition = Condition{0, 1};
    c.append(flip).measure(1, 1);
    auto d = run_exact(c).distribution;
    EXPECT_NEAR(d.probabilities.at("11"), 0.5, 1e-15);
    EXPECT_NEAR(d.probabilities.at("00"), 0.5, 1e-15);
    auto s = run_shots(c, 500, 2);
    EXPECT_EQ(s.counts.count("00") + s.counts.count("11"), 500u);
    EXPECT_THROW(deferred_measurement_check(c), EngineError);
}

TEST(engine, deferred_measurement_on_mapped_circuit) {
    for (double theta : {0.0, 0.9, pi, 4.4}) {
        for (int64_t t : {int64_t{0}, int64_t{5000}}) {
            EraserConfig c = two_recorder(theta, pi / 3);
            c.random_choice = RandomChoice::two_option;
            c.layout = Layout::ibm_mapped;
            c.t_delay = t;
            auto check = deferred_measurement_check(build_random_choice_eraser(c));
            EXPECT_TRUE(check.equivalent);
            EXPECT_LT(check.tv_distance, 1e-12);
        }
    }
    // A measurement-free prefix has nothing to defer.
    Circuit plain(2, 2);
    plain.h(0).cx(0, 1).measure(0, 0).measure(1, 1);
    EXPECT_EQ(deferred_measurement_check(plain).tv_distance, 0);
    EXPECT_EQ(defer_measurements(plain), plain);
}

TEST(engine, deferred_circuit_is_end_measured) {
    EraserConfig c = two_recorder(0.5, 0.5);
    c.layout = Layout::ibm_mapped;
    Circuit deferred = defer_measurements(build_two_recorder_eraser(c));
    bool seen_measure = false;
    for (const auto &in : deferred.instructions()) {
        if (in.kind == InstructionKind::measure) {
            seen_measure = true;
        } else if (in.kind == InstructionKind::gate) {
            EXPECT_FALSE(seen_measure) << "gate after a measurement";
        }
    }
    EXPECT_EQ(deferred.num_qubits(), 4);
}

TEST(engine, counts_json_round_trip) {
    CountsTable t({"s", "x", "y"});
    t.add("011", 7);
    t.add("101", 3);
    auto j = t.to_json();
    EXPECT_EQ(j["shots"], 10);
    EXPECT_EQ(CountsTable::from_json(j), t);
    EXPECT_THROW(t.add("01"), EngineError);
    CountsTable u({"s", "x", "y"});
    u.add("011");
    t.merge(u);
    EXPECT_EQ(t.count("011"), 8u);
}

TEST(engine, total_variation_distance) {
    Distribution a{{"q"}, {{"0", 0.5}, {"1", 0.5}}};
    Distribution b{{"q"}, {{"0", 1.0}}};
    EXPECT_NEAR(total_variation(a, b), 0.5, 1e-15);
    EXPECT_EQ(total_variation(a, a), 0);
}
