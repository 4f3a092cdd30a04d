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

#ifndef QERASER_ENGINE_H
#define QERASER_ENGINE_H

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qeraser/circuit.h"
#include "qeraser/linalg.h"
#include "qeraser/noise.h"

namespace qeraser {

struct EngineError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Classical register value as text: character j is clbit j, so keys read in
/// declared clbit order ("0111" = s=0, x=1, y=1, a=1 for an s,x,y,a register).
std::string bits_to_key(uint64_t bits, int num_clbits);
uint64_t key_to_bits(const std::string &key);

/// Exact joint distribution over the classical register.
struct Distribution {
    std::vector<std::string> clbit_labels;
    std::map<std::string, double> probabilities;

    /// Marginal probability that every listed clbit label holds its value.
    double probability(const std::map<std::string, int> &assignment) const;
};

double total_variation(const Distribution &a, const Distribution &b);

struct ExactResult {
    /// Unconditional post-measurement state (classical branches summed).
    DensityMatrix state;
    Distribution distribution;
};

/// Density-matrix evolution. Measurements split the state into classical
/// branches keyed by the register value; readout flips mix branches linearly.
/// With a noise model the circuit is scheduled first so that scheduler padding
/// delays decohere like explicit ones.
ExactResult run_exact(const Circuit &circuit);
ExactResult run_exact(const Circuit &circuit, const NoiseModel &noise);

/// Gates only; delays and barriers are skipped, measurements rejected.
StateVector simulate_statevector(const Circuit &circuit, StateVector initial);

/// Outcome frequencies keyed like Distribution.
class CountsTable {
   public:
    CountsTable() = default;
    explicit CountsTable(std::vector<std::string> clbit_labels) : labels_(std::move(clbit_labels)) {}

    const std::vector<std::string> &clbit_labels() const { return labels_; }
    const std::map<std::string, uint64_t> &counts() const { return counts_; }
    uint64_t total() const { return total_; }
    uint64_t count(const std::string &key) const;

    void add(const std::string &key, uint64_t n = 1);
    /// Commutative merge; labels must agree.
    void merge(const CountsTable &other);

    /// {"clbits": [...], "shots": N, "counts": {key: n}}
    nlohmann::json to_json() const;
    /// Accepts the wrapped form above or a flat {key: n} object with `labels`.
    static CountsTable from_json(const nlohmann::json &doc, std::vector<std::string> labels = {});

    bool operator==(const CountsTable &) const = default;

   private:
    std::vector<std::string> labels_;
    std::map<std::string, uint64_t> counts_;
    uint64_t total_ = 0;
};

/// "s=0, x=1, y=1, a=1"
std::string render_shot(uint64_t bits, const std::vector<std::string> &labels);

struct ShotOptions {
    int workers = 1;
    bool keep_records = false;
};

struct ShotResult {
    CountsTable counts;
    /// Per-shot register values in shot order (only with keep_records).
    std::vector<uint64_t> records;
};

/// Statevector trajectories. Shot i draws from CounterRng(seed, i): one draw
/// per measurement, per readout flip and per Kraus selection, so results do
/// not depend on the worker count.
ShotResult run_shots(const Circuit &circuit, uint64_t num_shots, uint64_t seed, const ShotOptions &options = {});
ShotResult run_shots(const Circuit &circuit, const NoiseModel &noise, uint64_t num_shots, uint64_t seed,
                     const ShotOptions &options = {});

struct DeferredCheck {
    bool equivalent = false;
    double tv_distance = 0;
};

/// Rewrites every mid-circuit measurement as a CX onto a fresh ancilla that is
/// measured at the end, then compares exact register distributions.
Circuit defer_measurements(const Circuit &circuit);
DeferredCheck deferred_measurement_check(const Circuit &circuit, double tolerance = 1e-12);

}  // namespace qeraser

#endif
