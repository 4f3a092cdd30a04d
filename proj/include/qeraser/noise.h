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

#ifndef QERASER_NOISE_H
#define QERASER_NOISE_H

#include <limits>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "qeraser/circuit.h"
#include "qeraser/linalg.h"
#include "qeraser/rng.h"

namespace qeraser {

struct NoiseError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline constexpr double kInfiniteTime = std::numeric_limits<double>::infinity();

/// Relaxation times in seconds (infinity = no decay) and asymmetric readout flips.
struct QubitNoiseParams {
    double t1 = kInfiniteTime;
    double t2 = kInfiniteTime;
    /// p(report 1 | state 0)
    double readout_flip_01 = 0;
    /// p(report 0 | state 1)
    double readout_flip_10 = 0;

    /// Throws NoiseError unless t1, t2 > 0, t2 <= 2 t1 and flips lie in [0, 1].
    void validate() const;
    bool has_decoherence() const { return t1 != kInfiniteTime || t2 != kInfiniteTime; }
    bool has_readout_error() const { return readout_flip_01 > 0 || readout_flip_10 > 0; }
    bool operator==(const QubitNoiseParams &) const = default;
};

/// Amplitude damping with gamma = 1 - exp(-t/T1) followed by pure dephasing at
/// 1/T_phi = 1/T2 - 1/(2 T1), so coherences decay by exactly exp(-t/T2).
/// Zero-weight operators are dropped; t = 0 yields {I}.
std::vector<Matrix> delay_channel(const QubitNoiseParams &params, double seconds);

/// Reported bit for `ideal_outcome`, consuming one draw from `rng`.
int readout_channel(const QubitNoiseParams &params, int ideal_outcome, CounterRng &rng);

/// Per-wire noise keyed by wire label. Wires not listed are noiseless.
struct NoiseModel {
    std::map<std::string, QubitNoiseParams> by_label;
    /// When false, gates and measurements also decohere for their scheduled durations.
    bool apply_during_delays_only = true;
    DurationTable durations;

    /// Params for every wire of `circuit`; throws if a label is not a wire.
    std::vector<QubitNoiseParams> resolve(const Circuit &circuit) const;
    bool has_decoherence() const;
    bool has_readout_error() const;
};

/// Parses {label: {t1_us, t2_us, readout_flip_01, readout_flip_10}}; missing
/// or null times mean infinite.
std::map<std::string, QubitNoiseParams> noise_block_from_json(const nlohmann::json &block);
nlohmann::json noise_block_to_json(const std::map<std::string, QubitNoiseParams> &block);

}  // namespace qeraser

#endif
