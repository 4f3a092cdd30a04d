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

#ifndef QERASER_ERASER_H
#define QERASER_ERASER_H

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qeraser/circuit.h"

namespace qeraser {

struct EraserError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class RandomChoice { none, two_option, four_option };
enum class Layout { abstract, ibm_mapped, ionq_mapped };

const char *random_choice_name(RandomChoice choice);
const char *layout_name(Layout layout);
RandomChoice parse_random_choice(const std::string &name);
Layout parse_layout(const std::string &name);

struct EraserConfig {
    double theta = 0;
    /// Rotation angle of the two-option and no-choice circuits.
    double phi = 0;
    /// Four-option angles; a1 selects phi1, a2 selects phi2.
    double phi1 = 0;
    double phi2 = 0;
    /// Closed configuration: the recombining H on s is present.
    bool closed = true;
    RandomChoice random_choice = RandomChoice::none;
    /// Delay before the erasure, in dt.
    int64_t t_delay = 0;
    Layout layout = Layout::abstract;

    /// Throws EraserError unless theta is in [0, 2 pi), angles are finite
    /// and t_delay >= 0.
    void validate() const;
};

/// Two wires s, i; clbits s, i.
Circuit build_simple_eraser(const EraserConfig &config);

/// Three wires s, x, y in the slice order of the equivalent layout:
/// H(s); anti-controlled CX(s, x); CX(s, y); P(theta)(s); [delay x, y];
/// CX(x, y); Ry(phi)(x); [H(s)]; measure s, x, y.
///
/// With layout = ibm_mapped the recorder entangling gates run in the mapped
/// order, D_s is measured mid-circuit, the delay follows it on the s wire,
/// and SWAP(s, x) hands the x record to the s wire before CX and Ry.
Circuit build_two_recorder_eraser(const EraserConfig &config);

/// Two-recorder circuit plus ancilla a: H(a) and CRy(phi) from a onto x.
/// Clbits s, x, y, a.
Circuit build_random_choice_eraser(const EraserConfig &config);

/// Two-recorder circuit plus ancillas a1, a2: CRy(phi1) from a1 and CRy(phi2)
/// from a2 onto x. Clbits s, x, y, a1, a2. The ibm_mapped variant applies the
/// phi2 rotation first, swaps the ancilla wires and applies phi1 from the a2
/// wire, so D_a1 is read from the a2 wire and D_a2 from the a1 wire.
Circuit build_four_option_eraser(const EraserConfig &config);

/// Dispatch on "simple", "two_recorder", "random2", "random4". Sets
/// random_choice from the builder name.
Circuit build_eraser(const std::string &builder, EraserConfig config);

/// Instruction counts that end slices 1..6 of the abstract two-recorder
/// circuit built from `config` (slice 6 equals slice 5 when open).
std::array<size_t, 6> two_recorder_slice_ends(const EraserConfig &config);

/// Closed-form noiseless statistics of the abstract two-recorder circuit.
struct AnalyticPrediction {
    double p0s = 0;
    double p_1x1y = 0;
    double p_0x1y = 0;
    double p0s_given_1x1y = 0;
    double p0s_given_0x1y = 0;
    double p_succ = 0;
    double D = 0;
    double V = 0;
};

AnalyticPrediction analytic_prediction(double theta, double phi, bool closed = true);
AnalyticPrediction analytic_prediction(const EraserConfig &config);

/// Rotation angle selected by the given ancilla outcomes: {} for no choice,
/// {a} for two_option, {a1, a2} for four_option.
double effective_phi(const EraserConfig &config, const std::vector<int> &ancilla_bits);

/// Physical qubits for the mapped circuits. Keys are wire labels.
std::map<std::string, int> ibm_two_option_layout();
std::map<std::string, int> ibm_four_option_layout();

}  // namespace qeraser

#endif
