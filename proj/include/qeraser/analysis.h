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

#ifndef QERASER_ANALYSIS_H
#define QERASER_ANALYSIS_H

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "qeraser/engine.h"
#include "qeraser/eraser.h"

namespace qeraser {

struct AnalysisError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Outcome weights over a classical register: shot counts, or exact
/// probabilities scaled to a nominal shot total.
struct WeightedOutcomes {
    std::vector<std::string> clbit_labels;
    std::map<std::string, double> weights;

    static WeightedOutcomes from_counts(const CountsTable &counts);
    static WeightedOutcomes from_distribution(const Distribution &dist, double scale = 1);
    void merge(const WeightedOutcomes &other);
    double total() const;
};

/// How recorder outcomes split into subensembles.
///   two_recorder: g11 = 1_x1_y, g01 = 0_x1_y, y = 0 leaked; guess 0_s on g11.
///   single:       g11 = 1_i, g01 = 0_i, nothing leaked; guess 1_s on g11.
enum class RecorderScheme { two_recorder, single };

struct Conditionals {
    RecorderScheme scheme = RecorderScheme::two_recorder;
    double total = 0;
    double leaked = 0;
    double accepted = 0;
    double n0s = 0;
    double n_g11 = 0;
    double n_g11_0s = 0;
    double n_g01 = 0;
    double n_g01_0s = 0;

    double leakage_rate = 0;
    /// Over every shot that passes the ancilla filter, leaked or not.
    double p0s = 0;
    /// Absent when the subensemble is empty.
    std::optional<double> p0s_g11;
    std::optional<double> p0s_g01;
};

/// Groups outcomes by recorder result after keeping only those whose clbits
/// match `filter` (e.g. {"a": 1}). Leaked outcomes are counted and discarded.
Conditionals subensemble_conditionals(const WeightedOutcomes &outcomes,
                                      const std::map<std::string, int> &filter = {});

struct Distinguishability {
    double p_succ = 0;
    double D = 0;
    /// D < 0: the opposite guess would do better.
    bool inverted = false;
    double accepted = 0;
};

/// Which-way guessing from open-configuration data. Throws if nothing is accepted.
Distinguishability distinguishability(const Conditionals &open);
Distinguishability distinguishability(const WeightedOutcomes &open, const std::map<std::string, int> &filter = {});

/// (max - min) / (max + min) over the sampled grid. Needs two distinct
/// angles spanning at least half a period.
double visibility(std::span<const double> thetas, std::span<const double> p);

/// Least-squares fit of c + A cos(theta) + B sin(theta); V = sqrt(A^2 + B^2) / c.
/// Secondary estimator, not the extremum definition.
double cosine_fit_visibility(std::span<const double> thetas, std::span<const double> p);

double sigma_th(double p, double n);
/// sqrt(N_s N_f / (N^2 (N - 1))).
double sem(double successes, double n);

struct DualityCheck {
    double value = 0;
    bool satisfied = false;
};

DualityCheck duality_check(double V, double D, double tolerance = 1e-12);

/// One subensemble of a sweep, selected by ancilla outcomes.
struct SubensembleSpec {
    /// "all", "a0", "a1", "a00", "a10", "a01", "a11" (a1 bit first).
    std::string tag;
    std::map<std::string, int> filter;
    /// Angles mixed with equal weight in this subensemble; one entry once
    /// the ancillas are fixed.
    std::vector<double> phis;
};

/// "all" followed by one entry per ancilla outcome.
std::vector<SubensembleSpec> subensembles_for(const EraserConfig &config);

struct ReportRow {
    double theta = 0;
    double p0s = 0;
    std::optional<double> p0s_sem;
    std::optional<double> p0s_g11;
    std::optional<double> p0s_g11_sigma_th;
    std::optional<double> p0s_g11_sem;
    std::optional<double> p0s_g01;
    std::optional<double> p0s_g01_sigma_th;
    std::optional<double> p0s_g01_sem;
    double leakage_rate = 0;
    double accepted_shots = 0;
};

struct SubensembleReport {
    SubensembleSpec spec;
    std::vector<ReportRow> rows;
    std::optional<double> V_11;
    std::optional<double> V_01;
    std::optional<double> V_11_fit;
    std::optional<Distinguishability> distinguishability;
};

struct EraserReport {
    std::vector<SubensembleReport> subensembles;
    double phi = 0;
    std::string config_hash;

    /// The subensemble with the full configured erasure angle.
    const SubensembleReport &primary() const;
};

/// Builds the report from per-theta closed-configuration outcomes and,
/// optionally, pooled open-configuration outcomes for D.
EraserReport build_report(const EraserConfig &config, std::span<const double> thetas,
                          std::span<const WeightedOutcomes> closed, const WeightedOutcomes *open,
                          std::string config_hash);

inline constexpr const char *kCsvHeader =
    "theta_rad,p0s,p0s_sem,p0s_g11,p0s_g11_sigma_th,p0s_g11_sem,p0s_g01,p0s_g01_sigma_th,p0s_g01_sem,"
    "leakage_rate,accepted_shots";

std::string report_csv(const SubensembleReport &report);
/// {V_11, V_01, D, p_succ, duality, phi, config_hash} for the primary
/// subensemble, plus a "subensembles" array.
nlohmann::json report_json(const EraserReport &report);

/// Stable 64-bit FNV-1a digest, hex encoded.
std::string stable_hash(const std::string &text);

}  // namespace qeraser

#endif
