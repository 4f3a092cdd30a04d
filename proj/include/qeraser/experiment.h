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

#ifndef QERASER_EXPERIMENT_H
#define QERASER_EXPERIMENT_H

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qeraser/analysis.h"
#include "qeraser/engine.h"
#include "qeraser/eraser.h"
#include "qeraser/noise.h"

namespace qeraser {

/// Invalid experiment configuration (CLI exit code 2).
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Number, or text such as "pi/2", "3pi/4", "0.1pi", "-pi".
double parse_angle(const nlohmann::json &value);

struct ThetaGrid {
    double start = 0;
    double stop = 2 * 3.141592653589793;
    double step = 0.1 * 3.141592653589793;

    /// start, start + step, ... up to stop inclusive (within 1e-9 of a step).
    std::vector<double> points() const;
};

struct ExperimentConfig {
    std::string builder = "two_recorder";
    EraserConfig eraser;
    uint64_t num_shots = 5000;
    std::optional<uint64_t> seed;
    NoiseModel noise;
    ThetaGrid grid;
    int workers = 1;
    /// Exact distributions scaled to num_shots instead of sampled shots.
    bool exact = false;
    /// Also run the open configuration at each theta so D can be reported.
    bool measure_open = true;
    std::vector<int64_t> t_delays;

    std::string output_csv;
    std::string output_json;
    std::string output_counts;

    static ExperimentConfig from_json(const nlohmann::json &doc);
    nlohmann::json to_json() const;
    /// Throws ConfigError on an unknown builder, bad grid or bad shot count.
    void validate() const;
    /// Explicit seed, else ERASER_SEED, else 0.
    uint64_t resolved_seed() const;
    /// Digest of the canonical JSON form (output paths and workers excluded).
    std::string hash() const;
};

struct SweepResult {
    std::vector<double> thetas;
    std::vector<WeightedOutcomes> closed;
    std::optional<WeightedOutcomes> open;
    EraserReport report;
};

/// Runs every grid point. Point k uses seed derive_seed(seed, k, 0) and its
/// open-configuration run derive_seed(seed, k, 1).
SweepResult run_sweep(const ExperimentConfig &config);

/// {"config", "points": [{theta, counts}], "open": counts}
nlohmann::json sweep_counts_json(const ExperimentConfig &config, const SweepResult &result);
/// Rebuilds the report from a counts document written by sweep_counts_json.
SweepResult analyze_counts(const nlohmann::json &doc, ExperimentConfig *config_out = nullptr);

struct DelayPoint {
    int64_t t_delay = 0;
    SweepResult sweep;
};

/// One sweep per delay, all with the same seed.
std::vector<DelayPoint> run_delay_series(const ExperimentConfig &config);
/// t_delay_dt, t_delay_us, subensemble, V_11, V_01, D
std::string delay_series_csv(const std::vector<DelayPoint> &points, double dt);

/// Writes the primary CSV, one CSV per ancilla subensemble
/// (<stem>_<tag>.csv) and the scalar JSON, as configured.
void write_sweep_outputs(const ExperimentConfig &config, const SweepResult &result);

std::vector<std::string> preset_names();
ExperimentConfig preset(const std::string &name);

void write_text_file(const std::string &path, const std::string &text);
std::string read_text_file(const std::string &path);

}  // namespace qeraser

#endif
