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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "qeraser/experiment.h"
#include "qeraser/transpile.h"

using namespace qeraser;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

// Flags shared by sweep, delay-series and preset. Every set flag overrides
// the corresponding config field.
struct Overrides {
    std::string config_path;
    std::optional<std::string> builder, layout, phi, phi1, phi2, theta_start, theta_stop, theta_step;
    std::optional<int64_t> t_delay;
    std::optional<uint64_t> shots, seed;
    std::optional<int> workers;
    bool open = false, closed = false, exact = false, no_open_run = false;
    std::optional<std::string> csv, json, counts;

    void add_to(CLI::App *app, bool with_config) {
        if (with_config) {
            app->add_option("-c,--config", config_path, "Experiment config JSON file")->check(CLI::ExistingFile);
        }
        app->add_option("--builder", builder, "simple, two_recorder, random2 or random4");
        app->add_option("--layout", layout, "abstract, ibm_mapped or ionq_mapped");
        app->add_option("--phi", phi, "Eraser angle (number or e.g. pi/4)");
        app->add_option("--phi1", phi1, "Four-option angle for a1");
        app->add_option("--phi2", phi2, "Four-option angle for a2");
        app->add_option("--t-delay", t_delay, "Delay on the recorders, in dt");
        app->add_option("--theta-start", theta_start, "First grid angle");
        app->add_option("--theta-stop", theta_stop, "Last grid angle (inclusive)");
        app->add_option("--theta-step", theta_step, "Grid step");
        app->add_option("-n,--shots", shots, "Shots per grid point");
        app->add_option("--seed", seed, "Seed (falls back to ERASER_SEED, then 0)");
        app->add_option("-j,--workers", workers, "Worker threads");
        app->add_flag("--open", open, "Run the open interferometer (no final H)");
        app->add_flag("--closed", closed, "Run the closed interferometer");
        app->add_flag("--exact", exact, "Exact distributions scaled to the shot count");
        app->add_flag("--no-open-run", no_open_run, "Skip the open runs used for D");
        app->add_option("--csv", csv, "Per-theta CSV output path");
        app->add_option("--json", json, "Scalar report JSON output path");
        app->add_option("--counts", counts, "Raw counts JSON output path");
    }

    ExperimentConfig load() const {
        if (config_path.empty()) {
            return ExperimentConfig{};
        }
        return load_file(config_path);
    }

    static ExperimentConfig load_file(const std::string &path) {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(read_text_file(path));
        } catch (const nlohmann::json::exception &e) {
            throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
        } catch (const std::runtime_error &e) {
            throw ConfigError(e.what());
        }
        return ExperimentConfig::from_json(doc);
    }

    void apply(ExperimentConfig &c) const {
        if (builder) c.builder = *builder;
        if (layout) c.eraser.layout = parse_layout(*layout);
        if (phi) c.eraser.phi = parse_angle(*phi);
        if (phi1) c.eraser.phi1 = parse_angle(*phi1);
        if (phi2) c.eraser.phi2 = parse_angle(*phi2);
        if (t_delay) c.eraser.t_delay = *t_delay;
        if (theta_start) c.grid.start = parse_angle(*theta_start);
        if (theta_stop) c.grid.stop = parse_angle(*theta_stop);
        if (theta_step) c.grid.step = parse_angle(*theta_step);
        if (shots) c.num_shots = *shots;
        if (seed) c.seed = *seed;
        if (workers) c.workers = *workers;
        if (open && closed) throw ConfigError("--open and --closed are exclusive");
        if (open) c.eraser.closed = false;
        if (closed) c.eraser.closed = true;
        if (exact) c.exact = true;
        if (no_open_run) c.measure_open = false;
        if (csv) c.output_csv = *csv;
        if (json) c.output_json = *json;
        if (counts) c.output_counts = *counts;
        c.validate();
    }
};

void print_summary(const SweepResult &r) {
    for (const auto &sub : r.report.subensembles) {
        std::printf("%-4s V_11=%.6f V_01=%.6f", sub.spec.tag.c_str(), sub.V_11.value_or(NAN), sub.V_01.value_or(NAN));
        if (sub.distinguishability) {
            std::printf(" D=%.6f", sub.distinguishability->D);
        }
        std::printf("\n");
    }
}

int run_sweep_cmd(const ExperimentConfig &config) {
    SweepResult r = run_sweep(config);
    write_sweep_outputs(config, r);
    if (config.output_csv.empty() && config.output_json.empty() && config.output_counts.empty()) {
        std::cout << report_csv(r.report.primary());
    } else {
        print_summary(r);
    }
    return 0;
}

std::vector<int64_t> parse_delays(const std::string &text) {
    std::vector<int64_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            size_t used = 0;
            out.push_back(std::stoll(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception &) {
            throw ConfigError("bad delay '" + item + "' in --t-delays");
        }
    }
    return out;
}

std::map<std::string, int> parse_layout_map(const std::string &text) {
    std::map<std::string, int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("layout entries look like label=qubit, got '" + item + "'");
        }
        try {
            out[item.substr(0, eq)] = std::stoi(item.substr(eq + 1));
        } catch (const std::exception &) {
            throw ConfigError("bad qubit index in layout entry '" + item + "'");
        }
    }
    return out;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Delayed-choice quantum eraser simulator"};
    app.require_subcommand(1);

    Overrides sweep_flags;
    auto *sweep = app.add_subcommand("sweep", "Run a theta sweep and write CSV/JSON reports");
    sweep_flags.add_to(sweep, true);

    Overrides series_flags;
    std::string series_delays, series_csv;
    auto *series = app.add_subcommand("delay-series", "Run one sweep per delay and tabulate V(t_delay)");
    series_flags.add_to(series, true);
    series->add_option("--t-delays", series_delays, "Comma-separated delays in dt, e.g. 0,5000,25000,40000");
    series->add_option("--series-csv", series_csv, "V(t_delay) table output path");

    std::string preset_name;
    bool preset_list = false, preset_dump = false;
    std::string preset_dir;
    Overrides preset_flags;
    auto *pre = app.add_subcommand("preset", "Run a named figure preset");
    pre->add_option("name", preset_name, "Preset name");
    pre->add_flag("--list", preset_list, "List preset names");
    pre->add_flag("--dump", preset_dump, "Print the preset config JSON instead of running");
    pre->add_option("--out-dir", preset_dir, "Directory for the default output files");
    preset_flags.add_to(pre, false);

    std::string counts_path;
    Overrides analyze_flags;
    auto *analyze = app.add_subcommand("analyze", "Rebuild reports from a counts file");
    analyze->add_option("counts_file", counts_path, "Counts JSON written by sweep --counts")->required()->check(
        CLI::ExistingFile);
    analyze->add_option("--csv", analyze_flags.csv, "Per-theta CSV output path");
    analyze->add_option("--json", analyze_flags.json, "Scalar report JSON output path");

    std::string tr_circuit, tr_coupling, tr_layout, tr_out, tr_schedule;
    Overrides tr_flags;
    std::optional<std::string> tr_theta;
    auto *tr = app.add_subcommand("transpile", "Route and lower a circuit onto a coupling graph");
    tr->add_option("--circuit", tr_circuit, "Circuit JSON file (default: build from --builder)")->check(
        CLI::ExistingFile);
    tr->add_option("--coupling", tr_coupling, "Coupling graph JSON (default: all-to-all)")->check(CLI::ExistingFile);
    tr->add_option("--map", tr_layout, "Initial layout, e.g. s=41,x=42,y=53,a=40 (default: identity)");
    tr->add_option("--theta", tr_theta, "Theta for a built circuit");
    tr->add_option("-o,--output", tr_out, "Transpiled circuit JSON output path");
    tr->add_option("--schedule", tr_schedule, "Schedule listing output path (default: stdout)");
    tr->add_option("--builder", tr_flags.builder, "Eraser builder when --circuit is absent");
    tr->add_option("--layout", tr_flags.layout, "Eraser layout for the built circuit");
    tr->add_option("--phi", tr_flags.phi, "Eraser angle");
    tr->add_option("--phi1", tr_flags.phi1, "Four-option angle for a1");
    tr->add_option("--phi2", tr_flags.phi2, "Four-option angle for a2");
    tr->add_option("--t-delay", tr_flags.t_delay, "Delay in dt");
    tr->add_flag("--open", tr_flags.open, "Open interferometer");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (sweep->parsed()) {
            ExperimentConfig c = sweep_flags.load();
            sweep_flags.apply(c);
            return run_sweep_cmd(c);
        }
        if (series->parsed()) {
            ExperimentConfig c = series_flags.load();
            series_flags.apply(c);
            if (!series_delays.empty()) {
                c.t_delays = parse_delays(series_delays);
            }
            auto points = run_delay_series(c);
            std::string table = delay_series_csv(points, build_eraser(c.builder, c.eraser).dt());
            if (series_csv.empty()) {
                std::cout << table;
            } else {
                write_text_file(series_csv, table);
            }
            for (const auto &p : points) {
                std::filesystem::path stem = c.output_csv;
                if (!c.output_csv.empty()) {
                    ExperimentConfig per = c;
                    per.eraser.t_delay = p.t_delay;
                    auto suffix = "_t" + std::to_string(p.t_delay);
                    per.output_csv = (stem.parent_path() / (stem.stem().string() + suffix + ".csv")).string();
                    per.output_json.clear();
                    per.output_counts.clear();
                    write_sweep_outputs(per, p.sweep);
                }
            }
            return 0;
        }
        if (pre->parsed()) {
            if (preset_list) {
                for (const auto &n : preset_names()) std::cout << n << "\n";
                return 0;
            }
            if (preset_name.empty()) {
                throw ConfigError("preset needs a name (see --list)");
            }
            ExperimentConfig c = preset(preset_name);
            if (!preset_dir.empty()) {
                c.output_csv = (std::filesystem::path(preset_dir) / c.output_csv).string();
                c.output_json = (std::filesystem::path(preset_dir) / c.output_json).string();
            }
            preset_flags.apply(c);
            if (preset_dump) {
                std::cout << c.to_json().dump(2) << "\n";
                return 0;
            }
            return run_sweep_cmd(c);
        }
        if (analyze->parsed()) {
            nlohmann::json doc;
            try {
                doc = nlohmann::json::parse(read_text_file(counts_path));
            } catch (const nlohmann::json::exception &e) {
                throw ConfigError("'" + counts_path + "' is not valid JSON: " + e.what());
            }
            ExperimentConfig c;
            SweepResult r = analyze_counts(doc, &c);
            c.output_csv = analyze_flags.csv.value_or("");
            c.output_json = analyze_flags.json.value_or("");
            c.output_counts.clear();
            write_sweep_outputs(c, r);
            if (c.output_csv.empty() && c.output_json.empty()) {
                std::cout << report_json(r.report).dump(2) << "\n";
            }
            return 0;
        }
        if (tr->parsed()) {
            Circuit circuit{1, 0};
            if (!tr_circuit.empty()) {
                try {
                    circuit = circuit_from_json(nlohmann::json::parse(read_text_file(tr_circuit)));
                } catch (const nlohmann::json::exception &e) {
                    throw ConfigError("'" + tr_circuit + "' is not valid circuit JSON: " + e.what());
                }
            } else {
                ExperimentConfig c;
                tr_flags.apply(c);
                if (tr_theta) c.eraser.theta = parse_angle(*tr_theta);
                if (c.builder == "random2") c.eraser.random_choice = RandomChoice::two_option;
                if (c.builder == "random4") c.eraser.random_choice = RandomChoice::four_option;
                circuit = build_eraser(c.builder, c.eraser);
            }
            CouplingGraph coupling = CouplingGraph::all_to_all(circuit.num_qubits());
            if (!tr_coupling.empty()) {
                try {
                    coupling = CouplingGraph::from_json(nlohmann::json::parse(read_text_file(tr_coupling)));
                } catch (const nlohmann::json::exception &e) {
                    throw ConfigError("'" + tr_coupling + "' is not valid coupling JSON: " + e.what());
                }
            }
            TranspiledCircuit t = [&] {
                if (tr_layout.empty()) {
                    std::vector<int> identity(circuit.num_qubits());
                    for (int k = 0; k < circuit.num_qubits(); k++) identity[k] = k;
                    return route(circuit, coupling, identity);
                }
                return route(circuit, coupling, parse_layout_map(tr_layout));
            }();
            if (!tr_out.empty()) {
                write_text_file(tr_out, transpiled_to_json(t).dump(2) + "\n");
            }
            std::string listing = format_schedule(t.schedule);
            if (tr_schedule.empty()) {
                std::cout << listing;
            } else {
                write_text_file(tr_schedule, listing);
            }
            std::cerr << "swaps: " << t.swap_count << ", total duration: " << total_duration(t.schedule) << " dt\n";
            return 0;
        }
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}
