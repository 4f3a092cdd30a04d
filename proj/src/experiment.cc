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

#include "qeraser/experiment.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "qeraser/rng.h"

namespace qeraser {

using std::numbers::pi;

namespace {

double parse_number(const std::string &text, const std::string &whole) {
    size_t used = 0;
    double v;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception &) {
        throw ConfigError("cannot parse angle '" + whole + "'");
    }
    if (used != text.size()) {
        throw ConfigError("cannot parse angle '" + whole + "'");
    }
    return v;
}

}  // namespace

double parse_angle(const nlohmann::json &value) {
    if (value.is_number()) {
        return value.get<double>();
    }
    if (!value.is_string()) {
        throw ConfigError("angles must be numbers or strings like \"pi/2\"");
    }
    std::string whole = value.get<std::string>();
    std::string s;
    for (char ch : whole) {
        if (ch != ' ' && ch != '*') {
            s += ch;
        }
    }
    size_t at = s.find("pi");
    if (at == std::string::npos) {
        return parse_number(s, whole);
    }
    std::string coef = s.substr(0, at);
    std::string rest = s.substr(at + 2);
    double c = coef.empty() ? 1.0 : coef == "-" ? -1.0 : coef == "+" ? 1.0 : parse_number(coef, whole);
    double d = 1;
    if (!rest.empty()) {
        if (rest[0] != '/') {
            throw ConfigError("cannot parse angle '" + whole + "'");
        }
        d = parse_number(rest.substr(1), whole);
        if (d == 0) {
            throw ConfigError("division by zero in angle '" + whole + "'");
        }
    }
    return c * pi / d;
}

std::vector<double> ThetaGrid::points() const {
    if (!(step > 0) || !std::isfinite(start) || !std::isfinite(stop) || stop < start) {
        throw ConfigError("theta grid needs step > 0 and stop >= start");
    }
    double span = (stop - start) / step;
    auto count = static_cast<int64_t>(std::floor(span + 1e-9)) + 1;
    if (count > 100000) {
        throw ConfigError("theta grid has too many points");
    }
    std::vector<double> out;
    for (int64_t k = 0; k < count; k++) {
        out.push_back(start + static_cast<double>(k) * step);
    }
    if (std::abs(out.back() - stop) < 1e-9 * step) {
        out.back() = stop;
    }
    return out;
}

namespace {

nlohmann::json durations_to_json(const DurationTable &d) {
    nlohmann::json j;
    j["by_name"] = d.by_name;
    j["one_qubit"] = d.one_qubit_default ? nlohmann::json(*d.one_qubit_default) : nlohmann::json(nullptr);
    j["two_qubit"] = d.two_qubit_default ? nlohmann::json(*d.two_qubit_default) : nlohmann::json(nullptr);
    j["measure"] = d.measure;
    return j;
}

DurationTable durations_from_json(const nlohmann::json &j) {
    DurationTable d;
    if (j.contains("by_name")) {
        for (const auto &[name, v] : j["by_name"].items()) {
            d.by_name[name] = v.get<int64_t>();
        }
    }
    auto opt = [&](const char *key, std::optional<int64_t> &field) {
        if (j.contains(key)) {
            field = j[key].is_null() ? std::nullopt : std::optional<int64_t>(j[key].get<int64_t>());
        }
    };
    opt("one_qubit", d.one_qubit_default);
    opt("two_qubit", d.two_qubit_default);
    d.measure = j.value("measure", d.measure);
    return d;
}

const std::vector<std::string> kBuilders{"simple", "two_recorder", "random2", "random4"};

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json &doc) {
    if (!doc.is_object()) {
        throw ConfigError("experiment config must be a JSON object");
    }
    ExperimentConfig c;
    try {
        c.builder = doc.value("builder", c.builder);
        auto angle = [&](const char *key, double &field) {
            if (doc.contains(key)) {
                field = parse_angle(doc[key]);
            }
        };
        angle("theta", c.eraser.theta);
        angle("phi", c.eraser.phi);
        angle("phi1", c.eraser.phi1);
        angle("phi2", c.eraser.phi2);
        c.eraser.closed = doc.value("closed", c.eraser.closed);
        c.eraser.t_delay = doc.value("t_delay", c.eraser.t_delay);
        if (doc.contains("layout")) {
            c.eraser.layout = parse_layout(doc["layout"].get<std::string>());
        }
        if (doc.contains("num_shots")) {
            auto n = doc["num_shots"].get<int64_t>();
            if (n < 1) {
                throw ConfigError("num_shots must be >= 1");
            }
            c.num_shots = static_cast<uint64_t>(n);
        }
        if (doc.contains("seed") && !doc["seed"].is_null()) {
            c.seed = doc["seed"].get<uint64_t>();
        }
        if (doc.contains("noise")) {
            c.noise.by_label = noise_block_from_json(doc["noise"]);
        }
        c.noise.apply_during_delays_only = doc.value("apply_during_delays_only", true);
        if (doc.contains("durations")) {
            c.noise.durations = durations_from_json(doc["durations"]);
        }
        if (doc.contains("theta_grid")) {
            const auto &g = doc["theta_grid"];
            if (g.contains("start")) c.grid.start = parse_angle(g["start"]);
            if (g.contains("stop")) c.grid.stop = parse_angle(g["stop"]);
            if (g.contains("step")) c.grid.step = parse_angle(g["step"]);
        }
        c.workers = doc.value("workers", c.workers);
        c.exact = doc.value("exact", c.exact);
        c.measure_open = doc.value("measure_open", c.measure_open);
        if (doc.contains("t_delays")) {
            c.t_delays = doc["t_delays"].get<std::vector<int64_t>>();
        }
        if (doc.contains("outputs")) {
            const auto &o = doc["outputs"];
            c.output_csv = o.value("csv", "");
            c.output_json = o.value("json", "");
            c.output_counts = o.value("counts", "");
        }
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(std::string("malformed experiment config: ") + e.what());
    }
    c.validate();
    return c;
}

nlohmann::json ExperimentConfig::to_json() const {
    nlohmann::json j;
    j["builder"] = builder;
    j["phi"] = eraser.phi;
    j["phi1"] = eraser.phi1;
    j["phi2"] = eraser.phi2;
    j["closed"] = eraser.closed;
    j["t_delay"] = eraser.t_delay;
    j["layout"] = layout_name(eraser.layout);
    j["num_shots"] = num_shots;
    j["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
    j["noise"] = noise_block_to_json(noise.by_label);
    j["apply_during_delays_only"] = noise.apply_during_delays_only;
    j["durations"] = durations_to_json(noise.durations);
    j["theta_grid"] = {{"start", grid.start}, {"stop", grid.stop}, {"step", grid.step}};
    j["workers"] = workers;
    j["exact"] = exact;
    j["measure_open"] = measure_open;
    j["t_delays"] = t_delays;
    j["outputs"] = {{"csv", output_csv}, {"json", output_json}, {"counts", output_counts}};
    return j;
}

void ExperimentConfig::validate() const {
    if (std::find(kBuilders.begin(), kBuilders.end(), builder) == kBuilders.end()) {
        throw ConfigError("unknown builder '" + builder + "'");
    }
    if (num_shots < 1) {
        throw ConfigError("num_shots must be >= 1");
    }
    if (workers < 1) {
        throw ConfigError("workers must be >= 1");
    }
    if (builder == "simple" && eraser.layout == Layout::ibm_mapped) {
        throw ConfigError("the simple builder has no ibm_mapped layout");
    }
    grid.points();
    for (auto t : t_delays) {
        if (t < 0) {
            throw ConfigError("t_delays must be >= 0");
        }
    }
    try {
        EraserConfig probe = eraser;
        probe.theta = 0;
        probe.validate();
    } catch (const EraserError &e) {
        throw ConfigError(e.what());
    }
}

uint64_t ExperimentConfig::resolved_seed() const {
    if (seed) {
        return *seed;
    }
    if (const char *env = std::getenv("ERASER_SEED")) {
        try {
            size_t used = 0;
            uint64_t v = std::stoull(env, &used, 0);
            if (used == std::string(env).size()) {
                return v;
            }
        } catch (const std::exception &) {
        }
        throw ConfigError(std::string("ERASER_SEED is not an integer: ") + env);
    }
    return 0;
}

std::string ExperimentConfig::hash() const {
    nlohmann::json j = to_json();
    j.erase("outputs");
    j.erase("workers");
    j["seed"] = resolved_seed();
    return stable_hash(j.dump());
}

namespace {

EraserConfig point_config(const ExperimentConfig &config, double theta, bool closed) {
    EraserConfig e = config.eraser;
    e.theta = theta;
    e.closed = closed;
    if (config.builder == "random2") {
        e.random_choice = RandomChoice::two_option;
    } else if (config.builder == "random4") {
        e.random_choice = RandomChoice::four_option;
    } else {
        e.random_choice = RandomChoice::none;
    }
    return e;
}

WeightedOutcomes run_point(const ExperimentConfig &config, const Circuit &circuit, uint64_t seed) {
    bool noisy = !config.noise.by_label.empty();
    if (config.exact) {
        ExactResult r = noisy ? run_exact(circuit, config.noise) : run_exact(circuit);
        return WeightedOutcomes::from_distribution(r.distribution, static_cast<double>(config.num_shots));
    }
    ShotOptions opts;
    opts.workers = config.workers;
    ShotResult r = noisy ? run_shots(circuit, config.noise, config.num_shots, seed, opts)
                         : run_shots(circuit, config.num_shots, seed, opts);
    return WeightedOutcomes::from_counts(r.counts);
}

}  // namespace

SweepResult run_sweep(const ExperimentConfig &config) {
    config.validate();
    SweepResult result;
    result.thetas = config.grid.points();
    const uint64_t seed = config.resolved_seed();
    bool want_open = config.measure_open && config.eraser.closed;
    WeightedOutcomes open;
    for (size_t k = 0; k < result.thetas.size(); k++) {
        double theta = result.thetas[k];
        EraserConfig e = point_config(config, theta, config.eraser.closed);
        Circuit c = build_eraser(config.builder, e);
        result.closed.push_back(run_point(config, c, derive_seed(seed, k, 0)));
        if (want_open) {
            Circuit o = build_eraser(config.builder, point_config(config, theta, false));
            open.merge(run_point(config, o, derive_seed(seed, k, 1)));
        } else if (!config.eraser.closed) {
            open.merge(result.closed.back());
        }
    }
    if (want_open || !config.eraser.closed) {
        result.open = std::move(open);
    }
    result.report = build_report(point_config(config, 0, config.eraser.closed), result.thetas, result.closed,
                                 result.open ? &*result.open : nullptr, config.hash());
    return result;
}

namespace {

nlohmann::json weights_json(const WeightedOutcomes &w) {
    nlohmann::json counts = nlohmann::json::object();
    for (const auto &[key, v] : w.weights) {
        counts[key] = v;
    }
    return {{"clbits", w.clbit_labels}, {"counts", counts}};
}

WeightedOutcomes weights_from_json(const nlohmann::json &j) {
    WeightedOutcomes w;
    w.clbit_labels = j.at("clbits").get<std::vector<std::string>>();
    for (const auto &[key, v] : j.at("counts").items()) {
        if (key.size() != w.clbit_labels.size()) {
            throw ConfigError("counts key '" + key + "' does not match the clbit list");
        }
        double x = v.get<double>();
        if (!(x >= 0)) {
            throw ConfigError("counts must be non-negative");
        }
        w.weights[key] = x;
    }
    return w;
}

}  // namespace

nlohmann::json sweep_counts_json(const ExperimentConfig &config, const SweepResult &result) {
    nlohmann::json j;
    j["config"] = config.to_json();
    // The worker count does not affect results, so it stays out of the file.
    j["config"].erase("workers");
    j["points"] = nlohmann::json::array();
    for (size_t k = 0; k < result.thetas.size(); k++) {
        j["points"].push_back({{"theta", result.thetas[k]}, {"counts", weights_json(result.closed[k])}});
    }
    j["open"] = result.open ? weights_json(*result.open) : nlohmann::json(nullptr);
    return j;
}

SweepResult analyze_counts(const nlohmann::json &doc, ExperimentConfig *config_out) {
    try {
        ExperimentConfig config = ExperimentConfig::from_json(doc.at("config"));
        SweepResult result;
        for (const auto &p : doc.at("points")) {
            result.thetas.push_back(p.at("theta").get<double>());
            result.closed.push_back(weights_from_json(p.at("counts")));
        }
        if (result.thetas.empty()) {
            throw ConfigError("counts document has no points");
        }
        if (doc.contains("open") && !doc["open"].is_null()) {
            result.open = weights_from_json(doc["open"]);
        }
        result.report = build_report(point_config(config, 0, config.eraser.closed), result.thetas, result.closed,
                                     result.open ? &*result.open : nullptr, config.hash());
        if (config_out) {
            *config_out = config;
        }
        return result;
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(std::string("malformed counts document: ") + e.what());
    }
}

std::vector<DelayPoint> run_delay_series(const ExperimentConfig &config) {
    if (config.t_delays.empty()) {
        throw ConfigError("delay series needs at least one t_delay");
    }
    std::vector<DelayPoint> out;
    for (int64_t t : config.t_delays) {
        ExperimentConfig c = config;
        c.eraser.t_delay = t;
        out.push_back({t, run_sweep(c)});
    }
    return out;
}

std::string delay_series_csv(const std::vector<DelayPoint> &points, double dt) {
    auto fmt = [](const std::optional<double> &v) {
        if (!v) {
            return std::string();
        }
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.12g", *v);
        return std::string(buf);
    };
    std::string out = "t_delay_dt,t_delay_us,subensemble,V_11,V_01,D\n";
    for (const auto &p : points) {
        for (const auto &sub : p.sweep.report.subensembles) {
            std::optional<double> d;
            if (sub.distinguishability) {
                d = sub.distinguishability->D;
            }
            out += std::to_string(p.t_delay) + "," + fmt(static_cast<double>(p.t_delay) * dt * 1e6) + "," +
                   sub.spec.tag + "," + fmt(sub.V_11) + "," + fmt(sub.V_01) + "," + fmt(d) + "\n";
        }
    }
    return out;
}

void write_text_file(const std::string &path, const std::string &text) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    f << text;
    if (!f) {
        throw std::runtime_error("failed writing '" + path + "'");
    }
}

std::string read_text_file(const std::string &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_sweep_outputs(const ExperimentConfig &config, const SweepResult &result) {
    if (!config.output_csv.empty()) {
        std::filesystem::path p(config.output_csv);
        std::string stem = (p.parent_path() / p.stem()).string();
        std::string ext = p.has_extension() ? p.extension().string() : ".csv";
        for (const auto &sub : result.report.subensembles) {
            std::string path = sub.spec.tag == "all" ? config.output_csv : stem + "_" + sub.spec.tag + ext;
            write_text_file(path, report_csv(sub));
        }
    }
    if (!config.output_json.empty()) {
        write_text_file(config.output_json, report_json(result.report).dump(2) + "\n");
    }
    if (!config.output_counts.empty()) {
        write_text_file(config.output_counts, sweep_counts_json(config, result).dump(2) + "\n");
    }
}

namespace {

struct PresetSpec {
    const char *name;
    const char *builder;
    Layout layout;
    double phi, phi1, phi2;
    int64_t t_delay;
    uint64_t shots;
    const char *device;
};

// Lower ends of the published calibration ranges; readout flips are
// illustrative, chosen to produce leakage of the observed order.
std::map<std::string, QubitNoiseParams> device_noise(const std::string &device, const std::vector<std::string> &wires) {
    QubitNoiseParams p;
    if (device == "ibm") {
        p.t1 = 108.95e-6;
        p.t2 = 33.33e-6;
        p.readout_flip_01 = 0.01;
        p.readout_flip_10 = 0.02;
    } else {
        p.t1 = 10;
        p.t2 = 1;
        p.readout_flip_01 = 0.005;
        p.readout_flip_10 = 0.005;
    }
    std::map<std::string, QubitNoiseParams> out;
    for (const auto &w : wires) {
        out[w] = p;
    }
    return out;
}

const std::vector<PresetSpec> &preset_table() {
    constexpr Layout ibm = Layout::ibm_mapped, ionq = Layout::ionq_mapped;
    constexpr double q = pi / 4, h = pi / 2, s6 = pi / 6, s3 = pi / 3;
    static const std::vector<PresetSpec> table{
        {"fig9_left", "random2", ibm, h, 0, 0, 0, 5000, "ibm"},
        {"fig9_right", "random2", ibm, q, 0, 0, 0, 5000, "ibm"},
        {"fig10_left", "random2", ibm, h, 0, 0, 5000, 5000, "ibm"},
        {"fig10_right", "random2", ibm, q, 0, 0, 5000, 5000, "ibm"},
        {"fig11_left", "random2", ibm, h, 0, 0, 25000, 5000, "ibm"},
        {"fig11_right", "random2", ibm, q, 0, 0, 25000, 5000, "ibm"},
        {"fig12_left", "random2", ibm, h, 0, 0, 40000, 5000, "ibm"},
        {"fig12_right", "random2", ibm, q, 0, 0, 40000, 5000, "ibm"},
        {"fig13_left", "random2", ionq, h, 0, 0, 0, 2000, "ionq"},
        {"fig13_right", "random2", ionq, q, 0, 0, 0, 2000, "ionq"},
        {"baseline_ibm_phi0", "two_recorder", ibm, 0, 0, 0, 0, 10000, "ibm"},
        {"baseline_ibm_phi_pi4", "two_recorder", ibm, q, 0, 0, 0, 10000, "ibm"},
        {"baseline_ibm_phi_pi2", "two_recorder", ibm, h, 0, 0, 0, 10000, "ibm"},
        {"baseline_ionq_phi0", "two_recorder", ionq, 0, 0, 0, 0, 1000, "ionq"},
        {"baseline_ionq_phi_pi4", "two_recorder", ionq, q, 0, 0, 0, 1000, "ionq"},
        {"baseline_ionq_phi_pi2", "two_recorder", ionq, h, 0, 0, 0, 1000, "ionq"},
        {"random4_ibm_delay0", "random4", ibm, 0, s6, s3, 0, 8192, "ibm"},
        {"random4_ibm_delay5000", "random4", ibm, 0, s6, s3, 5000, 8192, "ibm"},
        {"random4_ibm_delay25000", "random4", ibm, 0, s6, s3, 25000, 8192, "ibm"},
        {"random4_ibm_delay40000", "random4", ibm, 0, s6, s3, 40000, 8192, "ibm"},
        {"random4_ionq", "random4", ionq, 0, s6, s3, 0, 6000, "ionq"},
    };
    return table;
}

}  // namespace

std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (const auto &p : preset_table()) {
        out.emplace_back(p.name);
    }
    return out;
}

ExperimentConfig preset(const std::string &name) {
    for (const auto &p : preset_table()) {
        if (name != p.name) {
            continue;
        }
        ExperimentConfig c;
        c.builder = p.builder;
        c.eraser.layout = p.layout;
        c.eraser.phi = p.phi;
        c.eraser.phi1 = p.phi1;
        c.eraser.phi2 = p.phi2;
        c.eraser.t_delay = p.t_delay;
        c.num_shots = p.shots;
        c.seed = 20250101;
        std::vector<std::string> wires{"s", "x", "y"};
        if (c.builder == "random2") {
            wires.push_back("a");
        } else if (c.builder == "random4") {
            wires.push_back("a1");
            wires.push_back("a2");
        }
        c.noise.by_label = device_noise(p.device, wires);
        c.output_csv = name + ".csv";
        c.output_json = name + ".json";
        c.validate();
        return c;
    }
    throw ConfigError("unknown preset '" + name + "'");
}

}  // namespace qeraser
