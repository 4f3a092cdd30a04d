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

#include "qeraser/analysis.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace qeraser {

WeightedOutcomes WeightedOutcomes::from_counts(const CountsTable &counts) {
    WeightedOutcomes out{counts.clbit_labels(), {}};
    for (const auto &[key, n] : counts.counts()) {
        out.weights[key] = static_cast<double>(n);
    }
    return out;
}

WeightedOutcomes WeightedOutcomes::from_distribution(const Distribution &dist, double scale) {
    WeightedOutcomes out{dist.clbit_labels, {}};
    for (const auto &[key, p] : dist.probabilities) {
        out.weights[key] = p * scale;
    }
    return out;
}

void WeightedOutcomes::merge(const WeightedOutcomes &other) {
    if (clbit_labels.empty() && weights.empty()) {
        clbit_labels = other.clbit_labels;
    }
    if (other.clbit_labels != clbit_labels) {
        throw AnalysisError("cannot merge outcomes over different registers");
    }
    for (const auto &[key, w] : other.weights) {
        weights[key] += w;
    }
}

double WeightedOutcomes::total() const {
    double t = 0;
    for (const auto &[key, w] : weights) {
        t += w;
    }
    return t;
}

namespace {

int label_index(const std::vector<std::string> &labels, const std::string &label) {
    auto it = std::find(labels.begin(), labels.end(), label);
    return it == labels.end() ? -1 : static_cast<int>(it - labels.begin());
}

int require_label(const std::vector<std::string> &labels, const std::string &label) {
    int i = label_index(labels, label);
    if (i < 0) {
        throw AnalysisError("outcomes have no '" + label + "' clbit");
    }
    return i;
}

}  // namespace

Conditionals subensemble_conditionals(const WeightedOutcomes &outcomes, const std::map<std::string, int> &filter) {
    const auto &labels = outcomes.clbit_labels;
    Conditionals c;
    int s = require_label(labels, "s");
    int x = label_index(labels, "x");
    int y = label_index(labels, "y");
    int i = label_index(labels, "i");
    if (x >= 0 && y >= 0) {
        c.scheme = RecorderScheme::two_recorder;
    } else if (i >= 0) {
        c.scheme = RecorderScheme::single;
    } else {
        throw AnalysisError("outcomes carry neither x, y recorders nor an i recorder");
    }
    std::vector<std::pair<int, char>> want;
    for (const auto &[label, value] : filter) {
        want.emplace_back(require_label(labels, label), value ? '1' : '0');
    }

    for (const auto &[key, w] : outcomes.weights) {
        if (key.size() != labels.size()) {
            throw AnalysisError("outcome key '" + key + "' does not match register width");
        }
        if (!std::all_of(want.begin(), want.end(), [&](const auto &p) { return key[p.first] == p.second; })) {
            continue;
        }
        bool zero_s = key[s] == '0';
        c.total += w;
        if (zero_s) {
            c.n0s += w;
        }
        bool g11;
        if (c.scheme == RecorderScheme::two_recorder) {
            if (key[y] == '0') {
                c.leaked += w;
                continue;
            }
            g11 = key[x] == '1';
        } else {
            g11 = key[i] == '1';
        }
        c.accepted += w;
        if (g11) {
            c.n_g11 += w;
            c.n_g11_0s += zero_s ? w : 0;
        } else {
            c.n_g01 += w;
            c.n_g01_0s += zero_s ? w : 0;
        }
    }
    if (c.total > 0) {
        c.leakage_rate = c.leaked / c.total;
        c.p0s = c.n0s / c.total;
    }
    if (c.n_g11 > 0) {
        c.p0s_g11 = c.n_g11_0s / c.n_g11;
    }
    if (c.n_g01 > 0) {
        c.p0s_g01 = c.n_g01_0s / c.n_g01;
    }
    return c;
}

Distinguishability distinguishability(const Conditionals &open) {
    if (!(open.accepted > 0)) {
        throw AnalysisError("distinguishability: no accepted events");
    }
    double right;
    if (open.scheme == RecorderScheme::two_recorder) {
        right = open.n_g11_0s + (open.n_g01 - open.n_g01_0s);
    } else {
        right = (open.n_g11 - open.n_g11_0s) + open.n_g01_0s;
    }
    Distinguishability d;
    d.accepted = open.accepted;
    d.p_succ = right / open.accepted;
    d.D = 2 * d.p_succ - 1;
    d.inverted = d.D < 0;
    return d;
}

Distinguishability distinguishability(const WeightedOutcomes &open, const std::map<std::string, int> &filter) {
    return distinguishability(subensemble_conditionals(open, filter));
}

namespace {

void check_grid(std::span<const double> thetas, std::span<const double> p, size_t min_points) {
    if (thetas.size() != p.size()) {
        throw AnalysisError("theta grid and probabilities differ in length");
    }
    if (thetas.size() < min_points) {
        throw AnalysisError("too few theta samples");
    }
    auto [lo, hi] = std::minmax_element(thetas.begin(), thetas.end());
    if (*hi - *lo < std::numbers::pi - 1e-9) {
        throw AnalysisError("theta samples must span at least half a period");
    }
}

}  // namespace

double visibility(std::span<const double> thetas, std::span<const double> p) {
    check_grid(thetas, p, 2);
    auto [lo, hi] = std::minmax_element(p.begin(), p.end());
    if (!(*hi + *lo > 0)) {
        throw AnalysisError("visibility undefined for an all-zero pattern");
    }
    return (*hi - *lo) / (*hi + *lo);
}

double cosine_fit_visibility(std::span<const double> thetas, std::span<const double> p) {
    check_grid(thetas, p, 3);
    // Normal equations for the basis {1, cos, sin}, solved by Cramer's rule.
    double m[3][3] = {}, r[3] = {};
    for (size_t k = 0; k < thetas.size(); k++) {
        double f[3] = {1, std::cos(thetas[k]), std::sin(thetas[k])};
        for (int a = 0; a < 3; a++) {
            r[a] += f[a] * p[k];
            for (int b = 0; b < 3; b++) {
                m[a][b] += f[a] * f[b];
            }
        }
    }
    auto det = [](const double q[3][3]) {
        return q[0][0] * (q[1][1] * q[2][2] - q[1][2] * q[2][1]) - q[0][1] * (q[1][0] * q[2][2] - q[1][2] * q[2][0]) +
               q[0][2] * (q[1][0] * q[2][1] - q[1][1] * q[2][0]);
    };
    double d = det(m);
    if (std::abs(d) < 1e-12) {
        throw AnalysisError("cosine fit is degenerate on this grid");
    }
    double coef[3];
    for (int col = 0; col < 3; col++) {
        double q[3][3];
        for (int a = 0; a < 3; a++) {
            for (int b = 0; b < 3; b++) {
                q[a][b] = b == col ? r[a] : m[a][b];
            }
        }
        coef[col] = det(q) / d;
    }
    if (!(coef[0] > 0)) {
        throw AnalysisError("cosine fit has non-positive offset");
    }
    return std::hypot(coef[1], coef[2]) / coef[0];
}

double sigma_th(double p, double n) {
    if (!(p >= 0 && p <= 1)) {
        throw AnalysisError("sigma_th: p must lie in [0, 1]");
    }
    if (!(n >= 1)) {
        throw AnalysisError("sigma_th: n must be >= 1");
    }
    return std::sqrt(p * (1 - p) / n);
}

double sem(double successes, double n) {
    if (!(n >= 2)) {
        throw AnalysisError("sem: n must be >= 2");
    }
    if (!(successes >= 0 && successes <= n)) {
        throw AnalysisError("sem: successes must lie in [0, n]");
    }
    double failures = n - successes;
    return std::sqrt(successes * failures / (n * n * (n - 1)));
}

DualityCheck duality_check(double V, double D, double tolerance) {
    double value = V * V + D * D;
    return {value, value <= 1 + tolerance};
}

std::vector<SubensembleSpec> subensembles_for(const EraserConfig &config) {
    std::vector<SubensembleSpec> out;
    switch (config.random_choice) {
        case RandomChoice::none:
            out.push_back({"all", {}, {config.phi}});
            break;
        case RandomChoice::two_option:
            out.push_back({"all", {}, {0.0, config.phi}});
            out.push_back({"a0", {{"a", 0}}, {0.0}});
            out.push_back({"a1", {{"a", 1}}, {config.phi}});
            break;
        case RandomChoice::four_option: {
            SubensembleSpec all{"all", {}, {}};
            std::vector<SubensembleSpec> parts;
            for (int a2 = 0; a2 < 2; a2++) {
                for (int a1 = 0; a1 < 2; a1++) {
                    double phi = effective_phi(config, {a1, a2});
                    all.phis.push_back(phi);
                    parts.push_back({"a" + std::to_string(a1) + std::to_string(a2), {{"a1", a1}, {"a2", a2}}, {phi}});
                }
            }
            out.push_back(all);
            out.insert(out.end(), parts.begin(), parts.end());
            break;
        }
    }
    return out;
}

const SubensembleReport &EraserReport::primary() const {
    if (subensembles.empty()) {
        throw AnalysisError("empty report");
    }
    return subensembles.back();
}

namespace {

double theory_g11(RecorderScheme scheme, double theta, const std::vector<double> &phis, bool closed) {
    double sum = 0;
    for (double phi : phis) {
        double p = analytic_prediction(theta, phi, closed).p0s_given_1x1y;
        if (scheme == RecorderScheme::single && !closed) {
            p = 1 - p;
        }
        sum += p;
    }
    return sum / static_cast<double>(phis.size());
}

std::optional<double> maybe_sem(double successes, double n) {
    if (n < 2) {
        return std::nullopt;
    }
    return sem(successes, n);
}

std::optional<double> column_visibility(std::span<const double> thetas, const std::vector<ReportRow> &rows,
                                        std::optional<double> ReportRow::*field, bool fit) {
    std::vector<double> p;
    for (const auto &row : rows) {
        if (!(row.*field)) {
            return std::nullopt;
        }
        p.push_back(*(row.*field));
    }
    try {
        return fit ? cosine_fit_visibility(thetas, p) : visibility(thetas, p);
    } catch (const AnalysisError &) {
        return std::nullopt;
    }
}

}  // namespace

EraserReport build_report(const EraserConfig &config, std::span<const double> thetas,
                          std::span<const WeightedOutcomes> closed, const WeightedOutcomes *open,
                          std::string config_hash) {
    if (thetas.size() != closed.size()) {
        throw AnalysisError("one outcome table per theta is required");
    }
    EraserReport report;
    report.phi = config.random_choice == RandomChoice::four_option ? config.phi1 + config.phi2 : config.phi;
    report.config_hash = std::move(config_hash);
    for (auto &spec : subensembles_for(config)) {
        SubensembleReport sub;
        sub.spec = spec;
        for (size_t k = 0; k < thetas.size(); k++) {
            Conditionals c = subensemble_conditionals(closed[k], spec.filter);
            double g11 = theory_g11(c.scheme, thetas[k], spec.phis, config.closed);
            ReportRow row;
            row.theta = thetas[k];
            row.p0s = c.p0s;
            row.p0s_sem = maybe_sem(c.n0s, c.total);
            row.p0s_g11 = c.p0s_g11;
            row.p0s_g01 = c.p0s_g01;
            if (c.n_g11 >= 1) {
                row.p0s_g11_sigma_th = sigma_th(g11, c.n_g11);
            }
            if (c.n_g01 >= 1) {
                row.p0s_g01_sigma_th = sigma_th(1 - g11, c.n_g01);
            }
            row.p0s_g11_sem = maybe_sem(c.n_g11_0s, c.n_g11);
            row.p0s_g01_sem = maybe_sem(c.n_g01_0s, c.n_g01);
            row.leakage_rate = c.leakage_rate;
            row.accepted_shots = c.accepted;
            sub.rows.push_back(row);
        }
        sub.V_11 = column_visibility(thetas, sub.rows, &ReportRow::p0s_g11, false);
        sub.V_01 = column_visibility(thetas, sub.rows, &ReportRow::p0s_g01, false);
        sub.V_11_fit = column_visibility(thetas, sub.rows, &ReportRow::p0s_g11, true);
        if (open) {
            Conditionals c = subensemble_conditionals(*open, spec.filter);
            if (c.accepted > 0) {
                sub.distinguishability = distinguishability(c);
            }
        }
        report.subensembles.push_back(std::move(sub));
    }
    return report;
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string fmt(const std::optional<double> &v) { return v ? fmt(*v) : std::string(); }

nlohmann::json opt_json(const std::optional<double> &v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

nlohmann::json subensemble_json(const SubensembleReport &sub) {
    nlohmann::json j;
    j["tag"] = sub.spec.tag;
    j["phis"] = sub.spec.phis;
    j["V_11"] = opt_json(sub.V_11);
    j["V_01"] = opt_json(sub.V_01);
    j["V_11_cosine_fit"] = opt_json(sub.V_11_fit);
    if (sub.distinguishability) {
        const auto &d = *sub.distinguishability;
        j["D"] = d.D;
        j["p_succ"] = d.p_succ;
        j["strategy_inverted"] = d.inverted;
    } else {
        j["D"] = nullptr;
        j["p_succ"] = nullptr;
        j["strategy_inverted"] = nullptr;
    }
    if (sub.V_11 && sub.distinguishability) {
        j["duality"] = duality_check(*sub.V_11, sub.distinguishability->D).value;
    } else {
        j["duality"] = nullptr;
    }
    return j;
}

}  // namespace

std::string report_csv(const SubensembleReport &report) {
    std::string out = std::string(kCsvHeader) + "\n";
    for (const auto &r : report.rows) {
        out += fmt(r.theta) + "," + fmt(r.p0s) + "," + fmt(r.p0s_sem) + "," + fmt(r.p0s_g11) + "," +
               fmt(r.p0s_g11_sigma_th) + "," + fmt(r.p0s_g11_sem) + "," + fmt(r.p0s_g01) + "," +
               fmt(r.p0s_g01_sigma_th) + "," + fmt(r.p0s_g01_sem) + "," + fmt(r.leakage_rate) + "," +
               fmt(r.accepted_shots) + "\n";
    }
    return out;
}

nlohmann::json report_json(const EraserReport &report) {
    nlohmann::json primary = subensemble_json(report.primary());
    nlohmann::json j;
    j["V_11"] = primary["V_11"];
    j["V_01"] = primary["V_01"];
    j["D"] = primary["D"];
    j["p_succ"] = primary["p_succ"];
    j["duality"] = primary["duality"];
    j["phi"] = report.phi;
    j["config_hash"] = report.config_hash;
    j["primary_subensemble"] = report.primary().spec.tag;
    j["error_bar_magnification"] = 5;
    j["subensembles"] = nlohmann::json::array();
    for (const auto &sub : report.subensembles) {
        j["subensembles"].push_back(subensemble_json(sub));
    }
    return j;
}

std::string stable_hash(const std::string &text) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace qeraser
