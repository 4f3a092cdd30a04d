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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qeraser/experiment.h"
#include "qeraser/transpile.h"

namespace py = pybind11;
using namespace qeraser;

namespace {

// Structured values cross the boundary as JSON text; the Python wrapper
// converts to and from dicts.
NoiseModel noise_from_text(const std::string &text) {
    NoiseModel m;
    if (!text.empty()) {
        m.by_label = noise_block_from_json(nlohmann::json::parse(text));
    }
    return m;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Delayed-choice quantum eraser simulator core";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<Circuit>(m, "Circuit")
        .def_property_readonly("num_qubits", &Circuit::num_qubits)
        .def_property_readonly("num_clbits", &Circuit::num_clbits)
        .def_property_readonly("wire_labels", &Circuit::wire_labels)
        .def_property_readonly("clbit_labels", &Circuit::clbit_labels)
        .def("__len__", &Circuit::size)
        .def("to_json", [](const Circuit &c) { return circuit_to_json(c).dump(); })
        .def_static("from_json", [](const std::string &text) { return circuit_from_json(nlohmann::json::parse(text)); });

    m.def(
        "build_eraser",
        [](const std::string &builder, double theta, double phi, double phi1, double phi2, bool closed,
           const std::string &layout, int64_t t_delay) {
            EraserConfig c;
            c.theta = theta;
            c.phi = phi;
            c.phi1 = phi1;
            c.phi2 = phi2;
            c.closed = closed;
            c.layout = parse_layout(layout);
            c.t_delay = t_delay;
            if (builder == "random2") c.random_choice = RandomChoice::two_option;
            if (builder == "random4") c.random_choice = RandomChoice::four_option;
            return build_eraser(builder, c);
        },
        py::arg("builder"), py::arg("theta"), py::arg("phi") = 0.0, py::arg("phi1") = 0.0, py::arg("phi2") = 0.0,
        py::arg("closed") = true, py::arg("layout") = "abstract", py::arg("t_delay") = 0);

    m.def(
        "run_exact",
        [](const Circuit &c, const std::string &noise) {
            NoiseModel n = noise_from_text(noise);
            ExactResult r = n.by_label.empty() ? run_exact(c) : run_exact(c, n);
            return r.distribution.probabilities;
        },
        py::arg("circuit"), py::arg("noise") = "", py::call_guard<py::gil_scoped_release>());

    m.def(
        "run_shots",
        [](const Circuit &c, uint64_t shots, uint64_t seed, int workers, const std::string &noise) {
            NoiseModel n = noise_from_text(noise);
            ShotOptions o;
            o.workers = workers;
            ShotResult r = n.by_label.empty() ? run_shots(c, shots, seed, o) : run_shots(c, n, shots, seed, o);
            return r.counts.counts();
        },
        py::arg("circuit"), py::arg("shots"), py::arg("seed") = 0, py::arg("workers") = 1, py::arg("noise") = "",
        py::call_guard<py::gil_scoped_release>());

    m.def(
        "analytic_prediction",
        [](double theta, double phi, bool closed) {
            AnalyticPrediction a = analytic_prediction(theta, phi, closed);
            return std::map<std::string, double>{{"p0s", a.p0s},
                                                 {"p_1x1y", a.p_1x1y},
                                                 {"p_0x1y", a.p_0x1y},
                                                 {"p0s_given_1x1y", a.p0s_given_1x1y},
                                                 {"p0s_given_0x1y", a.p0s_given_0x1y},
                                                 {"p_succ", a.p_succ},
                                                 {"D", a.D},
                                                 {"V", a.V}};
        },
        py::arg("theta"), py::arg("phi"), py::arg("closed") = true);

    m.def("sigma_th", &sigma_th, py::arg("p"), py::arg("n"));
    m.def("sem", &sem, py::arg("successes"), py::arg("n"));
    m.def(
        "visibility", [](const std::vector<double> &t, const std::vector<double> &p) { return visibility(t, p); },
        py::arg("thetas"), py::arg("p"));

    m.def(
        "transpile",
        [](const Circuit &c, const std::string &coupling, const std::map<std::string, int> &layout) {
            CouplingGraph g = coupling.empty() ? CouplingGraph::all_to_all(c.num_qubits())
                                               : CouplingGraph::from_json(nlohmann::json::parse(coupling));
            TranspiledCircuit t = route(c, g, layout);
            EquivalenceReport eq = verify_equivalence(c, t);
            py::dict out;
            out["circuit"] = transpiled_to_json(t).dump();
            out["swap_count"] = t.swap_count;
            out["schedule"] = format_schedule(t.schedule);
            out["total_duration_dt"] = total_duration(t.schedule);
            out["unitary_distance"] = eq.unitary_distance;
            out["tv_distance"] = eq.tv_distance;
            return out;
        },
        py::arg("circuit"), py::arg("coupling") = "", py::arg("layout"));

    m.def(
        "run_sweep",
        [](const std::string &config_text) {
            ExperimentConfig c = ExperimentConfig::from_json(nlohmann::json::parse(config_text));
            SweepResult r;
            {
                py::gil_scoped_release release;
                r = run_sweep(c);
            }
            py::dict out;
            out["report"] = report_json(r.report).dump();
            py::dict csvs;
            for (const auto &sub : r.report.subensembles) {
                csvs[py::str(sub.spec.tag)] = report_csv(sub);
            }
            out["csv"] = csvs;
            return out;
        },
        py::arg("config"));

    m.def("preset_names", &preset_names);
    m.def("preset", [](const std::string &name) { return preset(name).to_json().dump(); }, py::arg("name"));

    m.def(
        "philox4x32",
        [](std::array<uint32_t, 4> counter, std::array<uint32_t, 2> key) { return philox4x32(counter, key); },
        py::arg("counter"), py::arg("key"));
}
