# Copyright 2026 The qeraser Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Delayed-choice quantum eraser simulator."""

import json

from . import _core
from ._core import (
    Circuit,
    ConfigError,
    analytic_prediction,
    build_eraser,
    philox4x32,
    preset_names,
    sem,
    sigma_th,
    visibility,
)

__all__ = [
    "Circuit",
    "ConfigError",
    "analytic_prediction",
    "build_eraser",
    "philox4x32",
    "preset",
    "preset_names",
    "run_exact",
    "run_shots",
    "run_sweep",
    "sem",
    "sigma_th",
    "transpile",
    "visibility",
]


def _noise_text(noise):
    return "" if not noise else json.dumps(noise)


def run_exact(circuit, noise=None):
    """Exact outcome distribution, keyed by clbit string (char j = clbit j)."""
    return _core.run_exact(circuit, _noise_text(noise))


def run_shots(circuit, shots, seed=0, workers=1, noise=None):
    """Sampled counts, keyed like run_exact."""
    return _core.run_shots(circuit, shots, seed, workers, _noise_text(noise))


def transpile(circuit, layout, coupling=None):
    """Routes onto `coupling` ({num_qubits, edges}) and checks equivalence."""
    out = _core.transpile(circuit, "" if coupling is None else json.dumps(coupling), layout)
    out["circuit"] = json.loads(out["circuit"])
    return out


def run_sweep(config):
    """Runs a theta sweep from a config dict; returns report dict and CSV text per subensemble."""
    out = _core.run_sweep(json.dumps(config))
    out["report"] = json.loads(out["report"])
    return out


def preset(name):
    return json.loads(_core.preset(name))
