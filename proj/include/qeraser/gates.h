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

#ifndef QERASER_GATES_H
#define QERASER_GATES_H

#include <span>
#include <string>
#include <vector>

#include "qeraser/linalg.h"

namespace qeraser {

struct GateError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A named, parameterized gate together with its matrix.
///
/// Multi-qubit matrices use the big-endian operand convention of apply_local:
/// the first operand owns the most significant local index bit.
struct GateSpec {
    std::string name;
    std::vector<double> params;
    int arity = 1;
    Matrix matrix;

    bool operator==(const GateSpec &other) const = default;
};

GateSpec identity_gate();
GateSpec h_gate();
GateSpec x_gate();
GateSpec y_gate();
GateSpec z_gate();
/// Principal square root of X: (1/2)[[1+i, 1-i], [1-i, 1+i]], det = i.
GateSpec sx_gate();
GateSpec rz_gate(double lambda);
GateSpec rx_gate(double theta);
/// diag(1, e^{i theta}) = e^{i theta/2} Rz(theta).
GateSpec phase_gate(double theta);
/// e^{-i phi Y/2}.
GateSpec ry_gate(double phi);
GateSpec cx_gate();
GateSpec cz_gate();
GateSpec swap_gate();
/// Echoed cross-resonance, (1/sqrt 2)(IX - XY) with Pauli strings written
/// right-to-left over the operands: X/Y act on the first operand, I/X on the
/// second. In this convention CX(c, t) = (X(c) (x) SX(t)) ECR(c, t)
/// (Sdg(c) (x) X(t)) up to global phase.
GateSpec ecr_gate();

/// [[I, 0], [0, U]] with the control as first operand. Named "c" + gate.name.
GateSpec controlled(const GateSpec &gate);

/// Rebuilds a gate from its serialized name and parameters.
GateSpec make_gate(const std::string &name, std::span<const double> params = {});

/// True when `name` is one of the rz/sx/x/ecr hardware primitives.
bool is_primitive_gate(const std::string &name);

struct GateApplication {
    GateSpec gate;
    std::vector<int> qubits;
};

/// SWAP(a, b) as CX(a, b) CX(b, a) CX(a, b); operands are 0 = a, 1 = b.
std::vector<GateApplication> decompose_swap();

}  // namespace qeraser

#endif
