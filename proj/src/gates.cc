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

#include "qeraser/gates.h"

#include <cmath>
#include <numbers>

namespace qeraser {

namespace {

constexpr Complex kI{0, 1};

void require_finite(double angle, const char *gate) {
    if (!std::isfinite(angle)) {
        throw GateError(std::string("non-finite angle for ") + gate);
    }
}

GateSpec fixed(std::string name, Matrix m) {
    int arity = m.dim() == 2 ? 1 : 2;
    return GateSpec{std::move(name), {}, arity, std::move(m)};
}

void require_params(const std::string &name, std::span<const double> params, size_t n) {
    if (params.size() != n) {
        throw GateError("gate '" + name + "' expects " + std::to_string(n) + " parameter(s), got " +
                        std::to_string(params.size()));
    }
}

}  // namespace

GateSpec identity_gate() { return fixed("id", Matrix::identity(2)); }

GateSpec h_gate() {
    double s = std::numbers::sqrt2 / 2;
    return fixed("h", Matrix{{s, s}, {s, -s}});
}

GateSpec x_gate() { return fixed("x", Matrix{{0, 1}, {1, 0}}); }

GateSpec y_gate() { return fixed("y", Matrix{{0, -kI}, {kI, 0}}); }

GateSpec z_gate() { return fixed("z", Matrix{{1, 0}, {0, -1}}); }

GateSpec sx_gate() {
    Complex p{0.5, 0.5};
    Complex m{0.5, -0.5};
    return fixed("sx", Matrix{{p, m}, {m, p}});
}

GateSpec rz_gate(double lambda) {
    require_finite(lambda, "rz");
    return GateSpec{"rz", {lambda}, 1, Matrix{{std::exp(-kI * lambda / 2.0), 0}, {0, std::exp(kI * lambda / 2.0)}}};
}

GateSpec rx_gate(double theta) {
    require_finite(theta, "rx");
    double c = std::cos(theta / 2);
    double s = std::sin(theta / 2);
    return GateSpec{"rx", {theta}, 1, Matrix{{c, -kI * s}, {-kI * s, c}}};
}

GateSpec phase_gate(double theta) {
    require_finite(theta, "p");
    return GateSpec{"p", {theta}, 1, Matrix{{1, 0}, {0, std::exp(kI * theta)}}};
}

GateSpec ry_gate(double phi) {
    require_finite(phi, "ry");
    double c = std::cos(phi / 2);
    double s = std::sin(phi / 2);
    return GateSpec{"ry", {phi}, 1, Matrix{{c, -s}, {s, c}}};
}

GateSpec cx_gate() { return controlled(x_gate()); }

GateSpec cz_gate() { return controlled(z_gate()); }

GateSpec swap_gate() {
    return fixed("swap", Matrix{{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}});
}

GateSpec ecr_gate() {
    double s = std::numbers::sqrt2 / 2;
    Matrix x = x_gate().matrix;
    Matrix y = y_gate().matrix;
    Matrix id = Matrix::identity(2);
    // First operand is the more significant kron factor.
    Matrix m = (x.kron(id) - y.kron(x)) * Complex{s};
    return fixed("ecr", std::move(m));
}

GateSpec controlled(const GateSpec &gate) {
    if (gate.arity != 1) {
        throw GateError("controlled() needs a 1-qubit gate, got arity " + std::to_string(gate.arity));
    }
    Matrix m = Matrix::identity(4);
    for (size_t r = 0; r < 2; r++) {
        for (size_t c = 0; c < 2; c++) {
            m(2 + r, 2 + c) = gate.matrix(r, c);
        }
    }
    return GateSpec{"c" + gate.name, gate.params, 2, std::move(m)};
}

GateSpec make_gate(const std::string &name, std::span<const double> params) {
    auto no_params = [&](GateSpec g) {
        require_params(name, params, 0);
        return g;
    };
    if (name == "id") return no_params(identity_gate());
    if (name == "h") return no_params(h_gate());
    if (name == "x") return no_params(x_gate());
    if (name == "y") return no_params(y_gate());
    if (name == "z") return no_params(z_gate());
    if (name == "sx") return no_params(sx_gate());
    if (name == "cx") return no_params(cx_gate());
    if (name == "cz") return no_params(cz_gate());
    if (name == "swap") return no_params(swap_gate());
    if (name == "ecr") return no_params(ecr_gate());
    if (name == "rz" || name == "rx" || name == "ry" || name == "p" || name == "cry" || name == "crz" ||
        name == "cp") {
        require_params(name, params, 1);
        double a = params[0];
        if (name == "rz") return rz_gate(a);
        if (name == "rx") return rx_gate(a);
        if (name == "ry") return ry_gate(a);
        if (name == "p") return phase_gate(a);
        if (name == "cry") return controlled(ry_gate(a));
        if (name == "crz") return controlled(rz_gate(a));
        return controlled(phase_gate(a));
    }
    throw GateError("unknown gate '" + name + "'");
}

bool is_primitive_gate(const std::string &name) {
    return name == "rz" || name == "sx" || name == "x" || name == "ecr";
}

std::vector<GateApplication> decompose_swap() {
    return {{cx_gate(), {0, 1}}, {cx_gate(), {1, 0}}, {cx_gate(), {0, 1}}};
}

}  // namespace qeraser
