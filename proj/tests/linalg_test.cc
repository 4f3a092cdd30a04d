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

#include "qeraser/linalg.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qeraser/gates.h"

using namespace qeraser;

namespace {

const double kR = 1 / std::sqrt(2.0);

StateVector random_state(int n, std::mt19937_64 &gen) {
    std::normal_distribution<double> g;
    std::vector<Complex> amps(size_t{1} << n);
    double norm = 0;
    for (auto &a : amps) {
        a = {g(gen), g(gen)};
        norm += std::norm(a);
    }
    for (auto &a : amps) a /= std::sqrt(norm);
    return StateVector(n, amps);
}

Matrix random_unitary_1q(std::mt19937_64 &gen) {
    std::uniform_real_distribution<double> u(0, 2 * std::numbers::pi);
    return rz_gate(u(gen)).matrix * ry_gate(u(gen)).matrix * rz_gate(u(gen)).matrix;
}

}  // namespace

TEST(linalg, hadamard_on_zero) {
    StateVector s = apply_unitary(StateVector(1), h_gate().matrix, std::vector<int>{0});
    EXPECT_NEAR(std::abs(s[0] - kR), 0, 1e-15);
    EXPECT_NEAR(std::abs(s[1] - kR), 0, 1e-15);
}

TEST(linalg, ry_half_pi_on_zero) {
    StateVector s = apply_unitary(StateVector(1), ry_gate(std::numbers::pi / 2).matrix, std::vector<int>{0});
    EXPECT_NEAR(std::abs(s[0] - kR), 0, 1e-15);
    EXPECT_NEAR(std::abs(s[1] - kR), 0, 1e-15);
}

TEST(linalg, cnot_makes_bell_state) {
    // (|00> + |10>)/sqrt2 in ket order q0 q1: qubit 0 in superposition, index bit 0.
    StateVector s(2, {kR, kR, 0, 0});
    apply_unitary_inplace(s, cx_gate().matrix, std::vector<int>{0, 1});
    EXPECT_NEAR(std::abs(s[0] - kR), 0, 1e-15);
    EXPECT_NEAR(std::abs(s[3] - kR), 0, 1e-15);
    EXPECT_NEAR(std::abs(s[1]), 0, 1e-15);
    EXPECT_NEAR(std::abs(s[2]), 0, 1e-15);
}

TEST(linalg, operand_order_is_respected) {
    // CX with control on qubit 2, target qubit 0 of a 3-qubit register.
    StateVector s = StateVector::basis(3, 0b100);
    apply_unitary_inplace(s, cx_gate().matrix, std::vector<int>{2, 0});
    EXPECT_NEAR(std::abs(s[0b101]), 1, 1e-15);
}

TEST(linalg, rejects_bad_targets) {
    StateVector s(2);
    EXPECT_THROW(apply_unitary_inplace(s, cx_gate().matrix, std::vector<int>{0, 0}), LinalgError);
    EXPECT_THROW(apply_unitary_inplace(s, cx_gate().matrix, std::vector<int>{0, 2}), LinalgError);
    EXPECT_THROW(apply_unitary_inplace(s, h_gate().matrix, std::vector<int>{0, 1}), LinalgError);
}

TEST(linalg, norm_preserved_over_random_sequences) {
    std::mt19937_64 gen(7);
    StateVector s = random_state(4, gen);
    std::uniform_int_distribution<int> q(0, 3);
    for (int k = 0; k < 500; k++) {
        if (k % 3 == 0) {
            int a = q(gen), b = q(gen);
            if (a == b) b = (a + 1) % 4;
            apply_unitary_inplace(s, ecr_gate().matrix, std::vector<int>{a, b});
        } else {
            apply_unitary_inplace(s, random_unitary_1q(gen), std::vector<int>{q(gen)});
        }
        ASSERT_LT(std::abs(s.norm_squared() - 1), 1e-12);
    }
}

TEST(linalg, pure_state_purity) {
    std::mt19937_64 gen(3);
    auto rho = DensityMatrix::from_pure(random_state(3, gen));
    EXPECT_NEAR(rho.purity(), 1, 1e-10);
    EXPECT_TRUE(rho.is_valid());
}

TEST(linalg, identity_kraus_leaves_state) {
    DensityMatrix rho = DensityMatrix::from_pure(StateVector(1, {kR, kR}));
    std::vector<Matrix> k{Matrix::identity(2)};
    DensityMatrix out = apply_kraus(rho, k, std::vector<int>{0});
    EXPECT_EQ(out.matrix(), rho.matrix());
}

TEST(linalg, full_dephasing) {
    DensityMatrix rho = DensityMatrix::from_pure(StateVector(1, {kR, kR}));
    Matrix p0{{1, 0}, {0, 0}}, p1{{0, 0}, {0, 1}};
    std::vector<Matrix> k{p0, p1};
    DensityMatrix out = apply_kraus(rho, k, std::vector<int>{0});
    EXPECT_NEAR(std::abs(out.matrix()(0, 1)), 0, 1e-15);
    EXPECT_NEAR(out.matrix()(0, 0).real(), 0.5, 1e-15);
    EXPECT_NEAR(out.matrix()(1, 1).real(), 0.5, 1e-15);
}

TEST(linalg, partial_dephasing_matches_closed_form) {
    // Kraus {sqrt(p) I, sqrt(1-p) Z} scales coherences by 2p - 1 = e^{-1}.
    double p = (1 + std::exp(-1.0)) / 2;
    std::vector<Matrix> k{Matrix::identity(2) * Complex(std::sqrt(p)), z_gate().matrix * Complex(std::sqrt(1 - p))};
    DensityMatrix rho = DensityMatrix::from_pure(StateVector(1, {kR, kR}));
    DensityMatrix out = apply_kraus(rho, k, std::vector<int>{0});
    // Oracle: sum_i K rho K^dagger by plain matrix products.
    Matrix oracle = k[0] * rho.matrix() * k[0].adjoint() + k[1] * rho.matrix() * k[1].adjoint();
    EXPECT_LT((out.matrix() - oracle).max_abs(), 1e-15);
    EXPECT_NEAR(std::abs(out.matrix()(0, 1)), 0.18393972058572117, 1e-12);
}

TEST(linalg, single_kraus_equals_unitary) {
    std::mt19937_64 gen(11);
    StateVector psi = random_state(3, gen);
    Matrix u = ecr_gate().matrix;
    std::vector<int> t{2, 0};
    DensityMatrix a = apply_kraus(DensityMatrix::from_pure(psi), std::vector<Matrix>{u}, t);
    DensityMatrix b = DensityMatrix::from_pure(apply_unitary(psi, u, t));
    EXPECT_LT((a.matrix() - b.matrix()).max_abs(), 1e-12);
}

TEST(linalg, kraus_must_be_trace_preserving) {
    DensityMatrix rho(1);
    std::vector<Matrix> bad{Matrix::identity(2) * Complex(0.5)};
    EXPECT_FALSE(is_trace_preserving(bad));
    EXPECT_THROW(apply_kraus(rho, bad, std::vector<int>{0}), LinalgError);
}

TEST(linalg, partial_trace_of_recorder_entangled_state) {
    // (|0>_s|10>_xy + |1>_s|01>_xy)/sqrt2 with s = q0, x = q1, y = q2.
    StateVector psi(3);
    psi.amplitudes()[0] = 0;
    psi.amplitudes()[0b010] = kR;  // s=0 x=1 y=0
    psi.amplitudes()[0b101] = kR;  // s=1 x=0 y=1
    DensityMatrix rs = partial_trace(DensityMatrix::from_pure(psi), std::vector<int>{0});
    EXPECT_NEAR(rs.matrix()(0, 0).real(), 0.5, 1e-15);
    EXPECT_NEAR(rs.matrix()(1, 1).real(), 0.5, 1e-15);
    EXPECT_NEAR(std::abs(rs.matrix()(0, 1)), 0, 1e-15);
    EXPECT_NEAR(rs.trace().real(), 1, 1e-12);
}

TEST(linalg, partial_trace_of_product_state) {
    DensityMatrix rho = DensityMatrix::from_pure(StateVector::basis(2, 0b10));  // q0=0, q1=1
    DensityMatrix r0 = partial_trace(rho, std::vector<int>{0});
    EXPECT_NEAR(r0.matrix()(0, 0).real(), 1, 1e-15);
    EXPECT_NEAR(std::abs(r0.matrix()(1, 1)), 0, 1e-15);
}

TEST(linalg, partial_trace_keeps_unit_trace) {
    std::mt19937_64 gen(5);
    DensityMatrix rho = DensityMatrix::from_pure(random_state(4, gen));
    for (std::vector<int> keep : {std::vector<int>{0}, {1, 3}, {2, 0, 1}}) {
        EXPECT_NEAR(partial_trace(rho, keep).trace().real(), 1, 1e-12);
    }
}

TEST(linalg, measurement_probabilities) {
    EXPECT_EQ(measure_probability(StateVector(1), 0, 1), 0);
    StateVector bell(2, {kR, 0, 0, kR});
    EXPECT_NEAR(measure_probability(bell, 1, 0), 0.5, 1e-15);
    EXPECT_NEAR(joint_probability(bell, std::vector<int>{0, 1}, std::vector<int>{1, 1}), 0.5, 1e-15);
    EXPECT_NEAR(joint_probability(bell, std::vector<int>{0, 1}, std::vector<int>{1, 0}), 0, 1e-15);
    auto rho = DensityMatrix::from_pure(bell);
    EXPECT_NEAR(measure_probability(rho, 0, 1), 0.5, 1e-15);
}

TEST(linalg, distance_ignores_global_phase_only) {
    Matrix h = h_gate().matrix;
    EXPECT_LT(distance_up_to_phase(h, h * Complex(std::polar(1.0, 0.7))), 1e-15);
    EXPECT_GT(distance_up_to_phase(h, x_gate().matrix), 0.1);
}

TEST(linalg, kron_puts_first_factor_high) {
    Matrix m = x_gate().matrix.kron(Matrix::identity(2));
    // |00> -> |10> where the left factor owns the high bit.
    EXPECT_EQ(m(2, 0), Complex(1));
}
