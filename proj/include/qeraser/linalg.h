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

#ifndef QERASER_LINALG_H
#define QERASER_LINALG_H

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace qeraser {

using Complex = std::complex<double>;

inline constexpr double kStateTolerance = 1e-12;
inline constexpr double kOperatorTolerance = 1e-10;

/// Thrown for shape mismatches, bad qubit indices and non-physical inputs.
struct LinalgError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Dense square complex matrix, row-major.
class Matrix {
   public:
    Matrix() = default;
    explicit Matrix(size_t dim);
    Matrix(size_t dim, std::vector<Complex> entries);
    Matrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static Matrix identity(size_t dim);

    size_t dim() const { return dim_; }
    Complex &operator()(size_t r, size_t c) { return data_[r * dim_ + c]; }
    const Complex &operator()(size_t r, size_t c) const { return data_[r * dim_ + c]; }
    std::span<Complex> data() { return data_; }
    std::span<const Complex> data() const { return data_; }

    Matrix adjoint() const;
    Matrix conj() const;
    Complex trace() const;
    Matrix operator*(const Matrix &other) const;
    Matrix operator+(const Matrix &other) const;
    Matrix operator-(const Matrix &other) const;
    Matrix operator*(Complex scale) const;
    bool operator==(const Matrix &other) const = default;

    /// Kronecker product; `*this` occupies the more significant index bits.
    Matrix kron(const Matrix &other) const;

    /// Largest elementwise modulus.
    double max_abs() const;
    bool is_unitary(double tol = kOperatorTolerance) const;
    bool is_hermitian(double tol = kStateTolerance) const;

   private:
    size_t dim_ = 0;
    std::vector<Complex> data_;
};

/// max_ij |a_ij - e^{i alpha} b_ij| minimized over the global phase alpha.
double distance_up_to_phase(const Matrix &a, const Matrix &b);

/// Pure n-qubit state. Basis index bit q holds qubit q (little-endian).
class StateVector {
   public:
    explicit StateVector(int num_qubits);  // |0...0>
    StateVector(int num_qubits, std::vector<Complex> amplitudes);
    static StateVector basis(int num_qubits, uint64_t index);

    int num_qubits() const { return num_qubits_; }
    size_t dim() const { return amps_.size(); }
    std::span<Complex> amplitudes() { return amps_; }
    std::span<const Complex> amplitudes() const { return amps_; }
    Complex operator[](size_t i) const { return amps_[i]; }

    double norm_squared() const;
    void normalize();

   private:
    int num_qubits_;
    std::vector<Complex> amps_;
};

/// |<a|b>|^2, insensitive to global phase.
double fidelity(const StateVector &a, const StateVector &b);

/// Mixed n-qubit state, same little-endian indexing as StateVector.
class DensityMatrix {
   public:
    explicit DensityMatrix(int num_qubits);  // |0...0><0...0|
    DensityMatrix(int num_qubits, Matrix entries);
    static DensityMatrix from_pure(const StateVector &psi);

    int num_qubits() const { return num_qubits_; }
    size_t dim() const { return rho_.dim(); }
    const Matrix &matrix() const { return rho_; }
    Matrix &matrix() { return rho_; }

    Complex trace() const { return rho_.trace(); }
    double purity() const;
    /// <psi| rho |psi>
    double fidelity(const StateVector &psi) const;

    /// Checks trace, hermiticity and (via Cholesky with a shift) eigenvalues >= -eig_tol.
    bool is_valid(double tol = kStateTolerance, double eig_tol = 1e-10) const;

    DensityMatrix &operator+=(const DensityMatrix &other);
    DensityMatrix &operator*=(double scale);

   private:
    int num_qubits_;
    Matrix rho_;
};

/// Validates a target list against the register width and matrix dimension.
void check_targets(int num_qubits, std::span<const int> targets, size_t op_dim);

/// Applies `u` to the amplitude vector stored at base[0], base[stride], ...
///
/// The local index of `u` is big-endian over `targets`: targets[0] is the most
/// significant bit, so `controlled(U)` on {control, target} is I (+) U.
void apply_local(Complex *base, size_t stride, int num_qubits, const Matrix &u,
                 std::span<const int> targets);

StateVector apply_unitary(const StateVector &state, const Matrix &u, std::span<const int> targets);
void apply_unitary_inplace(StateVector &state, const Matrix &u, std::span<const int> targets);

/// rho -> sum_i K_i rho K_i^dagger. Throws if sum K^dagger K != I within `tol`.
DensityMatrix apply_kraus(const DensityMatrix &rho, std::span<const Matrix> kraus,
                          std::span<const int> targets, double tol = kOperatorTolerance);
/// rho -> K rho K^dagger without the completeness check (projectors, unitaries).
void conjugate_inplace(DensityMatrix &rho, const Matrix &k, std::span<const int> targets);

bool is_trace_preserving(std::span<const Matrix> kraus, double tol = kOperatorTolerance);

/// Reduced state on `keep`; keep[0] becomes bit 0 of the reduced index.
DensityMatrix partial_trace(const DensityMatrix &rho, std::span<const int> keep);

double measure_probability(const StateVector &state, int qubit, int outcome);
double measure_probability(const DensityMatrix &rho, int qubit, int outcome);

/// Probability that qubits[j] reads outcomes[j] for every j.
double joint_probability(const StateVector &state, std::span<const int> qubits,
                         std::span<const int> outcomes);
double joint_probability(const DensityMatrix &rho, std::span<const int> qubits,
                         std::span<const int> outcomes);

}  // namespace qeraser

#endif
