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

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <string>

namespace qeraser {

Matrix::Matrix(size_t dim) : dim_(dim), data_(dim * dim) {}

Matrix::Matrix(size_t dim, std::vector<Complex> entries) : dim_(dim), data_(std::move(entries)) {
    if (data_.size() != dim * dim) {
        throw LinalgError("matrix entry count " + std::to_string(data_.size()) + " != dim^2");
    }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<Complex>> rows) : dim_(rows.size()) {
    data_.reserve(dim_ * dim_);
    for (const auto &row : rows) {
        if (row.size() != dim_) {
            throw LinalgError("matrix rows must form a square");
        }
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

Matrix Matrix::identity(size_t dim) {
    Matrix m(dim);
    for (size_t i = 0; i < dim; i++) {
        m(i, i) = 1;
    }
    return m;
}

Matrix Matrix::adjoint() const {
    Matrix m(dim_);
    for (size_t r = 0; r < dim_; r++) {
        for (size_t c = 0; c < dim_; c++) {
            m(c, r) = std::conj((*this)(r, c));
        }
    }
    return m;
}

Matrix Matrix::conj() const {
    Matrix m(dim_);
    for (size_t i = 0; i < data_.size(); i++) {
        m.data_[i] = std::conj(data_[i]);
    }
    return m;
}

Complex Matrix::trace() const {
    Complex t = 0;
    for (size_t i = 0; i < dim_; i++) {
        t += (*this)(i, i);
    }
    return t;
}

Matrix Matrix::operator*(const Matrix &other) const {
    if (other.dim_ != dim_) {
        throw LinalgError("matrix product dimension mismatch");
    }
    Matrix m(dim_);
    for (size_t r = 0; r < dim_; r++) {
        for (size_t k = 0; k < dim_; k++) {
            Complex a = (*this)(r, k);
            if (a == Complex{}) {
                continue;
            }
            for (size_t c = 0; c < dim_; c++) {
                m(r, c) += a * other(k, c);
            }
        }
    }
    return m;
}

Matrix Matrix::operator+(const Matrix &other) const {
    if (other.dim_ != dim_) {
        throw LinalgError("matrix sum dimension mismatch");
    }
    Matrix m = *this;
    for (size_t i = 0; i < data_.size(); i++) {
        m.data_[i] += other.data_[i];
    }
    return m;
}

Matrix Matrix::operator-(const Matrix &other) const { return *this + other * Complex{-1}; }

Matrix Matrix::operator*(Complex scale) const {
    Matrix m = *this;
    for (auto &v : m.data_) {
        v *= scale;
    }
    return m;
}

Matrix Matrix::kron(const Matrix &other) const {
    size_t d = dim_ * other.dim_;
    Matrix m(d);
    for (size_t r1 = 0; r1 < dim_; r1++) {
        for (size_t c1 = 0; c1 < dim_; c1++) {
            Complex a = (*this)(r1, c1);
            for (size_t r2 = 0; r2 < other.dim_; r2++) {
                for (size_t c2 = 0; c2 < other.dim_; c2++) {
                    m(r1 * other.dim_ + r2, c1 * other.dim_ + c2) = a * other(r2, c2);
                }
            }
        }
    }
    return m;
}

double Matrix::max_abs() const {
    double best = 0;
    for (const auto &v : data_) {
        best = std::max(best, std::abs(v));
    }
    return best;
}

bool Matrix::is_unitary(double tol) const {
    return ((*this) * adjoint() - identity(dim_)).max_abs() <= tol;
}

bool Matrix::is_hermitian(double tol) const { return ((*this) - adjoint()).max_abs() <= tol; }

double distance_up_to_phase(const Matrix &a, const Matrix &b) {
    if (a.dim() != b.dim()) {
        throw LinalgError("distance_up_to_phase dimension mismatch");
    }
    // Phase aligning the overlap <b, a>; exact for equal-up-to-phase inputs.
    Complex overlap = 0;
    for (size_t i = 0; i < a.data().size(); i++) {
        overlap += std::conj(b.data()[i]) * a.data()[i];
    }
    Complex phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : Complex{1};
    return (a - b * phase).max_abs();
}

StateVector::StateVector(int num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits < 1 || num_qubits > 30) {
        throw LinalgError("num_qubits out of range: " + std::to_string(num_qubits));
    }
    amps_.assign(size_t{1} << num_qubits, Complex{});
    amps_[0] = 1;
}

StateVector::StateVector(int num_qubits, std::vector<Complex> amplitudes)
    : num_qubits_(num_qubits), amps_(std::move(amplitudes)) {
    if (num_qubits < 1 || num_qubits > 30 || amps_.size() != (size_t{1} << num_qubits)) {
        throw LinalgError("amplitude count does not match 2^num_qubits");
    }
    for (const auto &a : amps_) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw LinalgError("non-finite amplitude");
        }
    }
    if (std::abs(norm_squared() - 1) > kStateTolerance) {
        throw LinalgError("state vector is not normalized");
    }
}

StateVector StateVector::basis(int num_qubits, uint64_t index) {
    StateVector s(num_qubits);
    if (index >= s.dim()) {
        throw LinalgError("basis index out of range");
    }
    s.amps_[0] = 0;
    s.amps_[index] = 1;
    return s;
}

double StateVector::norm_squared() const {
    double n = 0;
    for (const auto &a : amps_) {
        n += std::norm(a);
    }
    return n;
}

void StateVector::normalize() {
    double n = std::sqrt(norm_squared());
    if (n == 0) {
        throw LinalgError("cannot normalize the zero vector");
    }
    for (auto &a : amps_) {
        a /= n;
    }
}

double fidelity(const StateVector &a, const StateVector &b) {
    if (a.dim() != b.dim()) {
        throw LinalgError("fidelity dimension mismatch");
    }
    Complex overlap = 0;
    for (size_t i = 0; i < a.dim(); i++) {
        overlap += std::conj(a[i]) * b[i];
    }
    return std::norm(overlap);
}

DensityMatrix::DensityMatrix(int num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits < 1 || num_qubits > 14) {
        throw LinalgError("density matrix num_qubits out of range: " + std::to_string(num_qubits));
    }
    rho_ = Matrix(size_t{1} << num_qubits);
    rho_(0, 0) = 1;
}

DensityMatrix::DensityMatrix(int num_qubits, Matrix entries) : num_qubits_(num_qubits), rho_(std::move(entries)) {
    if (num_qubits < 1 || num_qubits > 14 || rho_.dim() != (size_t{1} << num_qubits)) {
        throw LinalgError("density matrix dimension does not match 2^num_qubits");
    }
}

DensityMatrix DensityMatrix::from_pure(const StateVector &psi) {
    size_t d = psi.dim();
    Matrix m(d);
    for (size_t r = 0; r < d; r++) {
        for (size_t c = 0; c < d; c++) {
            m(r, c) = psi[r] * std::conj(psi[c]);
        }
    }
    return DensityMatrix(psi.num_qubits(), std::move(m));
}

double DensityMatrix::purity() const { return ((rho_ * rho_).trace()).real(); }

double DensityMatrix::fidelity(const StateVector &psi) const {
    if (psi.dim() != dim()) {
        throw LinalgError("fidelity dimension mismatch");
    }
    Complex f = 0;
    for (size_t r = 0; r < dim(); r++) {
        Complex row = 0;
        for (size_t c = 0; c < dim(); c++) {
            row += rho_(r, c) * psi[c];
        }
        f += std::conj(psi[r]) * row;
    }
    return f.real();
}

bool DensityMatrix::is_valid(double tol, double eig_tol) const {
    if (std::abs(trace() - Complex{1}) > tol || !rho_.is_hermitian(tol)) {
        return false;
    }
    // rho + eig_tol * I must admit a Cholesky factorization.
    size_t d = dim();
    Matrix l(d);
    for (size_t j = 0; j < d; j++) {
        double diag = rho_(j, j).real() + eig_tol;
        for (size_t k = 0; k < j; k++) {
            diag -= std::norm(l(j, k));
        }
        if (diag <= 0) {
            return false;
        }
        l(j, j) = std::sqrt(diag);
        for (size_t i = j + 1; i < d; i++) {
            Complex v = rho_(i, j);
            for (size_t k = 0; k < j; k++) {
                v -= l(i, k) * std::conj(l(j, k));
            }
            l(i, j) = v / l(j, j).real();
        }
    }
    return true;
}

DensityMatrix &DensityMatrix::operator+=(const DensityMatrix &other) {
    rho_ = rho_ + other.rho_;
    return *this;
}

DensityMatrix &DensityMatrix::operator*=(double scale) {
    for (auto &v : rho_.data()) {
        v *= scale;
    }
    return *this;
}

void check_targets(int num_qubits, std::span<const int> targets, size_t op_dim) {
    if (targets.empty() || targets.size() > 6) {
        throw LinalgError("target list must hold 1..6 qubits");
    }
    if (op_dim != (size_t{1} << targets.size())) {
        throw LinalgError("operator dimension " + std::to_string(op_dim) + " does not match " +
                          std::to_string(targets.size()) + " targets");
    }
    uint64_t seen = 0;
    for (int t : targets) {
        if (t < 0 || t >= num_qubits) {
            throw LinalgError("target qubit " + std::to_string(t) + " out of range");
        }
        if (seen & (uint64_t{1} << t)) {
            throw LinalgError("duplicate target qubit " + std::to_string(t));
        }
        seen |= uint64_t{1} << t;
    }
}

void apply_local(Complex *base, size_t stride, int num_qubits, const Matrix &u, std::span<const int> targets) {
    const size_t k = targets.size();
    const size_t local = size_t{1} << k;
    std::array<size_t, 64> offsets{};
    uint64_t mask = 0;
    for (size_t l = 0; l < local; l++) {
        size_t off = 0;
        for (size_t j = 0; j < k; j++) {
            if (l & (size_t{1} << (k - 1 - j))) {
                off |= size_t{1} << targets[j];
            }
        }
        offsets[l] = off * stride;
    }
    for (int t : targets) {
        mask |= uint64_t{1} << t;
    }
    const size_t dim = size_t{1} << num_qubits;
    std::array<Complex, 64> in{};
    for (size_t i = 0; i < dim; i++) {
        if (i & mask) {
            continue;
        }
        Complex *p = base + i * stride;
        for (size_t l = 0; l < local; l++) {
            in[l] = p[offsets[l]];
        }
        for (size_t r = 0; r < local; r++) {
            Complex acc = 0;
            for (size_t c = 0; c < local; c++) {
                acc += u(r, c) * in[c];
            }
            p[offsets[r]] = acc;
        }
    }
}

void apply_unitary_inplace(StateVector &state, const Matrix &u, std::span<const int> targets) {
    check_targets(state.num_qubits(), targets, u.dim());
    apply_local(state.amplitudes().data(), 1, state.num_qubits(), u, targets);
}

StateVector apply_unitary(const StateVector &state, const Matrix &u, std::span<const int> targets) {
    StateVector out = state;
    apply_unitary_inplace(out, u, targets);
    return out;
}

void conjugate_inplace(DensityMatrix &rho, const Matrix &k, std::span<const int> targets) {
    const int n = rho.num_qubits();
    check_targets(n, targets, k.dim());
    const size_t d = rho.dim();
    Complex *data = rho.matrix().data().data();
    // K rho: K acts on every column.
    for (size_t c = 0; c < d; c++) {
        apply_local(data + c, d, n, k, targets);
    }
    // (K rho) K^dagger: conj(K) acts on every row.
    Matrix kc = k.conj();
    for (size_t r = 0; r < d; r++) {
        apply_local(data + r * d, 1, n, kc, targets);
    }
}

bool is_trace_preserving(std::span<const Matrix> kraus, double tol) {
    if (kraus.empty()) {
        return false;
    }
    Matrix sum(kraus[0].dim());
    for (const auto &k : kraus) {
        if (k.dim() != sum.dim()) {
            return false;
        }
        sum = sum + k.adjoint() * k;
    }
    return (sum - Matrix::identity(sum.dim())).max_abs() <= tol;
}

DensityMatrix apply_kraus(const DensityMatrix &rho, std::span<const Matrix> kraus, std::span<const int> targets,
                          double tol) {
    if (!is_trace_preserving(kraus, tol)) {
        throw LinalgError("Kraus set is not trace preserving");
    }
    DensityMatrix out(rho.num_qubits(), Matrix(rho.dim()));
    for (const auto &k : kraus) {
        DensityMatrix term = rho;
        conjugate_inplace(term, k, targets);
        out += term;
    }
    return out;
}

DensityMatrix partial_trace(const DensityMatrix &rho, std::span<const int> keep) {
    const int n = rho.num_qubits();
    if (keep.empty()) {
        throw LinalgError("partial_trace keep set is empty");
    }
    check_targets(n, keep, size_t{1} << keep.size());
    uint64_t keep_mask = 0;
    for (int q : keep) {
        keep_mask |= uint64_t{1} << q;
    }
    std::vector<int> traced;
    for (int q = 0; q < n; q++) {
        if (!(keep_mask & (uint64_t{1} << q))) {
            traced.push_back(q);
        }
    }
    auto scatter = [](uint64_t local, std::span<const int> qubits) {
        uint64_t full = 0;
        for (size_t j = 0; j < qubits.size(); j++) {
            if (local & (uint64_t{1} << j)) {
                full |= uint64_t{1} << qubits[j];
            }
        }
        return full;
    };
    const int m = static_cast<int>(keep.size());
    const size_t dk = size_t{1} << m;
    const size_t dt = size_t{1} << traced.size();
    Matrix out(dk);
    for (size_t r = 0; r < dk; r++) {
        uint64_t rf = scatter(r, keep);
        for (size_t c = 0; c < dk; c++) {
            uint64_t cf = scatter(c, keep);
            Complex acc = 0;
            for (size_t e = 0; e < dt; e++) {
                uint64_t ef = scatter(e, traced);
                acc += rho.matrix()(rf | ef, cf | ef);
            }
            out(r, c) = acc;
        }
    }
    return DensityMatrix(m, std::move(out));
}

namespace {

void check_outcomes(int num_qubits, std::span<const int> qubits, std::span<const int> outcomes) {
    if (qubits.size() != outcomes.size()) {
        throw LinalgError("qubit/outcome list length mismatch");
    }
    check_targets(num_qubits, qubits, size_t{1} << qubits.size());
    for (int o : outcomes) {
        if (o != 0 && o != 1) {
            throw LinalgError("measurement outcome must be 0 or 1");
        }
    }
}

template <typename Weight>
double sum_matching(size_t dim, std::span<const int> qubits, std::span<const int> outcomes, Weight weight) {
    uint64_t mask = 0;
    uint64_t want = 0;
    for (size_t j = 0; j < qubits.size(); j++) {
        mask |= uint64_t{1} << qubits[j];
        if (outcomes[j]) {
            want |= uint64_t{1} << qubits[j];
        }
    }
    double p = 0;
    for (size_t i = 0; i < dim; i++) {
        if ((i & mask) == want) {
            p += weight(i);
        }
    }
    return std::clamp(p, 0.0, 1.0);
}

}  // namespace

double joint_probability(const StateVector &state, std::span<const int> qubits, std::span<const int> outcomes) {
    check_outcomes(state.num_qubits(), qubits, outcomes);
    return sum_matching(state.dim(), qubits, outcomes, [&](size_t i) { return std::norm(state[i]); });
}

double joint_probability(const DensityMatrix &rho, std::span<const int> qubits, std::span<const int> outcomes) {
    check_outcomes(rho.num_qubits(), qubits, outcomes);
    return sum_matching(rho.dim(), qubits, outcomes, [&](size_t i) { return rho.matrix()(i, i).real(); });
}

double measure_probability(const StateVector &state, int qubit, int outcome) {
    int q[] = {qubit};
    int o[] = {outcome};
    return joint_probability(state, q, o);
}

double measure_probability(const DensityMatrix &rho, int qubit, int outcome) {
    int q[] = {qubit};
    int o[] = {outcome};
    return joint_probability(rho, q, o);
}

}  // namespace qeraser
