// Copyright 2026 The qmask Authors
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

/**
 * @file
 * Dense state vectors and density matrices over multi-qudit registers.
 *
 * Flat amplitude indices are big-endian in party order: party 0 is the most
 * significant digit, so |j0 j1 ... j_{m-1}> sits at
 * ((j0 * dims[1] + j1) * dims[2] + j2) ...
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qmask/errors.hpp"

namespace qmask {

using cplx = std::complex<double>;
using Dims = std::vector<std::size_t>;

inline constexpr double kStructuralTol = 1e-12;
inline constexpr double kPsdSlack = 1e-10;
inline constexpr double kAcceptanceTol = 1e-10;

inline std::size_t total_dim(std::span<const std::size_t> dims) {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                           std::multiplies<>{});
}

/// Digits of a flat index for the given register dims.
inline std::vector<std::size_t> index_to_digits(std::size_t index,
                                                std::span<const std::size_t> dims) {
    std::vector<std::size_t> digits(dims.size());
    for (std::size_t p = dims.size(); p-- > 0;) {
        digits[p] = index % dims[p];
        index /= dims[p];
    }
    return digits;
}

inline std::size_t digits_to_index(std::span<const std::size_t> digits,
                                   std::span<const std::size_t> dims) {
    std::size_t index = 0;
    for (std::size_t p = 0; p < dims.size(); ++p) {
        index = index * dims[p] + digits[p];
    }
    return index;
}

/// Distance between consecutive values of party p's digit in the flat index.
inline std::size_t party_stride(std::span<const std::size_t> dims, std::size_t p) {
    std::size_t stride = 1;
    for (std::size_t q = p + 1; q < dims.size(); ++q) {
        stride *= dims[q];
    }
    return stride;
}

class StateVector {
  public:
    StateVector(Dims dims, std::vector<cplx> amps)
        : dims_(std::move(dims)), amps_(std::move(amps)) {
        if (dims_.empty()) {
            throw ShapeError("StateVector: register needs at least one party");
        }
        for (auto d : dims_) {
            if (d < 2) {
                throw ShapeError("StateVector: every party dimension must be >= 2");
            }
        }
        if (amps_.size() != total_dim(dims_)) {
            throw ShapeError("StateVector: amplitude count " +
                             std::to_string(amps_.size()) +
                             " does not match product of dims " +
                             std::to_string(total_dim(dims_)));
        }
    }

    /// Computational basis state |digits>.
    static StateVector basis(Dims dims, std::span<const std::size_t> digits) {
        if (digits.size() != dims.size()) {
            throw ShapeError("StateVector::basis: digit count does not match dims");
        }
        for (std::size_t p = 0; p < dims.size(); ++p) {
            if (digits[p] >= dims[p]) {
                throw ArgumentError("StateVector::basis: digit out of range");
            }
        }
        std::vector<cplx> amps(total_dim(dims));
        amps[digits_to_index(digits, dims)] = 1.0;
        return {std::move(dims), std::move(amps)};
    }

    static StateVector basis(Dims dims, std::initializer_list<std::size_t> digits) {
        return basis(std::move(dims), std::span<const std::size_t>(digits.begin(), digits.size()));
    }

    /// Basis state selected by flat index.
    static StateVector basis_index(Dims dims, std::size_t index) {
        std::vector<cplx> amps(total_dim(dims));
        if (index >= amps.size()) {
            throw ArgumentError("StateVector::basis_index: index out of range");
        }
        amps[index] = 1.0;
        return {std::move(dims), std::move(amps)};
    }

    const Dims& dims() const { return dims_; }
    std::size_t n_parties() const { return dims_.size(); }
    std::size_t size() const { return amps_.size(); }
    std::span<const cplx> amps() const { return amps_; }
    const cplx& operator[](std::size_t i) const { return amps_[i]; }

    double norm_squared() const {
        double acc = 0.0;
        for (const auto& a : amps_) {
            acc += std::norm(a);
        }
        return acc;
    }

    bool is_normalized(double tol = kStructuralTol) const {
        return std::abs(norm_squared() - 1.0) <= tol;
    }

    StateVector normalized() const {
        const double n = std::sqrt(norm_squared());
        if (n == 0.0) {
            throw ArgumentError("StateVector::normalized: zero vector");
        }
        std::vector<cplx> amps(amps_);
        for (auto& a : amps) {
            a /= n;
        }
        return {dims_, std::move(amps)};
    }

    StateVector scaled(cplx factor) const {
        std::vector<cplx> amps(amps_);
        for (auto& a : amps) {
            a *= factor;
        }
        return {dims_, std::move(amps)};
    }

    /// Same amplitudes read against a different factorization of the space.
    StateVector reshaped(Dims dims) const {
        return {std::move(dims), amps_};
    }

    friend StateVector operator+(const StateVector& a, const StateVector& b) {
        if (a.dims_ != b.dims_) {
            throw ShapeError("StateVector +: dims mismatch");
        }
        std::vector<cplx> amps(a.amps_);
        for (std::size_t i = 0; i < amps.size(); ++i) {
            amps[i] += b.amps_[i];
        }
        return {a.dims_, std::move(amps)};
    }

  private:
    Dims dims_;
    std::vector<cplx> amps_;
};

class DensityMatrix {
  public:
    DensityMatrix(std::size_t dim, std::vector<cplx> mat)
        : dim_(dim), mat_(std::move(mat)) {
        if (dim_ == 0 || mat_.size() != dim_ * dim_) {
            throw ShapeError("DensityMatrix: entry count must equal dim*dim");
        }
    }

    static DensityMatrix maximally_mixed(std::size_t dim) {
        std::vector<cplx> mat(dim * dim);
        for (std::size_t i = 0; i < dim; ++i) {
            mat[i * dim + i] = 1.0 / static_cast<double>(dim);
        }
        return {dim, std::move(mat)};
    }

    std::size_t dim() const { return dim_; }
    const cplx& operator()(std::size_t row, std::size_t col) const {
        return mat_[row * dim_ + col];
    }
    std::span<const cplx> data() const { return mat_; }

    cplx trace() const {
        cplx tr = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) {
            tr += (*this)(i, i);
        }
        return tr;
    }

    /// trace(rho^2)
    double purity() const {
        // rho Hermitian: trace(rho rho) = sum |rho_ij|^2
        double acc = 0.0;
        for (const auto& z : mat_) {
            acc += std::norm(z);
        }
        return acc;
    }

    double hermiticity_error() const {
        double err = 0.0;
        for (std::size_t r = 0; r < dim_; ++r) {
            for (std::size_t c = 0; c < dim_; ++c) {
                err = std::max(err, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
            }
        }
        return err;
    }

    /// Max-entry distance to another matrix of equal dimension.
    double max_abs_diff(const DensityMatrix& other) const {
        if (other.dim_ != dim_) {
            throw ShapeError("DensityMatrix: dimension mismatch");
        }
        double err = 0.0;
        for (std::size_t i = 0; i < mat_.size(); ++i) {
            err = std::max(err, std::abs(mat_[i] - other.mat_[i]));
        }
        return err;
    }

    /// Smallest eigenvalue, by cyclic Jacobi on the real symmetric embedding
    /// [[Re, -Im], [Im, Re]] (its spectrum is that of rho, doubled).
    double min_eigenvalue() const {
        const std::size_t n = 2 * dim_;
        std::vector<double> a(n * n);
        for (std::size_t r = 0; r < dim_; ++r) {
            for (std::size_t c = 0; c < dim_; ++c) {
                const cplx z = (*this)(r, c);
                a[r * n + c] = z.real();
                a[(r + dim_) * n + (c + dim_)] = z.real();
                a[r * n + (c + dim_)] = -z.imag();
                a[(r + dim_) * n + c] = z.imag();
            }
        }
        for (int sweep = 0; sweep < 100; ++sweep) {
            double off = 0.0;
            for (std::size_t p = 0; p < n; ++p) {
                for (std::size_t q = p + 1; q < n; ++q) {
                    off += a[p * n + q] * a[p * n + q];
                }
            }
            if (off < 1e-30) {
                break;
            }
            for (std::size_t p = 0; p < n; ++p) {
                for (std::size_t q = p + 1; q < n; ++q) {
                    const double apq = a[p * n + q];
                    if (std::abs(apq) < 1e-300) {
                        continue;
                    }
                    const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                    const double t = (theta >= 0 ? 1.0 : -1.0) /
                                     (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                    const double c = 1.0 / std::sqrt(t * t + 1.0);
                    const double s = t * c;
                    for (std::size_t k = 0; k < n; ++k) {
                        const double akp = a[k * n + p];
                        const double akq = a[k * n + q];
                        a[k * n + p] = c * akp - s * akq;
                        a[k * n + q] = s * akp + c * akq;
                    }
                    for (std::size_t k = 0; k < n; ++k) {
                        const double apk = a[p * n + k];
                        const double aqk = a[q * n + k];
                        a[p * n + k] = c * apk - s * aqk;
                        a[q * n + k] = s * apk + c * aqk;
                    }
                }
            }
        }
        double lo = a[0];
        for (std::size_t i = 1; i < n; ++i) {
            lo = std::min(lo, a[i * n + i]);
        }
        return lo;
    }

  private:
    std::size_t dim_;
    std::vector<cplx> mat_;
};

/// Sorted, duplicate-free set of 0-based party indices.
class PartySet {
  public:
    PartySet() = default;
    PartySet(std::initializer_list<std::size_t> indices)
        : PartySet(std::vector<std::size_t>(indices)) {}
    explicit PartySet(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
        std::sort(indices_.begin(), indices_.end());
        indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
    }

    static PartySet single(std::size_t party) { return PartySet{party}; }

    const std::vector<std::size_t>& indices() const { return indices_; }
    bool empty() const { return indices_.empty(); }
    std::size_t size() const { return indices_.size(); }
    bool contains(std::size_t party) const {
        return std::binary_search(indices_.begin(), indices_.end(), party);
    }

    /// Parties of an n-party register not in this set.
    PartySet complement(std::size_t n_parties) const {
        std::vector<std::size_t> rest;
        for (std::size_t p = 0; p < n_parties; ++p) {
            if (!contains(p)) {
                rest.push_back(p);
            }
        }
        return PartySet(std::move(rest));
    }

  private:
    std::vector<std::size_t> indices_;
};

inline StateVector tensor_product(const StateVector& a, const StateVector& b) {
    Dims dims = a.dims();
    dims.insert(dims.end(), b.dims().begin(), b.dims().end());
    std::vector<cplx> amps;
    amps.reserve(a.size() * b.size());
    for (const auto& x : a.amps()) {
        for (const auto& y : b.amps()) {
            amps.push_back(x * y);
        }
    }
    return {std::move(dims), std::move(amps)};
}

/// <a|b>, conjugate-linear in a.
inline cplx inner_product(const StateVector& a, const StateVector& b) {
    if (a.dims() != b.dims()) {
        throw ShapeError("inner_product: dims mismatch");
    }
    cplx acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += std::conj(a[i]) * b[i];
    }
    return acc;
}

/// |<a|b>| for normalized a, b.
inline double fidelity(const StateVector& a, const StateVector& b) {
    return std::abs(inner_product(a, b));
}

inline DensityMatrix density_of(const StateVector& state) {
    const std::size_t n = state.size();
    std::vector<cplx> mat(n * n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            mat[r * n + c] = state[r] * std::conj(state[c]);
        }
    }
    return {n, std::move(mat)};
}

/// Reduced density matrix on `keep`, tracing out every other party.
inline DensityMatrix partial_trace(const StateVector& state, const PartySet& keep) {
    const auto& dims = state.dims();
    if (keep.empty()) {
        throw ArgumentError("partial_trace: keep-set must be non-empty");
    }
    if (keep.indices().back() >= dims.size()) {
        throw ArgumentError("partial_trace: party index out of range");
    }
    const PartySet traced = keep.complement(dims.size());

    Dims keep_dims;
    Dims trace_dims;
    for (auto p : keep.indices()) {
        keep_dims.push_back(dims[p]);
    }
    for (auto p : traced.indices()) {
        trace_dims.push_back(dims[p]);
    }
    const std::size_t dk = total_dim(keep_dims);
    const std::size_t dr = total_dim(trace_dims);

    // Regroup amplitudes into a dk x dr matrix M; then rho = M M^dagger.
    std::vector<cplx> regrouped(dk * dr);
    std::vector<std::size_t> digits(dims.size(), 0);
    for (std::size_t flat = 0; flat < state.size(); ++flat) {
        std::size_t ki = 0;
        for (auto p : keep.indices()) {
            ki = ki * dims[p] + digits[p];
        }
        std::size_t ri = 0;
        for (auto p : traced.indices()) {
            ri = ri * dims[p] + digits[p];
        }
        regrouped[ki * dr + ri] = state[flat];
        for (std::size_t p = dims.size(); p-- > 0;) {
            if (++digits[p] < dims[p]) {
                break;
            }
            digits[p] = 0;
        }
    }

    std::vector<cplx> mat(dk * dk);
    for (std::size_t r = 0; r < dk; ++r) {
        for (std::size_t c = r; c < dk; ++c) {
            cplx acc = 0.0;
            for (std::size_t k = 0; k < dr; ++k) {
                acc += regrouped[r * dr + k] * std::conj(regrouped[c * dr + k]);
            }
            mat[r * dk + c] = acc;
            mat[c * dk + r] = std::conj(acc);
        }
    }
    return {dk, std::move(mat)};
}

inline DensityMatrix single_party_marginal(const StateVector& state, std::size_t party) {
    return partial_trace(state, PartySet::single(party));
}

/// ||rho - I/dim||_max
inline double distance_to_maximally_mixed(const DensityMatrix& rho) {
    return rho.max_abs_diff(DensityMatrix::maximally_mixed(rho.dim()));
}

} // namespace qmask
