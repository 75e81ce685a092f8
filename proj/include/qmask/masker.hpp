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
 * Masking schemes: isometries |k> -> |Psi_k> from C^w into m qudits whose
 * single-party reductions do not depend on the encoded state, plus the
 * controlled-gate circuits realizing the four-party schemes.
 */

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qmask/errors.hpp"
#include "qmask/gates.hpp"
#include "qmask/intmath.hpp"
#include "qmask/meb.hpp"
#include "qmask/tensorcore.hpp"

namespace qmask {

enum class Provenance { example1, example2, theorem1, theorem2, custom };

inline std::string_view to_string(Provenance p) {
    switch (p) {
    case Provenance::example1:
        return "example1";
    case Provenance::example2:
        return "example2";
    case Provenance::theorem1:
        return "theorem1";
    case Provenance::theorem2:
        return "theorem2";
    case Provenance::custom:
        return "custom";
    }
    return "custom";
}

/// Upper limit on w * d^m stored amplitudes for a built scheme.
inline constexpr std::uint64_t kMaxSchemeEntries = std::uint64_t{1} << 22;

/// d^floor(m/2); throws ArgumentError if it does not fit in 64 bits.
inline std::uint64_t masking_capacity(std::size_t d, std::size_t m) {
    const auto cap = checked_pow(d, m / 2);
    if (!cap) {
        throw ArgumentError("masking capacity d^floor(m/2) overflows 64 bits");
    }
    return *cap;
}

class MaskingScheme {
  public:
    /// Validates shapes and the capacity bound. Orthonormality of the images
    /// is not checked here; verify_scheme() reports it.
    MaskingScheme(std::size_t w, std::size_t d, std::size_t m, std::vector<StateVector> images,
                  Provenance provenance)
        : w_(w), d_(d), m_(m), images_(std::move(images)), provenance_(provenance) {
        if (d_ < 2 || w_ < 2 || m_ < 1) {
            throw ArgumentError("MaskingScheme: need w >= 2, d >= 2, m >= 1");
        }
        if (images_.size() != w_) {
            throw ShapeError("MaskingScheme: expected " + std::to_string(w_) + " images, got " +
                             std::to_string(images_.size()));
        }
        const Dims expected(m_, d_);
        for (const auto& img : images_) {
            if (img.dims() != expected) {
                throw ShapeError("MaskingScheme: image dims do not match [d] x m");
            }
        }
        const auto cap = checked_pow(d_, m_ / 2);
        if (cap && w_ > *cap) {
            throw BoundError("w = " + std::to_string(w_) + " exceeds d^floor(m/2) = " +
                             std::to_string(*cap));
        }
    }

    std::size_t w() const { return w_; }
    std::size_t d() const { return d_; }
    std::size_t m() const { return m_; }
    const std::vector<StateVector>& images() const { return images_; }
    Provenance provenance() const { return provenance_; }

    Dims register_dims() const { return Dims(m_, d_); }

  private:
    std::size_t w_;
    std::size_t d_;
    std::size_t m_;
    std::vector<StateVector> images_;
    Provenance provenance_;
};

/// |k> -> psi_k (x) upsilon_k with psi, upsilon drawn from maximum entangled
/// bases of floor(m/2) and ceil(m/2) qudits. For m = 4 both halves use the
/// two-qudit basis |psi_k>, giving |k> -> |psi_k>|psi_k>.
inline MaskingScheme build_scheme(std::size_t w, std::size_t d, std::size_t m) {
    if (d < 2) {
        throw ArgumentError("build_scheme: d must be >= 2");
    }
    if (w < 2) {
        throw ArgumentError("build_scheme: w must be >= 2");
    }
    if (m < 4) {
        throw ArgumentError("build_scheme: only m >= 4 schemes are constructed");
    }
    const std::uint64_t cap = masking_capacity(d, m);
    if (w > cap) {
        throw BoundError("build_scheme: w = " + std::to_string(w) +
                         " exceeds the masking bound d^floor(m/2) = " + std::to_string(cap) +
                         " for d = " + std::to_string(d) + ", m = " + std::to_string(m));
    }
    const auto reg = checked_pow(d, m);
    if (!reg || *reg > kMaxSchemeEntries || *reg * w > kMaxSchemeEntries) {
        throw ArgumentError("build_scheme: w * d^m exceeds the dense storage limit");
    }
    const std::size_t lo = m / 2;
    const std::size_t hi = m - lo;
    const MebFamily left = m == 4 ? two_qudit_meb(d) : ghz_basis(d, lo);
    const MebFamily right = m == 4 ? left : ghz_basis(d, hi);

    std::vector<StateVector> images;
    images.reserve(w);
    for (std::size_t k = 0; k < w; ++k) {
        images.push_back(tensor_product(left.states[k], right.states[k]));
    }
    return {w, d, m, std::move(images), m == 4 ? Provenance::theorem1 : Provenance::theorem2};
}

/// C^4 -> (C^2)^4 with Bell-pair images.
inline MaskingScheme example1_scheme() {
    const MebFamily bell = two_qudit_meb(2);
    std::vector<StateVector> images;
    for (const auto& s : bell.states) {
        images.push_back(tensor_product(s, s));
    }
    return {4, 2, 4, std::move(images), Provenance::example1};
}

/// C^8 -> (C^2)^6 with GHZ-pair images.
inline MaskingScheme example2_scheme() {
    const MebFamily ghz = example2_ghz_states();
    std::vector<StateVector> images;
    for (const auto& s : ghz.states) {
        images.push_back(tensor_product(s, s));
    }
    return {8, 2, 6, std::move(images), Provenance::example2};
}

/// sum_k a_k |Psi_k> for input sum_k a_k |k>. Linear; does not renormalize.
inline StateVector mask(const MaskingScheme& scheme, const StateVector& input) {
    if (input.n_parties() != 1 || input.dims()[0] != scheme.w()) {
        throw ShapeError("mask: input must be a single party of dimension w = " +
                         std::to_string(scheme.w()));
    }
    std::vector<cplx> out(total_dim(scheme.register_dims()));
    for (std::size_t k = 0; k < scheme.w(); ++k) {
        const cplx a = input[k];
        if (a == cplx{}) {
            continue;
        }
        const auto img = scheme.images()[k].amps();
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] += a * img[i];
        }
    }
    return {scheme.register_dims(), std::move(out)};
}

/// Permutation of a d x d register exchanging the two digits.
inline RelabelGate digit_swap(std::size_t d) {
    std::vector<std::size_t> perm(d * d);
    for (std::size_t hi = 0; hi < d; ++hi) {
        for (std::size_t lo = 0; lo < d; ++lo) {
            perm[hi * d + lo] = lo * d + hi;
        }
    }
    return relabel_gate(std::move(perm));
}

/// sum_k a_k |k> (k < w <= d^2) -> sum_k a_k |k mod d>|floor(k/d)>|0>|0>.
inline StateVector encode_digits(const StateVector& input, std::size_t d) {
    if (d < 2) {
        throw ArgumentError("encode_digits: d must be >= 2");
    }
    if (input.n_parties() != 1 || input.dims()[0] > d * d) {
        throw ShapeError("encode_digits: input must be one party of dimension <= d^2");
    }
    std::vector<cplx> padded(d * d);
    std::copy(input.amps().begin(), input.amps().end(), padded.begin());
    // Plain reshape puts floor(k/d) on party 0; swap to the k mod d first order.
    const StateVector two_digit = apply_gate(digit_swap(d), StateVector(Dims{d, d}, std::move(padded)));
    return append_ancilla(two_digit, d, 2);
}

/// The qubit masking circuit split into its four steps:
///   1. C-NOT 0 -> 2
///   2. C-NOT 1 -> 3
///   3. Hadamard on 0, C-NOT 0 -> 1
///   4. Hadamard on 2, C-NOT 2 -> 3
inline std::vector<Circuit> qubit4_steps() {
    const Dims dims(4, 2);
    return {
        Circuit(dims, {controlled_power_gate(2, 0, 2)}),
        Circuit(dims, {controlled_power_gate(2, 1, 3)}),
        Circuit(dims, {fourier_gate(2, 0), controlled_power_gate(2, 0, 1)}),
        Circuit(dims, {fourier_gate(2, 2), controlled_power_gate(2, 2, 3)}),
    };
}

inline Circuit qubit4_circuit() {
    Circuit circuit(Dims(4, 2));
    for (const auto& step : qubit4_steps()) {
        circuit.extend(step);
    }
    return circuit;
}

/// The qudit masking circuit split into its steps:
///   1. controlled shift power 0 -> 2
///   2. controlled shift power 1 -> 3
///   3. Fourier on 0 and 2
///   4. controlled shift powers 0 -> 1 and 2 -> 3
inline std::vector<Circuit> qudit4_steps(std::size_t d) {
    if (d < 2) {
        throw ArgumentError("qudit4_steps: d must be >= 2");
    }
    const Dims dims(4, d);
    return {
        Circuit(dims, {controlled_power_gate(d, 0, 2)}),
        Circuit(dims, {controlled_power_gate(d, 1, 3)}),
        Circuit(dims, {fourier_gate(d, 0), fourier_gate(d, 2)}),
        Circuit(dims, {controlled_power_gate(d, 0, 1), controlled_power_gate(d, 2, 3)}),
    };
}

inline Circuit qudit4_circuit(std::size_t d) {
    Circuit circuit(Dims(4, d));
    for (const auto& step : qudit4_steps(d)) {
        circuit.extend(step);
    }
    return circuit;
}

/// Circuit route for an input of dimension w <= d^2: digit-encode, then run
/// qudit4_circuit(d).
inline StateVector circuit_mask(const StateVector& input, std::size_t d) {
    return apply(qudit4_circuit(d), encode_digits(input, d));
}

/// 2 * ceil(log_d w), computed in integers.
inline std::size_t min_parties(std::size_t w, std::size_t d) {
    if (w < 2 || d < 2) {
        throw ArgumentError("min_parties: need w >= 2 and d >= 2");
    }
    return static_cast<std::size_t>(2 * ceil_log(w, d));
}

} // namespace qmask
