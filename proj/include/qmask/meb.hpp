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
 * Maximum entangled bases: orthonormal bases of (C^d)^{(x)n} whose every
 * single-party reduction is I/d.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "qmask/errors.hpp"
#include "qmask/gates.hpp"
#include "qmask/intmath.hpp"
#include "qmask/tensorcore.hpp"

namespace qmask {

inline constexpr double kMebTol = 1e-11;

struct MebFamily {
    std::size_t d = 0;
    std::size_t n_parties = 0;
    std::vector<StateVector> states;
    std::vector<std::size_t> labels;
};

struct MebCertificate {
    double gram_max_deviation = 0.0;     // max |<s_i|s_j> - delta_ij|
    double marginal_max_deviation = 0.0; // max over states and parties of ||rho - I/d||_max
    bool complete = false;               // count == d^n
    bool orthonormal = false;
    bool maximally_mixed = false;
    bool pass = false;
};

namespace detail {

inline std::size_t family_size(std::size_t d, std::size_t n) {
    const auto size = checked_pow(d, n);
    if (!size || *size > (std::size_t{1} << 24)) {
        throw ArgumentError("MEB family too large to materialize");
    }
    return static_cast<std::size_t>(*size);
}

/// d^{-1/2} sum_j w^{j s} |j, j+t_1, ..., j+t_{n-1}> (digits mod d).
inline StateVector ghz_state(std::size_t d, std::size_t s,
                             const std::vector<std::size_t>& offsets) {
    const std::size_t n = offsets.size() + 1;
    Dims dims(n, d);
    std::vector<cplx> amps(total_dim(dims));
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    std::vector<std::size_t> digits(n);
    for (std::size_t j = 0; j < d; ++j) {
        digits[0] = j;
        for (std::size_t q = 1; q < n; ++q) {
            digits[q] = (j + offsets[q - 1]) % d;
        }
        amps[digits_to_index(digits, dims)] = scale * root_of_unity(d, j * s);
    }
    return {std::move(dims), std::move(amps)};
}

} // namespace detail

/// |psi_k> = d^{-1/2} sum_j w^{j (k mod d)} |j>|(j + floor(k/d)) mod d>,
/// k = 0 .. d^2-1. At d = 2 these are the Bell states
/// Phi+, Phi-, Psi+, Psi- in that order.
inline MebFamily two_qudit_meb(std::size_t d) {
    if (d < 2) {
        throw ArgumentError("two_qudit_meb: d must be >= 2");
    }
    MebFamily family{d, 2, {}, {}};
    for (std::size_t k = 0; k < d * d; ++k) {
        family.states.push_back(detail::ghz_state(d, k % d, {k / d}));
        family.labels.push_back(k);
    }
    return family;
}

/// GHZ-type basis of n qudits. Label k enumerates (s, t_1, ..., t_{n-1})
/// lexicographically with s the most significant digit.
inline MebFamily ghz_basis(std::size_t d, std::size_t n_parties) {
    if (d < 2) {
        throw ArgumentError("ghz_basis: d must be >= 2");
    }
    if (n_parties < 2) {
        throw ArgumentError("ghz_basis: n_parties must be >= 2");
    }
    const std::size_t count = detail::family_size(d, n_parties);
    const std::size_t per_phase = count / d;
    MebFamily family{d, n_parties, {}, {}};
    family.states.reserve(count);
    std::vector<std::size_t> offsets(n_parties - 1);
    for (std::size_t k = 0; k < count; ++k) {
        const std::size_t s = k / per_phase;
        std::size_t rest = k % per_phase;
        for (std::size_t q = n_parties - 1; q-- > 0;) {
            offsets[q] = rest % d;
            rest /= d;
        }
        family.states.push_back(detail::ghz_state(d, s, offsets));
        family.labels.push_back(k);
    }
    return family;
}

/// The eight 3-qubit GHZ states exactly as ordered and signed in the
/// C^8 -> (C^2)^6 example: (|000>+|111>), (|001>+|110>), (|010>+|101>),
/// (|100>+|011>), then the same four with a minus sign, all over sqrt 2.
inline MebFamily example2_ghz_states() {
    const Dims dims{2, 2, 2};
    const double h = 1.0 / std::sqrt(2.0);
    // (first ket, second ket) as flat 3-bit indices
    constexpr std::size_t pairs[4][2] = {{0b000, 0b111}, {0b001, 0b110}, {0b010, 0b101},
                                         {0b100, 0b011}};
    MebFamily family{2, 3, {}, {}};
    for (std::size_t k = 0; k < 8; ++k) {
        const double sign = k < 4 ? 1.0 : -1.0;
        std::vector<cplx> amps(8);
        amps[pairs[k % 4][0]] = h;
        amps[pairs[k % 4][1]] = sign * h;
        family.states.emplace_back(dims, std::move(amps));
        family.labels.push_back(k);
    }
    return family;
}

inline MebCertificate certify_meb(const MebFamily& family) {
    MebCertificate cert;
    const Dims expected(family.n_parties, family.d);
    for (const auto& s : family.states) {
        if (s.dims() != expected) {
            throw ShapeError("certify_meb: state dims do not match family (d, n_parties)");
        }
    }
    const auto full = checked_pow(family.d, family.n_parties);
    cert.complete = full && family.states.size() == *full;

    const std::size_t count = family.states.size();
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = i; j < count; ++j) {
            const cplx g = inner_product(family.states[i], family.states[j]);
            const double target = i == j ? 1.0 : 0.0;
            cert.gram_max_deviation = std::max(cert.gram_max_deviation, std::abs(g - target));
        }
        for (std::size_t p = 0; p < family.n_parties; ++p) {
            cert.marginal_max_deviation =
                std::max(cert.marginal_max_deviation,
                         distance_to_maximally_mixed(single_party_marginal(family.states[i], p)));
        }
    }
    cert.orthonormal = cert.gram_max_deviation <= kMebTol;
    cert.maximally_mixed = cert.marginal_max_deviation <= kMebTol;
    cert.pass = cert.complete && cert.orthonormal && cert.maximally_mixed;
    return cert;
}

} // namespace qmask
