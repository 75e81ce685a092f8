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
 * Certification of masking schemes, per-party leakage of intermediate
 * states, and dimension-bound arithmetic.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "qmask/errors.hpp"
#include "qmask/intmath.hpp"
#include "qmask/masker.hpp"
#include "qmask/tensorcore.hpp"

namespace qmask {

inline constexpr double kMarginalThreshold = 1e-10;
inline constexpr double kGramThreshold = 1e-11;

// ---------------------------------------------------------------------------
// Random inputs
//
// Counter-based: the u-th uniform of a run with seed s is
// splitmix64_mix(s + (u + 1) * 0x9E3779B97F4A7C15) scaled to 53 bits.
// Amplitude k of sample i uses uniforms 2(i*w + k) and 2(i*w + k) + 1,
// turned into a complex standard normal by Box-Muller; the vector is then
// normalized. Any sample can be regenerated without drawing the others.
// ---------------------------------------------------------------------------

inline std::uint64_t splitmix64_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline double counter_uniform(std::uint64_t seed, std::uint64_t counter) {
    const std::uint64_t bits = splitmix64_mix(seed + (counter + 1) * 0x9E3779B97F4A7C15ULL);
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Haar-random pure state on a register, sample `index` of stream `seed`.
inline StateVector random_state(const Dims& dims, std::uint64_t seed, std::uint64_t index) {
    const std::size_t n = total_dim(dims);
    std::vector<cplx> amps(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::uint64_t u = 2 * (index * n + k);
        const double u1 = 1.0 - counter_uniform(seed, u); // (0, 1]
        const double u2 = counter_uniform(seed, u + 1);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * std::numbers::pi * u2;
        amps[k] = {r * std::cos(phi), r * std::sin(phi)};
    }
    return StateVector(dims, std::move(amps)).normalized();
}

// ---------------------------------------------------------------------------
// Scheme certification
// ---------------------------------------------------------------------------

struct MaskingVerdict {
    bool isometry = false;        // Gram of images is I_w
    bool input_independent = false; // every party's marginal is the same for all inputs
    bool maximally_mixed = false; // every marginal is I/d
    bool pass = false;            // all of the above
};

struct MaskingReport {
    std::size_t w = 0;
    std::size_t d = 0;
    std::size_t m = 0;
    Provenance provenance = Provenance::custom;
    std::size_t n_samples = 0;
    std::uint64_t seed = 0;
    std::size_t n_inputs = 0; // w basis inputs + n_samples random inputs
    std::vector<double> per_party_max_deviation;
    std::vector<double> cross_input_max_variation;
    double isometry_gram_deviation = 0.0;
    double marginal_threshold = kMarginalThreshold;
    double gram_threshold = kGramThreshold;
    MaskingVerdict verdict;
};

inline double gram_deviation(const std::vector<StateVector>& states) {
    double dev = 0.0;
    for (std::size_t i = 0; i < states.size(); ++i) {
        for (std::size_t j = i; j < states.size(); ++j) {
            const double target = i == j ? 1.0 : 0.0;
            dev = std::max(dev, std::abs(inner_product(states[i], states[j]) - target));
        }
    }
    return dev;
}

/// Masks every basis input and n_samples random inputs, and compares every
/// single-party marginal against I/d and against the marginal of input |0>.
inline MaskingReport verify_scheme(const MaskingScheme& scheme, std::size_t n_samples,
                                   std::uint64_t seed) {
    if (n_samples < 2) {
        throw ArgumentError("verify_scheme: n_samples must be >= 2");
    }
    MaskingReport report;
    report.w = scheme.w();
    report.d = scheme.d();
    report.m = scheme.m();
    report.provenance = scheme.provenance();
    report.n_samples = n_samples;
    report.seed = seed;
    report.per_party_max_deviation.assign(scheme.m(), 0.0);
    report.cross_input_max_variation.assign(scheme.m(), 0.0);
    report.isometry_gram_deviation = gram_deviation(scheme.images());

    const Dims input_dims{scheme.w()};
    std::vector<DensityMatrix> reference;
    auto examine = [&](const StateVector& input) {
        // Marginals of the physical (normalized) output; a non-isometric
        // scheme does not preserve the norm.
        const StateVector raw = mask(scheme, input);
        const StateVector out = raw.norm_squared() > 0.0 ? raw.normalized() : raw;
        for (std::size_t p = 0; p < scheme.m(); ++p) {
            const DensityMatrix rho = single_party_marginal(out, p);
            report.per_party_max_deviation[p] =
                std::max(report.per_party_max_deviation[p], distance_to_maximally_mixed(rho));
            if (reference.size() < scheme.m()) {
                reference.push_back(rho);
            } else {
                report.cross_input_max_variation[p] = std::max(
                    report.cross_input_max_variation[p], rho.max_abs_diff(reference[p]));
            }
        }
        ++report.n_inputs;
    };
    for (std::size_t k = 0; k < scheme.w(); ++k) {
        examine(StateVector::basis_index(input_dims, k));
    }
    for (std::size_t i = 0; i < n_samples; ++i) {
        examine(random_state(input_dims, seed, i));
    }

    auto all_within = [](const std::vector<double>& v, double tol) {
        return std::all_of(v.begin(), v.end(), [tol](double x) { return x <= tol; });
    };
    report.verdict.isometry = report.isometry_gram_deviation <= report.gram_threshold;
    report.verdict.maximally_mixed =
        all_within(report.per_party_max_deviation, report.marginal_threshold);
    report.verdict.input_independent =
        all_within(report.cross_input_max_variation, report.marginal_threshold);
    report.verdict.pass = report.verdict.isometry && report.verdict.maximally_mixed &&
                          report.verdict.input_independent;
    return report;
}

// ---------------------------------------------------------------------------
// Leakage of a single state
// ---------------------------------------------------------------------------

struct PartyLeakage {
    std::size_t party = 0;
    DensityMatrix marginal{1, {cplx{1.0}}};
    double off_diagonal_leak = 0.0; // max |rho_ij|, i != j
    double diagonal_leak = 0.0;     // max |rho_ii - 1/d|
    bool masked = false;
};

struct LeakageProfile {
    std::vector<PartyLeakage> parties;

    bool all_masked() const {
        return std::all_of(parties.begin(), parties.end(),
                           [](const PartyLeakage& p) { return p.masked; });
    }
};

inline LeakageProfile leakage_profile(const StateVector& state,
                                      double tol = kMarginalThreshold) {
    LeakageProfile profile;
    for (std::size_t p = 0; p < state.n_parties(); ++p) {
        PartyLeakage leak{p, single_party_marginal(state, p), 0.0, 0.0, false};
        const std::size_t dim = leak.marginal.dim();
        const double flat = 1.0 / static_cast<double>(dim);
        for (std::size_t r = 0; r < dim; ++r) {
            for (std::size_t c = 0; c < dim; ++c) {
                const cplx z = leak.marginal(r, c);
                if (r == c) {
                    leak.diagonal_leak = std::max(leak.diagonal_leak, std::abs(z - flat));
                } else {
                    leak.off_diagonal_leak = std::max(leak.off_diagonal_leak, std::abs(z));
                }
            }
        }
        leak.masked = leak.off_diagonal_leak <= tol && leak.diagonal_leak <= tol;
        profile.parties.push_back(std::move(leak));
    }
    return profile;
}

// ---------------------------------------------------------------------------
// Bounds
// ---------------------------------------------------------------------------

struct MinPartiesRow {
    std::size_t w = 0;
    std::size_t min_parties = 0;
    bool needs_four_parties = false; // min_parties < 4: no construction below m = 4
    bool fits_register = false;      // w <= d^floor(m/2) for the report's m
};

struct BoundsReport {
    std::size_t d = 0;
    std::size_t m = 0;
    std::uint64_t masking_bound = 0;   // d^floor(m/2)
    std::uint64_t singleton_bound = 0; // d^(m-2)
    bool tighter = false;              // masking_bound <= singleton_bound
    std::vector<MinPartiesRow> min_parties_table;
};

inline BoundsReport bounds_report(std::size_t d, std::size_t m,
                                  const std::vector<std::size_t>& w_list = {}) {
    if (d < 2) {
        throw ArgumentError("bounds_report: d must be >= 2");
    }
    if (m < 4) {
        throw ArgumentError("bounds_report: m must be >= 4");
    }
    const auto masking = checked_pow(d, m / 2);
    const auto singleton = checked_pow(d, m - 2);
    if (!masking || !singleton) {
        throw ArgumentError("bounds_report: d^(m-2) overflows 64 bits");
    }
    BoundsReport report{d, m, *masking, *singleton, *masking <= *singleton, {}};
    for (auto w : w_list) {
        const std::size_t mp = min_parties(w, d);
        report.min_parties_table.push_back({w, mp, mp < 4, w <= *masking});
    }
    return report;
}

} // namespace qmask
