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
 * JSON documents for states, bases, schemes, reports and bounds.
 *
 * Complex numbers are [re, im] pairs. Keys are emitted in a fixed order and
 * negative zero is written as 0, so identical inputs serialize to identical
 * bytes.
 */

#pragma once

#include <string>

#include "json.hpp"
#include "qmask/masker.hpp"
#include "qmask/meb.hpp"
#include "qmask/tensorcore.hpp"
#include "qmask/verify.hpp"

namespace qmask::json {

using Json = nlohmann::ordered_json;

inline double canonical(double x) { return x == 0.0 ? 0.0 : x; }

inline Json complex_pair(const cplx& z) {
    return Json::array({canonical(z.real()), canonical(z.imag())});
}

inline Json amplitudes(const StateVector& state) {
    Json arr = Json::array();
    for (const auto& a : state.amps()) {
        arr.push_back(complex_pair(a));
    }
    return arr;
}

inline Json state(const StateVector& s) {
    Json j;
    j["dims"] = s.dims();
    j["amps"] = amplitudes(s);
    return j;
}

/// Row-major nested array of [re, im] pairs.
inline Json matrix(const DensityMatrix& rho) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < rho.dim(); ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < rho.dim(); ++c) {
            row.push_back(complex_pair(rho(r, c)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Json meb(const MebFamily& family) {
    Json j;
    j["d"] = family.d;
    j["n_parties"] = family.n_parties;
    j["labels"] = family.labels;
    Json states = Json::array();
    for (const auto& s : family.states) {
        states.push_back(amplitudes(s));
    }
    j["states"] = std::move(states);
    return j;
}

inline Json certificate(const MebCertificate& cert) {
    Json j;
    j["gram_max_deviation"] = canonical(cert.gram_max_deviation);
    j["marginal_max_deviation"] = canonical(cert.marginal_max_deviation);
    j["complete"] = cert.complete;
    j["orthonormal"] = cert.orthonormal;
    j["maximally_mixed"] = cert.maximally_mixed;
    j["pass"] = cert.pass;
    return j;
}

inline Json scheme(const MaskingScheme& s) {
    Json j;
    j["w"] = s.w();
    j["d"] = s.d();
    j["m"] = s.m();
    j["provenance"] = std::string(to_string(s.provenance()));
    Json images = Json::array();
    for (const auto& img : s.images()) {
        images.push_back(amplitudes(img));
    }
    j["images"] = std::move(images);
    return j;
}

inline Json doubles(const std::vector<double>& values) {
    Json arr = Json::array();
    for (auto v : values) {
        arr.push_back(canonical(v));
    }
    return arr;
}

inline Json report(const MaskingReport& r) {
    Json j;
    j["w"] = r.w;
    j["d"] = r.d;
    j["m"] = r.m;
    j["provenance"] = std::string(to_string(r.provenance));
    j["n_samples"] = r.n_samples;
    j["seed"] = r.seed;
    j["n_inputs"] = r.n_inputs;
    j["per_party_max_deviation"] = doubles(r.per_party_max_deviation);
    j["cross_input_max_variation"] = doubles(r.cross_input_max_variation);
    j["isometry_gram_deviation"] = canonical(r.isometry_gram_deviation);
    Json thresholds;
    thresholds["marginal"] = r.marginal_threshold;
    thresholds["gram"] = r.gram_threshold;
    j["thresholds"] = std::move(thresholds);
    Json verdict;
    verdict["isometry"] = r.verdict.isometry;
    verdict["input_independent"] = r.verdict.input_independent;
    verdict["maximally_mixed"] = r.verdict.maximally_mixed;
    verdict["pass"] = r.verdict.pass;
    j["verdict"] = std::move(verdict);
    return j;
}

inline Json leakage(const LeakageProfile& profile) {
    Json arr = Json::array();
    for (const auto& p : profile.parties) {
        Json j;
        j["party"] = p.party;
        j["marginal"] = matrix(p.marginal);
        j["off_diagonal_leak"] = canonical(p.off_diagonal_leak);
        j["diagonal_leak"] = canonical(p.diagonal_leak);
        j["masked"] = p.masked;
        arr.push_back(std::move(j));
    }
    return arr;
}

inline Json bounds(const BoundsReport& b) {
    Json j;
    j["d"] = b.d;
    j["m"] = b.m;
    j["masking_bound"] = b.masking_bound;
    j["singleton_bound"] = b.singleton_bound;
    j["tighter"] = b.tighter;
    Json table = Json::array();
    for (const auto& row : b.min_parties_table) {
        Json r;
        r["w"] = row.w;
        r["min_parties"] = row.min_parties;
        r["needs_four_parties"] = row.needs_four_parties;
        r["fits_register"] = row.fits_register;
        table.push_back(std::move(r));
    }
    j["min_parties_table"] = std::move(table);
    return j;
}

} // namespace qmask::json
