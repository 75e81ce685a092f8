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
 * Qudit gates (cyclic shift, discrete Fourier, controlled shift powers,
 * basis relabeling), circuits, and their line-oriented text format.
 *
 * Gates are applied by index arithmetic on the amplitude array; dense
 * matrices are only built on request via gate_matrix().
 */

#pragma once

#include <charconv>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "qmask/errors.hpp"
#include "qmask/tensorcore.hpp"

namespace qmask {

/// U^power with U|j> = |(j+1) mod d>.
struct ShiftGate {
    std::size_t d;
    std::size_t power; // reduced mod d
    std::size_t party;
    bool operator==(const ShiftGate&) const = default;
};

/// F|j> = d^{-1/2} sum_l w^{jl} |l>, w = exp(2 pi i / d).
struct FourierGate {
    std::size_t d;
    std::size_t party;
    bool operator==(const FourierGate&) const = default;
};

/// |j>_c |t>_t -> |j>_c |(t + j) mod d>_t.
struct ControlledPowerGate {
    std::size_t d;
    std::size_t control;
    std::size_t target;
    bool operator==(const ControlledPowerGate&) const = default;
};

/// Whole-register basis permutation |i> -> |perm[i]>.
struct RelabelGate {
    std::vector<std::size_t> permutation;
    bool operator==(const RelabelGate&) const = default;
};

using Gate = std::variant<ShiftGate, FourierGate, ControlledPowerGate, RelabelGate>;

inline ShiftGate shift_gate(std::size_t d, long long power, std::size_t party = 0) {
    if (d < 2) {
        throw ArgumentError("shift_gate: d must be >= 2");
    }
    const auto sd = static_cast<long long>(d);
    const long long reduced = ((power % sd) + sd) % sd;
    return {d, static_cast<std::size_t>(reduced), party};
}

inline FourierGate fourier_gate(std::size_t d, std::size_t party = 0) {
    if (d < 2) {
        throw ArgumentError("fourier_gate: d must be >= 2");
    }
    return {d, party};
}

inline ControlledPowerGate controlled_power_gate(std::size_t d, std::size_t control,
                                                 std::size_t target) {
    if (d < 2) {
        throw ArgumentError("controlled_power_gate: d must be >= 2");
    }
    if (control == target) {
        throw ArgumentError("controlled_power_gate: control and target must differ");
    }
    return {d, control, target};
}

inline RelabelGate relabel_gate(std::vector<std::size_t> permutation) {
    std::vector<bool> seen(permutation.size(), false);
    for (auto v : permutation) {
        if (v >= permutation.size() || seen[v]) {
            throw ArgumentError("relabel_gate: not a permutation");
        }
        seen[v] = true;
    }
    return {std::move(permutation)};
}

/// Parties the gate touches, in (control, target) order for two-party gates.
/// Relabel acts on the whole register and reports no specific parties.
inline std::vector<std::size_t> gate_parties(const Gate& gate) {
    return std::visit(
        [](const auto& g) -> std::vector<std::size_t> {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, ShiftGate> || std::is_same_v<T, FourierGate>) {
                return {g.party};
            } else if constexpr (std::is_same_v<T, ControlledPowerGate>) {
                return {g.control, g.target};
            } else {
                return {};
            }
        },
        gate);
}

namespace detail {

inline cplx root_of_unity(std::size_t d, std::size_t power) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(power % d) /
                         static_cast<double>(d);
    return std::polar(1.0, angle);
}

inline void check_party(const Dims& dims, std::size_t party, std::size_t d,
                        const char* what) {
    if (party >= dims.size()) {
        throw ShapeError(std::string(what) + ": party " + std::to_string(party) +
                         " out of range");
    }
    if (dims[party] != d) {
        throw ShapeError(std::string(what) + ": party " + std::to_string(party) +
                         " has dimension " + std::to_string(dims[party]) + ", gate expects " +
                         std::to_string(d));
    }
}

} // namespace detail

/// Throws ShapeError if the gate does not fit a register with these dims.
inline void check_gate(const Gate& gate, const Dims& dims) {
    std::visit(
        [&](const auto& g) {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, ShiftGate>) {
                detail::check_party(dims, g.party, g.d, "shift gate");
            } else if constexpr (std::is_same_v<T, FourierGate>) {
                detail::check_party(dims, g.party, g.d, "fourier gate");
            } else if constexpr (std::is_same_v<T, ControlledPowerGate>) {
                detail::check_party(dims, g.control, g.d, "controlled-power gate");
                detail::check_party(dims, g.target, g.d, "controlled-power gate");
            } else {
                if (g.permutation.size() != total_dim(dims)) {
                    throw ShapeError("relabel gate: permutation size does not match register");
                }
            }
        },
        gate);
}

/// Dense matrix of the gate on the parties it touches (row-major), or on the
/// whole register for Relabel. Column j is the image of basis state j.
inline std::vector<cplx> gate_matrix(const Gate& gate) {
    return std::visit(
        [](const auto& g) -> std::vector<cplx> {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, ShiftGate>) {
                std::vector<cplx> m(g.d * g.d);
                for (std::size_t j = 0; j < g.d; ++j) {
                    m[((j + g.power) % g.d) * g.d + j] = 1.0;
                }
                return m;
            } else if constexpr (std::is_same_v<T, FourierGate>) {
                std::vector<cplx> m(g.d * g.d);
                const double scale = 1.0 / std::sqrt(static_cast<double>(g.d));
                for (std::size_t l = 0; l < g.d; ++l) {
                    for (std::size_t j = 0; j < g.d; ++j) {
                        m[l * g.d + j] = scale * detail::root_of_unity(g.d, j * l);
                    }
                }
                return m;
            } else if constexpr (std::is_same_v<T, ControlledPowerGate>) {
                const std::size_t n = g.d * g.d;
                std::vector<cplx> m(n * n);
                for (std::size_t c = 0; c < g.d; ++c) {
                    for (std::size_t t = 0; t < g.d; ++t) {
                        m[(c * g.d + (t + c) % g.d) * n + (c * g.d + t)] = 1.0;
                    }
                }
                return m;
            } else {
                const std::size_t n = g.permutation.size();
                std::vector<cplx> m(n * n);
                for (std::size_t i = 0; i < n; ++i) {
                    m[g.permutation[i] * n + i] = 1.0;
                }
                return m;
            }
        },
        gate);
}

/// Applies one gate by index arithmetic.
inline StateVector apply_gate(const Gate& gate, const StateVector& state) {
    const Dims& dims = state.dims();
    check_gate(gate, dims);
    const auto in = state.amps();
    std::vector<cplx> out(in.size());

    std::visit(
        [&](const auto& g) {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, ShiftGate>) {
                const std::size_t stride = party_stride(dims, g.party);
                for (std::size_t i = 0; i < in.size(); ++i) {
                    const std::size_t j = (i / stride) % g.d;
                    const std::size_t moved = (j + g.power) % g.d;
                    out[i - j * stride + moved * stride] = in[i];
                }
            } else if constexpr (std::is_same_v<T, FourierGate>) {
                const std::size_t stride = party_stride(dims, g.party);
                const double scale = 1.0 / std::sqrt(static_cast<double>(g.d));
                std::vector<cplx> roots(g.d);
                for (std::size_t k = 0; k < g.d; ++k) {
                    roots[k] = detail::root_of_unity(g.d, k);
                }
                for (std::size_t i = 0; i < in.size(); ++i) {
                    if ((i / stride) % g.d != 0) {
                        continue;
                    }
                    // i is the j=0 element of a fiber along the party.
                    for (std::size_t l = 0; l < g.d; ++l) {
                        cplx acc = 0.0;
                        for (std::size_t j = 0; j < g.d; ++j) {
                            acc += roots[(j * l) % g.d] * in[i + j * stride];
                        }
                        out[i + l * stride] = scale * acc;
                    }
                }
            } else if constexpr (std::is_same_v<T, ControlledPowerGate>) {
                const std::size_t cs = party_stride(dims, g.control);
                const std::size_t ts = party_stride(dims, g.target);
                for (std::size_t i = 0; i < in.size(); ++i) {
                    const std::size_t c = (i / cs) % g.d;
                    const std::size_t t = (i / ts) % g.d;
                    const std::size_t moved = (t + c) % g.d;
                    out[i - t * ts + moved * ts] = in[i];
                }
            } else {
                for (std::size_t i = 0; i < in.size(); ++i) {
                    out[g.permutation[i]] = in[i];
                }
            }
        },
        gate);
    return {dims, std::move(out)};
}

class Circuit {
  public:
    explicit Circuit(Dims dims, std::vector<Gate> gates = {}) : dims_(std::move(dims)) {
        for (auto d : dims_) {
            if (d < 2) {
                throw ShapeError("Circuit: every party dimension must be >= 2");
            }
        }
        for (auto& g : gates) {
            append(std::move(g));
        }
    }

    void append(Gate gate) {
        check_gate(gate, dims_);
        gates_.push_back(std::move(gate));
    }

    /// Appends every gate of `other`; registers must match.
    void extend(const Circuit& other) {
        if (other.dims_ != dims_) {
            throw ShapeError("Circuit::extend: register mismatch");
        }
        gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
    }

    const Dims& dims() const { return dims_; }
    const std::vector<Gate>& gates() const { return gates_; }
    std::size_t size() const { return gates_.size(); }
    bool empty() const { return gates_.empty(); }

    bool operator==(const Circuit&) const = default;

  private:
    Dims dims_;
    std::vector<Gate> gates_;
};

/// Runs the circuit's gates in order.
inline StateVector apply(const Circuit& circuit, const StateVector& input) {
    if (input.dims() != circuit.dims()) {
        throw ShapeError("apply: input dims do not match circuit register");
    }
    StateVector state = input;
    for (const auto& g : circuit.gates()) {
        state = apply_gate(g, state);
    }
    return state;
}

/// state (x) |0>^count with count ancillas of dimension d.
inline StateVector append_ancilla(const StateVector& state, std::size_t d, std::size_t count) {
    if (d < 2) {
        throw ArgumentError("append_ancilla: d must be >= 2");
    }
    if (count < 1) {
        throw ArgumentError("append_ancilla: count must be >= 1");
    }
    Dims anc_dims(count, d);
    return tensor_product(state, StateVector::basis(anc_dims, std::vector<std::size_t>(count, 0)));
}

// ---------------------------------------------------------------------------
// Text format
//
//   REGISTER dims=3,3,3,3
//   X^k d=3 p=2 k=1
//   F d=3 p=0
//   CPOW d=3 c=1 t=3
//   PERM perm=0,3,6,1,...
//
// One gate per line, parties 0-based. Blank lines and lines starting with
// '#' are ignored. The REGISTER line must precede all gates.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string join_indices(const std::vector<std::size_t>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i != 0) {
            out += ',';
        }
        out += std::to_string(values[i]);
    }
    return out;
}

inline std::size_t parse_size(std::string_view text, std::size_t line_no) {
    std::size_t value = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty()) {
        throw FormatError("circuit line " + std::to_string(line_no) +
                          ": expected a non-negative integer, got '" + std::string(text) + "'");
    }
    return value;
}

inline std::vector<std::size_t> parse_index_list(std::string_view text, std::size_t line_no) {
    std::vector<std::size_t> values;
    while (true) {
        const auto comma = text.find(',');
        values.push_back(parse_size(text.substr(0, comma), line_no));
        if (comma == std::string_view::npos) {
            break;
        }
        text.remove_prefix(comma + 1);
    }
    return values;
}

struct GateLine {
    std::string op;
    std::vector<std::pair<std::string, std::string>> fields;

    std::string_view field(std::string_view key, std::size_t line_no) const {
        for (const auto& [k, v] : fields) {
            if (k == key) {
                return v;
            }
        }
        throw FormatError("circuit line " + std::to_string(line_no) + ": " + op +
                          " is missing field '" + std::string(key) + "'");
    }
};

inline GateLine split_line(const std::string& line, std::size_t line_no) {
    std::istringstream tokens(line);
    GateLine parsed;
    tokens >> parsed.op;
    std::string token;
    while (tokens >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw FormatError("circuit line " + std::to_string(line_no) +
                              ": expected key=value, got '" + token + "'");
        }
        parsed.fields.emplace_back(token.substr(0, eq), token.substr(eq + 1));
    }
    return parsed;
}

} // namespace detail

inline std::string gate_to_text(const Gate& gate) {
    return std::visit(
        [](const auto& g) -> std::string {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, ShiftGate>) {
                return "X^k d=" + std::to_string(g.d) + " p=" + std::to_string(g.party) +
                       " k=" + std::to_string(g.power);
            } else if constexpr (std::is_same_v<T, FourierGate>) {
                return "F d=" + std::to_string(g.d) + " p=" + std::to_string(g.party);
            } else if constexpr (std::is_same_v<T, ControlledPowerGate>) {
                return "CPOW d=" + std::to_string(g.d) + " c=" + std::to_string(g.control) +
                       " t=" + std::to_string(g.target);
            } else {
                return "PERM perm=" + detail::join_indices(g.permutation);
            }
        },
        gate);
}

inline std::string circuit_to_text(const Circuit& circuit) {
    std::string out = "REGISTER dims=" + detail::join_indices(circuit.dims()) + "\n";
    for (const auto& g : circuit.gates()) {
        out += gate_to_text(g);
        out += '\n';
    }
    return out;
}

inline Circuit circuit_from_text(std::string_view text) {
    std::istringstream lines{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    std::optional<Circuit> circuit;
    while (std::getline(lines, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        const auto parsed = detail::split_line(line, line_no);
        auto num = [&](std::string_view key) {
            return detail::parse_size(parsed.field(key, line_no), line_no);
        };
        if (parsed.op == "REGISTER") {
            if (circuit) {
                throw FormatError("circuit line " + std::to_string(line_no) +
                                  ": duplicate REGISTER line");
            }
            circuit.emplace(detail::parse_index_list(parsed.field("dims", line_no), line_no));
            continue;
        }
        if (!circuit) {
            throw FormatError("circuit line " + std::to_string(line_no) +
                              ": gate before REGISTER line");
        }
        try {
            if (parsed.op == "X^k") {
                circuit->append(shift_gate(num("d"), static_cast<long long>(num("k")), num("p")));
            } else if (parsed.op == "F") {
                circuit->append(fourier_gate(num("d"), num("p")));
            } else if (parsed.op == "CPOW") {
                circuit->append(controlled_power_gate(num("d"), num("c"), num("t")));
            } else if (parsed.op == "PERM") {
                circuit->append(
                    relabel_gate(detail::parse_index_list(parsed.field("perm", line_no), line_no)));
            } else {
                throw FormatError("circuit line " + std::to_string(line_no) +
                                  ": unknown gate '" + parsed.op + "'");
            }
        } catch (const std::invalid_argument& e) {
            throw FormatError("circuit line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!circuit) {
        throw FormatError("circuit text has no REGISTER line");
    }
    return *std::move(circuit);
}

} // namespace qmask
