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

// Acceptance suite: one line per criterion, nonzero exit if any fails.
//
// Usage: acceptance [path-to-qmask-binary]
// With a binary path, the determinism criterion also runs the CLI twice as
// separate processes and compares the bytes of their output.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qmask/cli.hpp"
#include "qmask/qmask.hpp"
#include "qmask/serialize.hpp"

namespace {

using namespace qmask;

constexpr double kImageTol = 1e-12;
constexpr double kMarginalTol = 1e-10;
constexpr double kStepTol = 1e-12;
constexpr double kFidelityTol = 1e-10;
constexpr double kMebTolerance = 1e-11;
constexpr double kOracleTraceTol = 1e-13;
constexpr double kGateTol = 1e-12;
constexpr double kIsometryTol = 1e-11;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) {
            detail = what;
        }
        pass = pass && ok;
    }
};

std::string sci(double x) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << x;
    return os.str();
}

double max_marginal_deviation(const StateVector& s) {
    double dev = 0.0;
    for (std::size_t p = 0; p < s.n_parties(); ++p) {
        dev = std::max(dev, distance_to_maximally_mixed(single_party_marginal(s, p)));
    }
    return dev;
}

// |0> -> (|00>+|11>)^2/2, |1> -> (|00>-|11>)^2/2, |2> -> (|01>+|10>)^2/2,
// |3> -> (|01>-|10>)^2/2, expanded into 4-qubit kets.
std::vector<cplx> bell_pair_image(std::size_t k) {
    std::vector<cplx> v(16);
    auto set = [&](int bits, double x) { v[static_cast<std::size_t>(bits)] = x; };
    switch (k) {
    case 0:
        set(0b0000, 0.5), set(0b0011, 0.5), set(0b1100, 0.5), set(0b1111, 0.5);
        break;
    case 1:
        set(0b0000, 0.5), set(0b0011, -0.5), set(0b1100, -0.5), set(0b1111, 0.5);
        break;
    case 2:
        set(0b0101, 0.5), set(0b0110, 0.5), set(0b1001, 0.5), set(0b1010, 0.5);
        break;
    default:
        set(0b0101, 0.5), set(0b0110, -0.5), set(0b1001, -0.5), set(0b1010, 0.5);
        break;
    }
    return v;
}

Outcome criterion1() {
    Outcome o;
    const auto scheme = build_scheme(4, 2, 4);
    double image_err = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        image_err = std::max(image_err,
                             oracle::max_abs_diff(scheme.images()[k].amps(), bell_pair_image(k)));
    }
    o.require(image_err <= kImageTol, "image error " + sci(image_err));
    double dev = 0.0;
    for (std::uint64_t i = 0; i < 100; ++i) {
        dev = std::max(dev, max_marginal_deviation(mask(scheme, random_state({4}, 1, i))));
    }
    o.require(dev <= kMarginalTol, "marginal deviation " + sci(dev));
    if (o.pass) {
        o.detail = "image err " + sci(image_err) + ", marginal dev " + sci(dev);
    }
    return o;
}

Outcome criterion2() {
    Outcome o;
    const std::vector<oracle::Amps> inputs = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0.5, 0.5, 0.5, 0.5}};
    const auto steps = qubit4_steps();
    double worst = 0.0;
    for (const auto& a : inputs) {
        StateVector state = encode_digits(StateVector({4}, a), 2);
        auto diag_leak = [&](double p0) { return std::abs(p0 - 0.5); };
        for (int step = 1; step <= 4; ++step) {
            state = apply(steps[static_cast<std::size_t>(step - 1)], state);
            const double err =
                oracle::max_abs_diff(state.amps(), oracle::qubit_after_step(step, a));
            worst = std::max(worst, err);
            o.require(err <= kStepTol, "step " + std::to_string(step) + " state error " + sci(err));

            const auto lp = leakage_profile(state);
            const auto& P = lp.parties;
            const double a0 = std::norm(a[0]), a1 = std::norm(a[1]);
            const double a2 = std::norm(a[2]);
            const double coh1 = std::abs(a[0] * std::conj(a[2]) + a[1] * std::conj(a[3]));
            switch (step) {
            case 1:
                o.require(P[0].off_diagonal_leak <= kMarginalTol &&
                              P[2].off_diagonal_leak <= kMarginalTol,
                          "step 1: parties 0,2 off-diagonal not masked");
                o.require(std::abs(P[1].off_diagonal_leak - coh1) <= kStepTol,
                          "step 1: party 1 coherence leak mismatch");
                break;
            case 2:
                for (const auto& p : P) {
                    o.require(p.off_diagonal_leak <= kMarginalTol,
                              "step 2: off-diagonal leak on party " + std::to_string(p.party));
                }
                break;
            case 3:
                o.require(P[0].masked && P[1].masked, "step 3: parties 0,1 not masked");
                o.require(std::abs(P[2].diagonal_leak - diag_leak(a0 + a2)) <= kStepTol &&
                              std::abs(P[3].diagonal_leak - diag_leak(a0 + a1)) <= kStepTol,
                          "step 3: diagonal leak on parties 2,3 mismatch");
                o.require(P[2].off_diagonal_leak <= kMarginalTol &&
                              P[3].off_diagonal_leak <= kMarginalTol,
                          "step 3: parties 2,3 coherence leak");
                break;
            default:
                o.require(lp.all_masked(), "step 4: not all parties masked");
                break;
            }
        }
    }
    // (1,0,0,0) and (0,1,0,0) must show the step-3 diagonal leak; the
    // symmetric input (1/2,...) shows the step-1 coherence leak of 1/2.
    {
        StateVector s = encode_digits(StateVector({4}, {1, 0, 0, 0}), 2);
        for (int i = 0; i < 3; ++i) s = apply(steps[static_cast<std::size_t>(i)], s);
        const auto lp = leakage_profile(s);
        o.require(!lp.parties[2].masked && !lp.parties[3].masked,
                  "step 3: parties 2,3 should leak on |0>");
    }
    {
        const StateVector s = apply(steps[0], encode_digits(StateVector({4}, {0.5, 0.5, 0.5, 0.5}), 2));
        o.require(std::abs(leakage_profile(s).parties[1].off_diagonal_leak - 0.5) <= kStepTol,
                  "step 1: party 1 should leak 1/2 on the symmetric input");
    }
    if (o.pass) {
        o.detail = "max step-state err " + sci(worst);
    }
    return o;
}

Outcome criterion3() {
    Outcome o;
    const auto scheme = build_scheme(8, 2, 6);
    double dev = 0.0;
    for (std::uint64_t i = 0; i < 100; ++i) {
        dev = std::max(dev, max_marginal_deviation(mask(scheme, random_state({8}, 3, i))));
    }
    o.require(dev <= kMarginalTol, "marginal deviation " + sci(dev));
    o.detail = "max marginal dev " + sci(dev) + " over 6 parties";
    return o;
}

Outcome criterion4() {
    Outcome o;
    double worst_fid = 0.0;
    double worst_dev = 0.0;
    for (std::size_t d = 2; d <= 5; ++d) {
        const auto scheme = build_scheme(d * d, d, 4);
        const auto report = verify_scheme(scheme, 100, 4);
        o.require(report.verdict.pass, "verify_scheme failed at d=" + std::to_string(d));
        for (auto v : report.per_party_max_deviation) worst_dev = std::max(worst_dev, v);
        for (std::uint64_t i = 0; i < 50; ++i) {
            const auto x = random_state({d * d}, 40 + d, i);
            const double f = fidelity(circuit_mask(x, d), mask(scheme, x));
            worst_fid = std::max(worst_fid, 1.0 - f);
            o.require(f >= 1.0 - kFidelityTol, "fidelity " + sci(f) + " at d=" + std::to_string(d));
        }
    }
    if (o.pass) {
        o.detail = "max marginal dev " + sci(worst_dev) + ", max 1-fidelity " + sci(worst_fid);
    }
    return o;
}

Outcome criterion5() {
    Outcome o;
    const std::array<std::pair<std::size_t, std::size_t>, 5> cases = {
        {{2, 5}, {2, 6}, {3, 5}, {3, 6}, {4, 6}}};
    for (auto [d, m] : cases) {
        const auto w = static_cast<std::size_t>(*checked_pow(d, m / 2));
        const auto report = verify_scheme(build_scheme(w, d, m), 20, 5);
        const std::string tag = "(d=" + std::to_string(d) + ",m=" + std::to_string(m) + ")";
        o.require(report.verdict.pass, "verify failed " + tag);
        bool rejected = false;
        try {
            (void)build_scheme(w + 1, d, m);
        } catch (const BoundError&) {
            rejected = true;
        }
        o.require(rejected, "w+1 not rejected " + tag);
    }
    if (o.pass) {
        o.detail = "5 (d,m) pairs pass at w=d^floor(m/2), reject w+1";
    }
    return o;
}

Outcome criterion6() {
    Outcome o;
    double gram = 0.0;
    double marg = 0.0;
    auto check = [&](const MebFamily& f, const std::string& tag) {
        const auto c = certify_meb(f);
        gram = std::max(gram, c.gram_max_deviation);
        marg = std::max(marg, c.marginal_max_deviation);
        o.require(c.pass && c.gram_max_deviation <= kMebTolerance &&
                      c.marginal_max_deviation <= kMebTolerance,
                  tag + " failed certification");
    };
    for (std::size_t d = 2; d <= 6; ++d) check(two_qudit_meb(d), "two_qudit_meb(" + std::to_string(d) + ")");
    for (std::size_t d = 2; d <= 4; ++d)
        for (std::size_t n = 2; n <= 3; ++n)
            check(ghz_basis(d, n), "ghz_basis(" + std::to_string(d) + "," + std::to_string(n) + ")");

    const double r = 1.0 / std::sqrt(2.0);
    const std::vector<std::vector<cplx>> bell = {
        {r, 0, 0, r}, {r, 0, 0, -r}, {0, r, r, 0}, {0, r, -r, 0}};
    const auto f = two_qudit_meb(2);
    std::vector<bool> matched(4, false);
    for (const auto& b : bell) {
        for (std::size_t k = 0; k < 4; ++k) {
            if (!matched[k] && oracle::max_abs_diff(f.states[k].amps(), b) <= kImageTol) {
                matched[k] = true;
                break;
            }
        }
    }
    o.require(std::all_of(matched.begin(), matched.end(), [](bool x) { return x; }),
              "two_qudit_meb(2) is not the Bell basis");
    if (o.pass) {
        o.detail = "max gram dev " + sci(gram) + ", max marginal dev " + sci(marg);
    }
    return o;
}

Outcome criterion7() {
    Outcome o;
    std::size_t checked = 0;
    for (std::size_t d = 2; d <= 16; ++d) {
        for (std::size_t m = 4; m <= 16; ++m) {
            const auto b = bounds_report(d, m);
            o.require(b.masking_bound <= b.singleton_bound && b.tighter,
                      "bound order fails at d=" + std::to_string(d) + ", m=" + std::to_string(m));
            o.require((b.masking_bound == b.singleton_bound) == (m == 4),
                      "equality pattern fails at d=" + std::to_string(d) + ", m=" + std::to_string(m));
            ++checked;
        }
        o.require(min_parties(d * d, d) == 4, "min_parties(d^2,d) != 4 at d=" + std::to_string(d));
    }
    o.require(min_parties(4, 2) == 4, "min_parties(4,2) != 4");
    o.require(min_parties(8, 2) == 6, "min_parties(8,2) != 6");
    if (o.pass) {
        o.detail = std::to_string(checked) + " (d,m) pairs";
    }
    return o;
}

void all_registers(std::vector<Dims>& out, Dims& prefix, std::size_t product, std::size_t limit) {
    if (!prefix.empty()) {
        out.push_back(prefix);
    }
    for (std::size_t d = 2; product * d <= limit; ++d) {
        prefix.push_back(d);
        all_registers(out, prefix, product * d, limit);
        prefix.pop_back();
    }
}

Outcome criterion8() {
    Outcome o;
    std::mt19937_64 rng(2024);

    std::vector<Dims> registers;
    Dims prefix;
    all_registers(registers, prefix, 1, 256);
    double trace_err = 0.0;
    std::size_t keep_sets = 0;
    for (const auto& dims : registers) {
        const StateVector s(dims, oracle::random_amps(total_dim(dims), rng));
        const auto full = oracle::outer(s);
        const std::size_t n = dims.size();
        for (std::size_t bits = 1; bits < (std::size_t{1} << n); ++bits) {
            std::vector<std::size_t> keep;
            for (std::size_t p = 0; p < n; ++p) {
                if (bits & (std::size_t{1} << p)) keep.push_back(p);
            }
            const auto got = partial_trace(s, PartySet(keep));
            trace_err = std::max(trace_err, oracle::max_abs_diff(got.data(), oracle::partial_trace(full, dims, keep)));
            ++keep_sets;
        }
    }
    o.require(trace_err <= kOracleTraceTol, "partial trace vs oracle " + sci(trace_err));

    double gate_err = 0.0;
    for (std::size_t d = 2; d <= 5; ++d) {
        const Dims dims{d, d, d};
        std::vector<Gate> gates;
        for (std::size_t p = 0; p < 3; ++p) {
            gates.push_back(fourier_gate(d, p));
            for (std::size_t k = 1; k < d; ++k) gates.push_back(shift_gate(d, static_cast<long long>(k), p));
            for (std::size_t t = 0; t < 3; ++t)
                if (t != p) gates.push_back(controlled_power_gate(d, p, t));
        }
        for (const auto& g : gates) {
            const StateVector s(dims, oracle::random_amps(total_dim(dims), rng));
            gate_err = std::max(gate_err, oracle::max_abs_diff(apply_gate(g, s).amps(),
                                                               oracle::dense_apply(gate_matrix(g), gate_parties(g), s)));
        }
    }
    o.require(gate_err <= kGateTol, "gate action vs dense " + sci(gate_err));

    double iso_err = 0.0;
    for (auto [w, d, m] : {std::tuple{4, 2, 4}, {8, 2, 6}, {9, 3, 4}, {9, 3, 5}, {16, 4, 4},
                           {25, 5, 4}, {27, 3, 6}, {64, 4, 6}}) {
        const auto scheme = build_scheme(w, d, m);
        for (int trial = 0; trial < 20; ++trial) {
            const StateVector x({std::size_t(w)}, oracle::random_amps(w, rng));
            const StateVector y({std::size_t(w)}, oracle::random_amps(w, rng));
            iso_err = std::max(iso_err, std::abs(inner_product(mask(scheme, x), mask(scheme, y)) -
                                                 inner_product(x, y)));
        }
    }
    o.require(iso_err <= kIsometryTol, "isometry error " + sci(iso_err));
    if (o.pass) {
        o.detail = std::to_string(registers.size()) + " registers / " + std::to_string(keep_sets) +
                   " keep-sets trace err " + sci(trace_err) + ", gate err " + sci(gate_err) +
                   ", isometry err " + sci(iso_err);
    }
    return o;
}

std::string run_process(const std::string& command, int& status) {
    std::string out;
    FILE* pipe = ::popen(command.c_str(), "r");
    if (pipe == nullptr) {
        status = -1;
        return out;
    }
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) {
        out.append(buf.data(), n);
    }
    status = ::pclose(pipe);
    return out;
}

Outcome criterion9(const std::string& binary) {
    Outcome o;
    const std::vector<std::string> args = {"verify", "--w", "9", "--d", "3", "--m", "4",
                                           "--samples", "50", "--seed", "1"};
    std::ostringstream out1, err1, out2, err2;
    const int c1 = cli::main_entry(args, out1, err1);
    const int c2 = cli::main_entry(args, out2, err2);
    o.require(c1 == 0 && c2 == 0, "in-process verify did not pass");
    o.require(!out1.str().empty() && out1.str() == out2.str(), "in-process outputs differ");
    std::string how = "in-process";
    if (!binary.empty()) {
        std::string cmd = "'" + binary + "'";
        for (const auto& a : args) cmd += " " + a;
        int s1 = 0, s2 = 0;
        const std::string p1 = run_process(cmd, s1);
        const std::string p2 = run_process(cmd, s2);
        o.require(s1 == 0 && s2 == 0, "CLI process exit status nonzero");
        o.require(!p1.empty() && p1 == p2, "CLI process outputs differ");
        o.require(p1 == out1.str(), "CLI process output differs from in-process output");
        how += " + 2 processes";
    }
    if (o.pass) {
        o.detail = how + ", " + std::to_string(out1.str().size()) + " identical bytes";
    }
    return o;
}

} // namespace

int main(int argc, char** argv) {
    const std::string binary = argc > 1 ? argv[1] : "";
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"AC1 qubit 4-party scheme images and marginals", criterion1},
        {"AC2 qubit circuit step states and leakage", criterion2},
        {"AC3 qubit 6-party scheme marginals", criterion3},
        {"AC4 four-qudit schemes and circuits, d=2..5", criterion4},
        {"AC5 general-m schemes and bound rejection", criterion5},
        {"AC6 maximum entangled basis certification", criterion6},
        {"AC7 bound arithmetic", criterion7},
        {"AC8 oracle equivalence properties", criterion8},
        {"AC9 deterministic verify output", [&] { return criterion9(binary); }},
    };
    int failures = 0;
    for (const auto& [name, fn] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome result;
        try {
            result = fn();
        } catch (const std::exception& e) {
            result = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::ostringstream t;
        t.precision(2);
        t << std::fixed << secs;
        std::cout << (result.pass ? "[PASS] " : "[FAIL] ") << name << " -- " << result.detail
                  << " (" << t.str() << "s)\n";
        failures += result.pass ? 0 : 1;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
              << "\n";
    return failures == 0 ? 0 : 1;
}
