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
 * Command-line front end: argument parsing and subcommand dispatch.
 *
 * run() never writes to a stream; it returns the full payload and a
 * diagnostic so that callers emit either a complete document or nothing.
 *
 * Exit codes: 0 pass, 2 masking failure, 3 bound violation, 64 usage error.
 */

#pragma once

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "qmask/qmask.hpp"
#include "qmask/serialize.hpp"

namespace qmask::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitMaskingFailure = 2;
inline constexpr int kExitBoundViolation = 3;
inline constexpr int kExitUsage = 64;

/// Relative --output paths resolve against this directory when it is set.
inline constexpr const char* kOutputDirEnv = "QMASK_OUTPUT_DIR";

/// Tolerance on |<psi|psi> - 1| for user-supplied amplitudes.
inline constexpr double kInputNormTol = 1e-9;

enum class Format { json, text };

struct CliConfig {
    std::string subcommand;
    std::optional<std::size_t> w;
    std::optional<std::size_t> d;
    std::optional<std::size_t> m;
    std::optional<std::size_t> n_parties;    // meb
    std::vector<std::size_t> w_list;         // bounds
    std::optional<std::string> amps;         // inline amplitudes
    std::optional<std::string> input_path;   // amplitude file
    std::optional<std::string> circuit_path; // circuit text to run
    bool renormalize = false;
    std::size_t samples = 100;
    std::uint64_t seed = 0;
    Format format = Format::json;
    std::optional<std::string> output;
};

struct CliResult {
    int exit_code = kExitPass;
    std::string payload;    // complete document for the output stream
    std::string diagnostic; // single line for the error stream, may be empty
};

class UsageError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Amplitude input
//
// File: one amplitude per line as "re im"; blank lines and '#' comments are
// skipped. Inline (--amps): comma-separated entries "re" or "re:im".
// ---------------------------------------------------------------------------

namespace detail {

inline double parse_double(std::string_view text, const std::string& where) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value)) {
        throw FormatError(where + ": cannot parse number '" + std::string(text) + "'");
    }
    return value;
}

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

} // namespace detail

inline std::vector<cplx> parse_amplitude_file(std::string_view text) {
    std::vector<cplx> amps;
    std::istringstream lines{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(lines, line)) {
        ++line_no;
        const std::string body = detail::trim(line);
        if (body.empty() || body.front() == '#') {
            continue;
        }
        std::istringstream fields(body);
        std::string re;
        std::string im;
        std::string extra;
        fields >> re >> im;
        const std::string where = "amplitude line " + std::to_string(line_no);
        if (im.empty() || (fields >> extra)) {
            throw FormatError(where + ": expected exactly 're im'");
        }
        amps.emplace_back(detail::parse_double(re, where), detail::parse_double(im, where));
    }
    if (amps.empty()) {
        throw FormatError("amplitude file contains no amplitudes");
    }
    return amps;
}

inline std::vector<cplx> parse_inline_amplitudes(std::string_view text) {
    std::vector<cplx> amps;
    std::size_t entry = 0;
    while (true) {
        const auto comma = text.find(',');
        const std::string item = detail::trim(text.substr(0, comma));
        const std::string where = "--amps entry " + std::to_string(++entry);
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            amps.emplace_back(detail::parse_double(item, where), 0.0);
        } else {
            amps.emplace_back(detail::parse_double(detail::trim(item.substr(0, colon)), where),
                              detail::parse_double(detail::trim(item.substr(colon + 1)), where));
        }
        if (comma == std::string_view::npos) {
            break;
        }
        text.remove_prefix(comma + 1);
    }
    return amps;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError("cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct LoadedInput {
    StateVector state;
    bool renormalized = false;
};

/// Reads the input state of dimension w from --amps or --input.
inline LoadedInput load_input(const CliConfig& cfg, std::size_t w) {
    if (cfg.amps.has_value() == cfg.input_path.has_value()) {
        throw UsageError("exactly one of --amps or --input is required");
    }
    std::vector<cplx> amps = cfg.amps ? parse_inline_amplitudes(*cfg.amps)
                                      : parse_amplitude_file(read_file(*cfg.input_path));
    if (amps.size() != w) {
        throw FormatError("expected " + std::to_string(w) + " amplitudes, got " +
                          std::to_string(amps.size()));
    }
    StateVector state(Dims{w}, std::move(amps));
    const double n2 = state.norm_squared();
    if (std::abs(n2 - 1.0) <= kInputNormTol) {
        return {std::move(state), false};
    }
    if (!cfg.renormalize) {
        throw FormatError("input is not normalized (<psi|psi> = " + std::to_string(n2) +
                          "); pass --renormalize to rescale");
    }
    if (n2 == 0.0) {
        throw FormatError("input is the zero vector");
    }
    return {state.normalized(), true};
}

// ---------------------------------------------------------------------------
// Argument parsing
// ---------------------------------------------------------------------------

struct ParseOutcome {
    std::optional<CliConfig> config;
    int exit_code = kExitPass; // meaningful when config is empty (help or error)
    std::string out;
    std::string err;
};

inline ParseOutcome parse_args(const std::vector<std::string>& args) {
    CliConfig cfg;
    CLI::App app{"Construct and certify quantum information masking schemes", "qmask"};
    app.require_subcommand(1);

    std::string format = "json";
    auto common_output = [&](CLI::App* sub) {
        sub->add_option("--format", format, "Output format")
            ->check(CLI::IsMember({"json", "text"}));
        sub->add_option("--output,-o", cfg.output,
                        "Write the document here instead of standard output");
    };
    auto wdm = [&](CLI::App* sub, bool required) {
        auto* w = sub->add_option("--w", cfg.w, "Input dimension")->check(CLI::Range(2, 1 << 24));
        auto* d = sub->add_option("--d", cfg.d, "Local dimension")->check(CLI::Range(2, 1 << 16));
        auto* m = sub->add_option("--m", cfg.m, "Number of parties")->check(CLI::Range(1, 64));
        if (required) {
            w->required();
            d->required();
            m->required();
        }
    };

    auto* build = app.add_subcommand("build", "Emit the masking scheme for (w, d, m)");
    wdm(build, true);
    common_output(build);

    auto* mask_cmd = app.add_subcommand("mask", "Mask an input state and report its marginals");
    wdm(mask_cmd, true);
    mask_cmd->add_option("--amps", cfg.amps, "Inline amplitudes: re or re:im, comma-separated");
    mask_cmd->add_option("--input", cfg.input_path, "Amplitude file, one 're im' per line");
    mask_cmd->add_flag("--renormalize", cfg.renormalize, "Rescale a non-normalized input");
    common_output(mask_cmd);

    auto* circuit = app.add_subcommand(
        "circuit", "Emit the four-party masking circuit, or run a circuit file on an input");
    circuit->add_option("--d", cfg.d, "Local dimension")->check(CLI::Range(2, 1 << 16));
    circuit->add_option("--m", cfg.m, "Number of parties (only 4 is supported)");
    circuit->add_option("--from", cfg.circuit_path, "Circuit text file to execute");
    circuit->add_option("--amps", cfg.amps, "Inline amplitudes for --from");
    circuit->add_option("--input", cfg.input_path, "Amplitude file for --from");
    circuit->add_flag("--renormalize", cfg.renormalize, "Rescale a non-normalized input");
    common_output(circuit);

    auto* verify = app.add_subcommand("verify", "Certify the masking scheme for (w, d, m)");
    wdm(verify, true);
    verify->add_option("--samples", cfg.samples, "Random inputs to test")
        ->check(CLI::Range(2, 1000000));
    verify->add_option("--seed", cfg.seed, "Seed of the random input stream");
    common_output(verify);

    auto* bounds = app.add_subcommand("bounds", "Masking bound versus quantum Singleton bound");
    bounds->add_option("--d", cfg.d, "Local dimension")->required()->check(CLI::Range(2, 1 << 16));
    bounds->add_option("--m", cfg.m, "Number of parties")->required()->check(CLI::Range(1, 64));
    bounds->add_option("--w", cfg.w_list, "Input dimensions for the min-parties table")
        ->delimiter(',')
        ->check(CLI::Range(2, 1 << 30));
    common_output(bounds);

    auto* meb = app.add_subcommand("meb", "Export and certify a maximum entangled basis");
    meb->add_option("--d", cfg.d, "Local dimension")->required()->check(CLI::Range(2, 64));
    meb->add_option("--n", cfg.n_parties, "Number of parties")->required()->check(CLI::Range(2, 24));
    common_output(meb);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    ParseOutcome outcome;
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        std::ostringstream out;
        std::ostringstream err;
        const int code = app.exit(e, out, err);
        outcome.out = out.str();
        outcome.err = detail::trim(err.str());
        if (const auto nl = outcome.err.find('\n'); nl != std::string::npos) {
            outcome.err.resize(nl);
        }
        outcome.exit_code = code == 0 ? kExitPass : kExitUsage;
        return outcome;
    }
    cfg.subcommand = app.get_subcommands().front()->get_name();
    cfg.format = format == "text" ? Format::text : Format::json;
    outcome.config = std::move(cfg);
    return outcome;
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

namespace detail {

inline std::string dump(const json::Json& doc) { return doc.dump(2) + "\n"; }

inline std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << json::canonical(x);
    return os.str();
}

inline std::string fmt(const cplx& z) {
    return "(" + fmt(z.real()) + ", " + fmt(z.imag()) + ")";
}

inline std::string ket(std::size_t index, const Dims& dims) {
    std::string s = "|";
    for (auto digit : index_to_digits(index, dims)) {
        s += std::to_string(digit);
        if (dims.size() > 1 && dims.front() > 10) {
            s += ' ';
        }
    }
    return s + ">";
}

inline std::string nonzero_terms(const StateVector& state) {
    std::string out;
    for (std::size_t i = 0; i < state.size(); ++i) {
        if (std::abs(state[i]) > 1e-15) {
            out += "    " + fmt(state[i]) + " " + ket(i, state.dims()) + "\n";
        }
    }
    return out;
}

inline json::Json marginals_json(const StateVector& state) {
    json::Json arr = json::Json::array();
    for (std::size_t p = 0; p < state.n_parties(); ++p) {
        const DensityMatrix rho = single_party_marginal(state, p);
        json::Json j;
        j["party"] = p;
        j["matrix"] = json::matrix(rho);
        j["deviation"] = json::canonical(distance_to_maximally_mixed(rho));
        arr.push_back(std::move(j));
    }
    return arr;
}

inline std::string marginals_text(const StateVector& state) {
    std::string out;
    for (std::size_t p = 0; p < state.n_parties(); ++p) {
        out += "party " + std::to_string(p) + ": ||rho - I/d||_max = " +
               fmt(distance_to_maximally_mixed(single_party_marginal(state, p))) + "\n";
    }
    return out;
}

inline std::size_t need(const std::optional<std::size_t>& v, const char* flag) {
    if (!v) {
        throw UsageError(std::string(flag) + " is required");
    }
    return *v;
}

inline CliResult run_build(const CliConfig& cfg) {
    const MaskingScheme s = build_scheme(need(cfg.w, "--w"), need(cfg.d, "--d"), need(cfg.m, "--m"));
    if (cfg.format == Format::json) {
        return {kExitPass, dump(json::scheme(s)), {}};
    }
    std::string out = "scheme w=" + std::to_string(s.w()) + " d=" + std::to_string(s.d()) +
                      " m=" + std::to_string(s.m()) + " provenance=" +
                      std::string(to_string(s.provenance())) + "\n";
    for (std::size_t k = 0; k < s.w(); ++k) {
        out += "|" + std::to_string(k) + "> ->\n" + nonzero_terms(s.images()[k]);
    }
    return {kExitPass, out, {}};
}

inline CliResult run_mask(const CliConfig& cfg) {
    const MaskingScheme s = build_scheme(need(cfg.w, "--w"), need(cfg.d, "--d"), need(cfg.m, "--m"));
    const LoadedInput in = load_input(cfg, s.w());
    const StateVector out_state = mask(s, in.state);
    const std::string warn = in.renormalized ? "warning: input renormalized" : "";
    if (cfg.format == Format::json) {
        json::Json j;
        j["w"] = s.w();
        j["d"] = s.d();
        j["m"] = s.m();
        j["renormalized"] = in.renormalized;
        j["input"] = json::amplitudes(in.state);
        j["state"] = json::state(out_state);
        j["marginals"] = marginals_json(out_state);
        return {kExitPass, dump(j), warn};
    }
    return {kExitPass, "masked state:\n" + nonzero_terms(out_state) + marginals_text(out_state),
            warn};
}

inline CliResult run_circuit(const CliConfig& cfg) {
    if (!cfg.circuit_path) {
        if (cfg.amps || cfg.input_path) {
            throw UsageError("--amps/--input require --from");
        }
        const std::size_t d = need(cfg.d, "--d");
        if (cfg.m && *cfg.m != 4) {
            throw UsageError("circuits are only constructed for m = 4");
        }
        const auto steps = d == 2 ? qubit4_steps() : qudit4_steps(d);
        std::string out = "# input encoding: |k> -> |k mod d>|floor(k/d)>|0>|0>\n";
        out += "REGISTER dims=" + std::to_string(d) + "," + std::to_string(d) + "," +
               std::to_string(d) + "," + std::to_string(d) + "\n";
        for (std::size_t i = 0; i < steps.size(); ++i) {
            out += "# step " + std::to_string(i + 1) + "\n";
            for (const auto& g : steps[i].gates()) {
                out += gate_to_text(g) + "\n";
            }
        }
        return {kExitPass, out, {}};
    }

    const Circuit circuit = circuit_from_text(read_file(*cfg.circuit_path));
    const Dims& dims = circuit.dims();
    const bool four_equal = dims.size() == 4 &&
                            std::all_of(dims.begin(), dims.end(),
                                        [&](std::size_t x) { return x == dims[0]; });
    if (!four_equal) {
        throw UsageError("--from circuits must act on four parties of equal dimension");
    }
    const std::size_t d = dims[0];
    if (cfg.d && *cfg.d != d) {
        throw UsageError("--d does not match the circuit register");
    }
    const std::size_t w = cfg.amps ? parse_inline_amplitudes(*cfg.amps).size()
                          : cfg.input_path
                              ? parse_amplitude_file(read_file(*cfg.input_path)).size()
                              : 0;
    if (w < 2 || w > d * d) {
        throw UsageError("input needs between 2 and d^2 amplitudes");
    }
    const LoadedInput in = load_input(cfg, w);
    const StateVector out_state = apply(circuit, encode_digits(in.state, d));
    const LeakageProfile leak = leakage_profile(out_state);
    const std::string warn = in.renormalized ? "warning: input renormalized" : "";
    if (cfg.format == Format::json) {
        json::Json j;
        j["register"] = dims;
        j["gates"] = circuit.size();
        j["renormalized"] = in.renormalized;
        j["input"] = json::amplitudes(in.state);
        j["state"] = json::state(out_state);
        j["leakage"] = json::leakage(leak);
        j["all_masked"] = leak.all_masked();
        return {kExitPass, dump(j), warn};
    }
    std::string out = "output state:\n" + nonzero_terms(out_state);
    for (const auto& p : leak.parties) {
        out += "party " + std::to_string(p.party) + ": off-diagonal leak " +
               fmt(p.off_diagonal_leak) + ", diagonal leak " + fmt(p.diagonal_leak) +
               (p.masked ? " (masked)" : "") + "\n";
    }
    return {kExitPass, out, warn};
}

inline CliResult run_verify(const CliConfig& cfg) {
    const MaskingScheme s = build_scheme(need(cfg.w, "--w"), need(cfg.d, "--d"), need(cfg.m, "--m"));
    const MaskingReport r = verify_scheme(s, cfg.samples, cfg.seed);
    const int code = r.verdict.pass ? kExitPass : kExitMaskingFailure;
    const std::string diag = r.verdict.pass ? "" : "masking verification failed";
    if (cfg.format == Format::json) {
        return {code, dump(json::report(r)), diag};
    }
    std::string out = "verify w=" + std::to_string(r.w) + " d=" + std::to_string(r.d) +
                      " m=" + std::to_string(r.m) + " inputs=" + std::to_string(r.n_inputs) +
                      " seed=" + std::to_string(r.seed) + "\n";
    for (std::size_t p = 0; p < r.m; ++p) {
        out += "party " + std::to_string(p) + ": deviation " + fmt(r.per_party_max_deviation[p]) +
               ", cross-input variation " + fmt(r.cross_input_max_variation[p]) + "\n";
    }
    out += "gram deviation " + fmt(r.isometry_gram_deviation) + "\n";
    out += std::string("isometry ") + (r.verdict.isometry ? "pass" : "FAIL") +
           ", input-independent " + (r.verdict.input_independent ? "pass" : "FAIL") +
           ", maximally mixed " + (r.verdict.maximally_mixed ? "pass" : "FAIL") + "\n";
    out += r.verdict.pass ? "PASS\n" : "FAIL\n";
    return {code, out, diag};
}

inline CliResult run_bounds(const CliConfig& cfg) {
    const BoundsReport b = bounds_report(need(cfg.d, "--d"), need(cfg.m, "--m"), cfg.w_list);
    if (cfg.format == Format::json) {
        return {kExitPass, dump(json::bounds(b)), {}};
    }
    std::string out = "d=" + std::to_string(b.d) + " m=" + std::to_string(b.m) +
                      "\nmasking bound d^floor(m/2) = " + std::to_string(b.masking_bound) +
                      "\nsingleton bound d^(m-2) = " + std::to_string(b.singleton_bound) +
                      "\ntighter: " + (b.tighter ? "yes" : "no") + "\n";
    for (const auto& row : b.min_parties_table) {
        out += "w=" + std::to_string(row.w) + " min_parties=" + std::to_string(row.min_parties) +
               (row.needs_four_parties ? " (constructions need m >= 4)" : "") + "\n";
    }
    return {kExitPass, out, {}};
}

inline CliResult run_meb(const CliConfig& cfg) {
    const std::size_t d = need(cfg.d, "--d");
    const std::size_t n = need(cfg.n_parties, "--n");
    if (!checked_pow(d, 2 * n) || *checked_pow(d, 2 * n) > (std::uint64_t{1} << 26)) {
        throw UsageError("basis too large to export densely");
    }
    const MebFamily family = n == 2 ? two_qudit_meb(d) : ghz_basis(d, n);
    const MebCertificate cert = certify_meb(family);
    const int code = cert.pass ? kExitPass : kExitMaskingFailure;
    if (cfg.format == Format::json) {
        json::Json j = json::meb(family);
        j["certificate"] = json::certificate(cert);
        return {code, dump(j), cert.pass ? "" : "basis certification failed"};
    }
    std::string out = "basis d=" + std::to_string(d) + " n=" + std::to_string(n) + "\n";
    for (std::size_t k = 0; k < family.states.size(); ++k) {
        out += "state " + std::to_string(family.labels[k]) + ":\n" +
               nonzero_terms(family.states[k]);
    }
    out += "gram deviation " + fmt(cert.gram_max_deviation) + ", marginal deviation " +
           fmt(cert.marginal_max_deviation) + (cert.pass ? ", PASS\n" : ", FAIL\n");
    return {code, out, cert.pass ? "" : "basis certification failed"};
}

} // namespace detail

/// Executes one subcommand. Library errors map to exit codes; the payload is
/// empty whenever the exit code signals an error other than a failed check.
inline CliResult run(const CliConfig& cfg) {
    try {
        if (cfg.subcommand == "build") {
            return detail::run_build(cfg);
        }
        if (cfg.subcommand == "mask") {
            return detail::run_mask(cfg);
        }
        if (cfg.subcommand == "circuit") {
            return detail::run_circuit(cfg);
        }
        if (cfg.subcommand == "verify") {
            return detail::run_verify(cfg);
        }
        if (cfg.subcommand == "bounds") {
            return detail::run_bounds(cfg);
        }
        if (cfg.subcommand == "meb") {
            return detail::run_meb(cfg);
        }
        return {kExitUsage, {}, "error: unknown subcommand '" + cfg.subcommand + "'"};
    } catch (const BoundError& e) {
        return {kExitBoundViolation, {}, std::string("error: ") + e.what()};
    } catch (const std::exception& e) {
        return {kExitUsage, {}, std::string("error: ") + e.what()};
    }
}

inline std::filesystem::path resolve_output(const std::string& output) {
    std::filesystem::path path(output);
    if (path.is_relative()) {
        if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') {
            return std::filesystem::path(dir) / path;
        }
    }
    return path;
}

/// Parses, runs, and writes the result. Returns the process exit code.
inline int main_entry(const std::vector<std::string>& args, std::ostream& out,
                      std::ostream& err) {
    const ParseOutcome parsed = parse_args(args);
    if (!parsed.config) {
        out << parsed.out;
        if (!parsed.err.empty()) {
            err << parsed.err << "\n";
        }
        return parsed.exit_code;
    }
    const CliConfig& cfg = *parsed.config;
    const CliResult result = run(cfg);
    if (!result.payload.empty()) {
        if (cfg.output) {
            const auto path = resolve_output(*cfg.output);
            std::ofstream file(path, std::ios::binary);
            if (!file || !(file << result.payload) || !file.flush()) {
                err << "error: cannot write '" << path.string() << "'\n";
                return kExitUsage;
            }
        } else {
            out << result.payload;
        }
    }
    if (!result.diagnostic.empty()) {
        err << result.diagnostic << "\n";
    }
    return result.exit_code;
}

} // namespace qmask::cli
