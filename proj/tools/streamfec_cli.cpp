// Command-line front-end: build and certify codes, emit bound/capacity tables,
// compute distance/span reports, and drive trace simulations.
//
// Exit codes: 0 success, 1 certification failure / inadmissible trace,
// 2 malformed config or arguments, 3 internal enumeration cap exceeded.

#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "streamfec/bounds.hpp"
#include "streamfec/simkit.hpp"
#include "streamfec/unequalrate.hpp"

using namespace streamfec;
using nlohmann::json;

namespace {

Rational parse_rate(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) throw std::invalid_argument("rate: want k/n");
    return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
}

struct CodeArgs {
    std::string family = "midas";
    std::string backend = "block-mds";
    std::string rate;  // "k/n", selects the rate-constrained builders
    int N = 1, B = 1, T = 1, M = 1;
    int W = INT_MAX;
    std::uint64_t seed = 0;
};

void add_code_flags(CLI::App* app, CodeArgs& a) {
    app->add_option("--family", a.family,
                    "midas | genms | smds | unequal | robust | adapted-ms")
        ->capture_default_str();
    app->add_option("--backend", a.backend, "block-mds | random-smds")
        ->capture_default_str();
    app->add_option("--rate", a.rate, "fix rate k/n instead of the (N,B) layout");
    app->add_option("--N", a.N, "isolated erasures per window");
    app->add_option("--B", a.B, "burst length");
    app->add_option("--T", a.T, "decoding delay");
    app->add_option("--W", a.W, "window length (default: unconstrained)");
    app->add_option("--M", a.M, "channel packets per source symbol");
    app->add_option("--seed", a.seed, "builder seed");
}

struct Built {
    std::string family;
    StreamCode sc;
    DecodePolicy policy = DecodePolicy::Staged;
    json meta;
};

Built build_code(const CodeArgs& a) {
    Backend be = (a.backend == "random-smds") ? Backend::RandomSmds
                                              : Backend::BlockMds;
    if (a.backend != "random-smds" && a.backend != "block-mds")
        throw std::invalid_argument("unknown backend: " + a.backend);
    Built out;
    out.family = a.family;
    json& m = out.meta;
    m["family"] = a.family;
    m["T"] = a.T;
    m["seed"] = a.seed;
    auto from_layered = [&](const LayeredCode& c) {
        m["N"] = c.N;
        m["B"] = c.B;
        m["W"] = (c.W == INT_MAX) ? json(nullptr) : json(c.W);
        m["backend"] =
            c.backend == Backend::BlockMds ? "block-mds" : "random-smds";
        m["rate"] = c.rate().str();
        m["seed"] = c.seed;
        out.policy = c.policy;
        out.sc = c.sc;
    };
    auto from_macro = [&](const MacroCode& c) {
        m["M"] = c.spec.M;
        m["B"] = c.spec.B;
        m["N"] = c.spec.N;
        m["rate"] = c.rate().str();
        m["seed"] = c.seed;
        out.policy = c.policy;
        out.sc = c.sc;
    };
    if (a.family == "midas") {
        if (!a.rate.empty())
            from_layered(build_midas_rated(a.N, parse_rate(a.rate), a.T, nullptr, a.seed));
        else
            from_layered(build_midas(a.N, a.B, a.T, a.W, be, nullptr, a.seed));
    } else if (a.family == "genms") {
        if (!a.rate.empty())
            from_layered(build_genms_rated(parse_rate(a.rate), a.T, nullptr, a.seed));
        else
            from_layered(build_genms(a.B, a.T, a.W, nullptr, a.seed));
    } else if (a.family == "smds") {
        if (!a.rate.empty())
            from_layered(build_smds_baseline_rated(parse_rate(a.rate), a.T, nullptr, a.seed));
        else
            from_layered(build_smds_baseline(a.N, a.B, a.T, nullptr, a.seed));
    } else if (a.family == "unequal") {
        from_macro(build_unequal(a.M, a.T, a.B, nullptr, a.seed, a.W));
    } else if (a.family == "robust") {
        from_macro(build_robust(a.M, a.T, a.B, a.N, nullptr, a.seed));
    } else if (a.family == "adapted-ms") {
        from_macro(build_adapted_ms(a.M, a.T, a.B, nullptr, a.seed));
    } else {
        throw std::invalid_argument("unknown family: " + a.family);
    }
    m["k"] = out.sc.k;
    m["n"] = out.sc.n;
    m["memory"] = out.sc.mem;
    m["slots"] = out.sc.slots;
    return out;
}

json cert_json(const RecoveryCertificate& c) {
    json j;
    j["family"] = c.family;
    j["delay"] = c.delay;
    j["checked"] = c.checked;
    j["population"] = c.population;
    j["sampled"] = c.sampled;
    j["pass"] = c.pass;
    j["failures"] = c.failures;
    j["counterexample"] = c.counterexample;
    return j;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream os(out_path);
        if (!os) throw std::invalid_argument("cannot open output: " + out_path);
        os << text;
    }
}

std::pair<long, long> parse_range(const std::string& s) {
    auto colon = s.find(':');
    if (colon == std::string::npos) {
        long v = std::stol(s);
        return {v, v};
    }
    return {std::stol(s.substr(0, colon)), std::stol(s.substr(colon + 1))};
}

ErasureTrace load_trace(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open trace: " + path);
    return ErasureTrace::parse(is);
}

int run_simulate(const std::string& config_path, const std::string& out_path) {
    std::ifstream is(config_path);
    if (!is) throw std::invalid_argument("cannot open config: " + config_path);
    json cfg = json::parse(is);

    SweepConfig sw;
    std::vector<Built> built;
    for (const json& jc : cfg.at("codes")) {
        CodeArgs a;
        a.family = jc.at("family").get<std::string>();
        a.backend = jc.value("backend", "block-mds");
        a.rate = jc.value("rate", "");
        a.N = jc.value("N", 1);
        a.B = jc.value("B", 1);
        a.T = jc.value("T", 1);
        a.M = jc.value("M", 1);
        a.W = jc.value("W", INT_MAX);
        a.seed = jc.value("seed", std::uint64_t(0));
        built.push_back(build_code(a));
        if (jc.value("policy", "") == "oracle") built.back().policy = DecodePolicy::Oracle;
        if (jc.value("policy", "") == "staged") built.back().policy = DecodePolicy::Staged;
        built.back().meta["label"] = jc.value("label", a.family);
    }
    for (const Built& b : built)
        sw.codes.push_back({b.meta["label"].get<std::string>(),
                            b.meta.value("rate", ""), &b.sc, b.policy});

    const json& ch = cfg.at("channel");
    sw.channel = ch.value("type", "ge");
    if (sw.channel == "fritchman") {
        sw.fritchman.bad_states = ch.value("bad_states", 1);
        sw.fritchman.alpha = ch.value("alpha", 0.0);
        sw.fritchman.beta = ch.value("beta", 1.0);
        sw.fritchman.eps = ch.value("eps", 0.0);
    } else if (sw.channel == "ge") {
        sw.ge.alpha = ch.value("alpha", 0.0);
        sw.ge.beta = ch.value("beta", 1.0);
        sw.ge.eps = ch.value("eps", 0.0);
    } else {
        throw std::invalid_argument("unknown channel type: " + sw.channel);
    }
    std::string axis = cfg.value("axis", "eps");
    sw.axis = axis == "beta" ? GridAxis::Beta
                             : axis == "alpha" ? GridAxis::Alpha : GridAxis::Eps;
    sw.grid = cfg.at("grid").get<std::vector<double>>();
    sw.length = cfg.value("length", 10000000L);
    sw.master_seed = cfg.value("seed", std::uint64_t(1));
    sw.alpha_scale = cfg.value("alpha_scale", 1.0);

    emit(sweep_csv(sweep(sw)), out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"streaming-FEC toolkit"};
    app.require_subcommand(1);

    CodeArgs code_args;
    std::string out_path, rate_str, config_path, trace_path, range_str = "1:1";
    std::size_t cap = kPatternCap;

    CLI::App* cmd_build = app.add_subcommand("build", "build a code, print its spec");
    add_code_flags(cmd_build, code_args);
    cmd_build->add_option("--out", out_path, "write JSON here instead of stdout");

    CLI::App* cmd_certify =
        app.add_subcommand("certify", "exhaustively certify a code against its channel");
    add_code_flags(cmd_certify, code_args);
    cmd_certify->add_option("--out", out_path);
    cmd_certify->add_option("--cap", cap, "pattern enumeration cap");
    int chan_N = -1, chan_B = -1;
    cmd_certify->add_option("--channel-N", chan_N,
                            "certify against this N instead of the design N");
    cmd_certify->add_option("--channel-B", chan_B,
                            "certify against this B instead of the design B");

    CLI::App* cmd_tradeoff =
        app.add_subcommand("tradeoff", "achievable (N,B) table at fixed rate");
    cmd_tradeoff->add_option("--rate", rate_str, "rate k/n")->required();
    cmd_tradeoff->add_option("--T", code_args.T);
    cmd_tradeoff->add_option("--W", code_args.W);
    cmd_tradeoff->add_option("--out", out_path);

    CLI::App* cmd_capacity =
        app.add_subcommand("capacity", "macro-packet burst capacity over a B range");
    cmd_capacity->add_option("--M", code_args.M);
    cmd_capacity->add_option("--T", code_args.T);
    cmd_capacity->add_option("--B", range_str, "single value or lo:hi")->required();
    cmd_capacity->add_option("--out", out_path);

    CLI::App* cmd_distance =
        app.add_subcommand("distance", "column distance/span tradeoff report");
    add_code_flags(cmd_distance, code_args);
    cmd_distance->add_option("--out", out_path);

    CLI::App* cmd_simulate = app.add_subcommand("simulate", "run a sweep from a JSON config");
    cmd_simulate->add_option("--config", config_path)->required();
    cmd_simulate->add_option("--out", out_path);

    CLI::App* cmd_histogram =
        app.add_subcommand("histogram", "burst-length histogram of a trace file");
    cmd_histogram->add_option("--trace", trace_path)->required();
    cmd_histogram->add_option("--out", out_path);

    CLI::App* cmd_patterns =
        app.add_subcommand("patterns", "check a trace against the C(N,B,W) window rule");
    cmd_patterns->add_option("--trace", trace_path)->required();
    cmd_patterns->add_option("--N", code_args.N);
    cmd_patterns->add_option("--B", code_args.B);
    cmd_patterns->add_option("--W", code_args.W)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (cmd_build->parsed()) {
            Built b = build_code(code_args);
            emit(b.meta.dump(2) + "\n", out_path);
        } else if (cmd_certify->parsed()) {
            Built b = build_code(code_args);
            int T_eff = std::min(code_args.T, code_args.W == INT_MAX
                                                  ? code_args.T
                                                  : code_args.W - 1);
            int cN = chan_N >= 0 ? chan_N : b.sc.design_N;
            int cB = chan_B >= 0 ? chan_B : b.sc.design_B;
            PatternFamily fam;
            if (b.sc.slots > 1) {
                fam = family_union(
                    "macro window patterns",
                    {detail::macro_burst_family(b.sc.slots, cB),
                     family_subsets_upto(cN, b.sc.design_window, cap,
                                         code_args.seed)});
            } else {
                fam = enumerate_window_patterns(cN, cB, T_eff, cap,
                                                code_args.seed);
            }
            auto cert = certify_stream(b.sc, fam, b.policy);
            emit(cert_json(cert).dump(2) + "\n", out_path);
            return cert.pass ? 0 : 1;
        } else if (cmd_tradeoff->parsed()) {
            Rational R = parse_rate(rate_str);
            std::ostringstream os;
            os << "family,N,B,rate,T,W,feasible\n";
            for (const auto& p : table1_points(R, code_args.T, code_args.W))
                os << p.family << ',' << p.N << ',' << p.B << ',' << p.rate.str()
                   << ',' << p.T << ','
                   << (p.W == INT_MAX ? std::string("-") : std::to_string(p.W))
                   << ',' << (p.feasible ? 1 : 0) << "\n";
            emit(os.str(), out_path);
        } else if (cmd_capacity->parsed()) {
            auto [lo, hi] = parse_range(range_str);
            std::ostringstream os;
            os << "B,capacity,adapted_ms\n";
            for (long B = lo; B <= hi; ++B)
                os << B << ',' << capacity(code_args.M, code_args.T, int(B)).str()
                   << ',' << adapted_ms_rate(code_args.M, code_args.T, int(B)).str()
                   << "\n";
            emit(os.str(), out_path);
        } else if (cmd_distance->parsed()) {
            Built b = build_code(code_args);
            for (int l = 0; l < b.sc.k; ++l)
                if (b.sc.sys_pos[l] != l)
                    throw std::invalid_argument(
                        "distance: only packet-clock systematic layouts");
            SystematicConvCode flat;
            flat.f = b.sc.field.get();
            flat.kbar = b.sc.k;
            flat.nbar = b.sc.n;
            flat.mbar = b.sc.mem;
            for (const Matrix& g : b.sc.G) {
                Matrix h(*b.sc.field, b.sc.k, b.sc.n - b.sc.k);
                for (int l = 0; l < b.sc.k; ++l)
                    for (int c = b.sc.k; c < b.sc.n; ++c)
                        h.at(l, c - b.sc.k) = g.at(l, c);
                flat.H.push_back(h);
            }
            auto rep = prop4_check(flat, code_args.T);
            json j;
            j["d_T"] = rep.dT;
            j["c_T"] = rep.cT;
            j["lhs"] = rep.lhs.str();
            j["rhs"] = rep.rhs.str();
            j["pass"] = rep.pass;
            emit(j.dump(2) + "\n", out_path);
        } else if (cmd_simulate->parsed()) {
            return run_simulate(config_path, out_path);
        } else if (cmd_histogram->parsed()) {
            emit(histogram_csv(burst_histogram(load_trace(trace_path))), out_path);
        } else if (cmd_patterns->parsed()) {
            auto v = validate_trace(load_trace(trace_path), code_args.N,
                                    code_args.B, code_args.W);
            if (v.valid) {
                std::cout << "admissible\n";
                return 0;
            }
            std::cout << "inadmissible first_bad_window=" << v.first_bad_window
                      << "\n";
            return 1;
        }
    } catch (const CertificationError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {
        std::string w = e.what();
        bool capped = w.find("cap") != std::string::npos;
        std::cerr << "error: " << w << "\n";
        return capped ? 3 : 2;
    }
    return 0;
}
