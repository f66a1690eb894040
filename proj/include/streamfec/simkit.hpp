// Monte-Carlo driver: run a built code over a (possibly very long) erasure
// trace and account losses against per-symbol decoding deadlines.
//
// The hot path never touches the eliminator for benign events: maximal erasure
// runs are grouped into clusters separated by at least one full decode window,
// so clusters cannot interact. A cluster that is a single clean burst within
// the certified design burst length (or a certified isolated-erasure subset)
// is recovered by the builder's certificate. Everything else runs a relaxed
// joint elimination over the whole cluster first — a superset of any
// per-deadline decode, so symbols it cannot determine are definitely lost —
// and only clusters with surviving candidates replay the exact sequential
// per-deadline decode.
//
// Determinism: per-grid-point seeds derive from the master seed by splitmix;
// all rows are ordered canonically, so a sweep is reproducible bit-for-bit.

#pragma once

#include <chrono>
#include <cstdlib>
#include <thread>

#include "channels.hpp"
#include "streamcode.hpp"

namespace streamfec {

struct SimReport {
    std::string family, params, channel;
    double epsilon_or_beta = 0;
    std::uint64_t seed = 0;
    long symbols = 0;  // countable symbols (after warmup, deadline in trace)
    long lost = 0;
    double loss_rate = 0;
    double runtime_ms = 0;
    double alpha_scale = 1;  // recorded when rare-event rates were scaled up
    std::map<long, long> histogram;  // burst length -> count
};

namespace detail {

// splitmix64 step, used to derive independent per-grid-point seeds.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

struct Run {
    long start = 0, len = 0;
};

inline std::vector<std::vector<Run>> cluster_runs(const ErasureTrace& t,
                                                  long gap) {
    std::vector<std::vector<Run>> clusters;
    long i = 0, L = t.length();
    while (i < L) {
        if (!t.erased(i)) {
            ++i;
            continue;
        }
        long j = i;
        while (j < L && t.erased(j)) ++j;
        if (clusters.empty() ||
            i - (clusters.back().back().start + clusters.back().back().len) >= gap)
            clusters.emplace_back();
        clusters.back().push_back({i, j - i});
        i = j;
    }
    return clusters;
}

}  // namespace detail

inline SimReport run(const StreamCode& sc, const ErasureTrace& trace,
                     DecodePolicy policy = DecodePolicy::Oracle,
                     bool fast_path = true) {
    auto t0 = std::chrono::steady_clock::now();
    SimReport rep;
    long steps = trace.length() / sc.slots;
    long warmup = sc.mem + sc.Tdec;
    long last = steps - 1;
    while (last >= 0 && sc.deadline_slot(last) >= trace.length()) --last;
    if (last < warmup) throw std::invalid_argument("sim: trace shorter than warmup");
    rep.symbols = (last - warmup + 1) * sc.group;
    rep.histogram = burst_histogram(trace);

    long span = (long(sc.mem) + sc.Tdec + 1) * sc.slots;
    StreamDecoder dec(sc, trace);
    auto countable = [&](long t) { return t >= warmup && t <= last; };

    for (const auto& cluster : detail::cluster_runs(trace, span)) {
        long lo = cluster.front().start;
        long hi = cluster.back().start + cluster.back().len - 1;  // last slot
        if (fast_path) {
            bool clean_burst = cluster.size() == 1 &&
                               cluster.front().len <= sc.design_B &&
                               sc.certified_bursts;
            long erased = 0;
            for (const auto& r : cluster) erased += r.len;
            bool clean_subset = erased <= sc.design_N &&
                                hi - lo + 1 <= sc.design_window &&
                                sc.certified_subsets;
            if (clean_burst || clean_subset) continue;  // recovered by design
        }

        long s_lo = lo / sc.slots, s_hi = hi / sc.slots;
        std::vector<long> esteps;
        for (long t = s_lo; t <= s_hi; ++t)
            if (dec.step_erased(t)) esteps.push_back(t);
        if (esteps.empty()) continue;

        dec.forget_before(s_lo - sc.mem - 1);
        // Relaxed filter: one joint elimination over the cluster with every
        // equation up to the last deadline. Anything still unknown here is
        // unknown under any per-deadline decode.
        EliminationPass relax;
        relax.u_lo = s_lo;
        relax.slot_hi = sc.deadline_slot(s_hi);
        relax.u_hi = relax.slot_hi / sc.slots;
        relax.e_lo = s_lo;
        dec.eliminate(relax);
        bool any_candidate = false;
        for (long t : esteps)
            for (int j = 0; j < sc.group && !any_candidate; ++j)
                if (dec.symbol_known(t, j)) any_candidate = true;

        if (!any_candidate) {
            for (long t : esteps)
                if (countable(t)) rep.lost += sc.group;
            continue;
        }
        // Exact replay: fresh state, sequential per-deadline decisions.
        StreamDecoder replay(sc, trace);
        for (long t : esteps) {
            decide_step(replay, t, policy);
            if (countable(t))
                for (int j = 0; j < sc.group; ++j)
                    if (!replay.symbol_known(t, j)) ++rep.lost;
        }
    }

    rep.loss_rate = rep.symbols ? double(rep.lost) / double(rep.symbols) : 0.0;
    rep.runtime_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
    return rep;
}

// ---------------------------------------------------------------------------
// Grid sweeps

struct SweepCode {
    std::string family, params;
    const StreamCode* code = nullptr;
    DecodePolicy policy = DecodePolicy::Oracle;
};

enum class GridAxis { Eps, Beta, Alpha };

struct SweepConfig {
    std::vector<SweepCode> codes;
    std::string channel = "ge";  // "ge" | "fritchman"
    GEParams ge;
    FritchmanParams fritchman;
    GridAxis axis = GridAxis::Eps;
    std::vector<double> grid;  // one trace per grid value, shared by all codes
    long length = 10000000;    // slots
    std::uint64_t master_seed = 1;
    double alpha_scale = 1;
};

inline unsigned sim_threads() {
    if (const char* s = std::getenv("FEC_THREADS")) {
        long v = std::atol(s);
        if (v >= 1) return unsigned(v);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

inline std::vector<SimReport> sweep(const SweepConfig& cfg) {
    if (cfg.grid.empty() || cfg.codes.empty())
        throw std::invalid_argument("sweep: empty grid or code list");
    std::vector<SimReport> rows(cfg.grid.size() * cfg.codes.size());
    auto work = [&](std::size_t g) {
        std::uint64_t seed = detail::mix_seed(cfg.master_seed, g);
        ErasureTrace trace;
        if (cfg.channel == "fritchman") {
            FritchmanParams p = cfg.fritchman;
            (cfg.axis == GridAxis::Eps
                 ? p.eps
                 : cfg.axis == GridAxis::Beta ? p.beta : p.alpha) = cfg.grid[g];
            trace = sample_fritchman(p, cfg.length, seed);
        } else {
            GEParams p = cfg.ge;
            (cfg.axis == GridAxis::Eps
                 ? p.eps
                 : cfg.axis == GridAxis::Beta ? p.beta : p.alpha) = cfg.grid[g];
            trace = sample_ge(p, cfg.length, seed);
        }
        for (std::size_t c = 0; c < cfg.codes.size(); ++c) {
            const SweepCode& sc = cfg.codes[c];
            SimReport r = run(*sc.code, trace, sc.policy);
            r.family = sc.family;
            r.params = sc.params;
            r.channel = cfg.channel;
            r.epsilon_or_beta = cfg.grid[g];
            r.seed = seed;
            r.alpha_scale = cfg.alpha_scale;
            rows[g * cfg.codes.size() + c] = std::move(r);
        }
    };
    unsigned nt = std::min<unsigned>(sim_threads(), unsigned(cfg.grid.size()));
    if (nt <= 1) {
        for (std::size_t g = 0; g < cfg.grid.size(); ++g) work(g);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < nt; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t g = w; g < cfg.grid.size(); g += nt) work(g);
            });
        for (auto& th : pool) th.join();
    }
    return rows;
}

// runtime_ms is the only nondeterministic column; drop it when comparing runs.
inline std::string sweep_csv(const std::vector<SimReport>& rows,
                             bool include_runtime = true) {
    std::ostringstream os;
    os << "family,params,channel,epsilon_or_beta,seed,symbols,lost,loss_rate";
    if (include_runtime) os << ",runtime_ms";
    os << "\n";
    for (const auto& r : rows) {
        os << r.family << ',' << r.params << ',' << r.channel << ','
           << r.epsilon_or_beta << ',' << r.seed << ',' << r.symbols << ','
           << r.lost << ',' << r.loss_rate;
        if (include_runtime) os << ',' << long(r.runtime_ms + 0.5);
        os << "\n";
    }
    return os.str();
}

inline std::string histogram_csv(const std::map<long, long>& h) {
    std::ostringstream os;
    os << "length,count\n";
    for (const auto& [len, cnt] : h) os << len << ',' << cnt << "\n";
    return os.str();
}

}  // namespace streamfec
