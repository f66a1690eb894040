// Erasure traces and channel models: the deterministic sliding-window class
// C(N,B,W), periodic converse-style traces, Gilbert-Elliott and Fritchman
// samplers, and burst statistics.
//
// RNG: std::mt19937_64 throughout. The C++ standard pins its output sequence,
// so identical seeds reproduce identical traces bit-for-bit on any platform.

#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "convcode.hpp"  // PatternFamily

namespace streamfec {

class ErasureTrace {
public:
    ErasureTrace() = default;
    explicit ErasureTrace(long length) : len_(length), bits_((length + 63) / 64, 0) {}

    long length() const { return len_; }
    bool erased(long i) const {
        if (i < 0 || i >= len_) return false;
        return (bits_[std::size_t(i) >> 6] >> (i & 63)) & 1;
    }
    void set(long i, bool e = true) {
        if (i < 0 || i >= len_) throw std::out_of_range("trace: index out of range");
        std::uint64_t m = std::uint64_t(1) << (i & 63);
        if (e)
            bits_[std::size_t(i) >> 6] |= m;
        else
            bits_[std::size_t(i) >> 6] &= ~m;
    }
    long erasure_count() const {
        long n = 0;
        for (std::uint64_t w : bits_) n += __builtin_popcountll(w);
        return n;
    }

    // "FECTRACE v1 length=L" header, then run lengths of alternating
    // received/erased spans (starting with a received span, possibly 0).
    void serialize(std::ostream& os) const {
        os << "FECTRACE v1 length=" << len_ << "\n";
        long i = 0;
        bool state = false;  // current run is received
        while (i < len_) {
            long j = i;
            while (j < len_ && erased(j) == state) ++j;
            os << (j - i);
            state = !state;
            i = j;
            if (i < len_) os << ' ';
        }
        if (len_ == 0) os << 0;
        os << "\n";
    }
    std::string serialize() const {
        std::ostringstream ss;
        serialize(ss);
        return ss.str();
    }

    static ErasureTrace parse(std::istream& is) {
        std::string header;
        std::getline(is, header);
        long len = -1;
        if (header.rfind("FECTRACE v1 length=", 0) == 0)
            len = std::stol(header.substr(19));
        if (len < 0) throw std::runtime_error("trace: bad header");
        ErasureTrace t(len);
        long i = 0, run = 0;
        bool state = false;
        while (is >> run) {
            if (run < 0 || i + run > len) throw std::runtime_error("trace: bad run length");
            if (state)
                for (long k = 0; k < run; ++k) t.set(i + k);
            i += run;
            state = !state;
        }
        if (i != len) throw std::runtime_error("trace: runs do not cover length");
        return t;
    }
    static ErasureTrace parse(const std::string& s) {
        std::istringstream ss(s);
        return parse(ss);
    }

private:
    long len_ = 0;
    std::vector<std::uint64_t> bits_;
};

// ---------------------------------------------------------------------------
// Sliding-window admissibility

struct TraceValidation {
    bool valid = true;
    long first_bad_window = -1;
};

// Every length-W window must contain either a single burst of length <= B or
// at most N erasures in arbitrary positions.
inline TraceValidation validate_trace(const ErasureTrace& t, int N, int B, int W) {
    if (W <= B) throw std::invalid_argument("validate_trace: requires W >= B+1");
    TraceValidation r;
    long L = t.length();
    for (long w = 0; w + W <= L; ++w) {
        int count = 0;
        long first = -1, last = -1;
        bool contiguous = true;
        for (long i = w; i < w + W; ++i) {
            if (!t.erased(i)) continue;
            if (first < 0)
                first = i;
            else if (i != last + 1)
                contiguous = false;
            last = i;
            ++count;
        }
        bool ok = (count <= N) || (contiguous && count <= B);
        if (!ok) {
            r.valid = false;
            r.first_bad_window = w;
            return r;
        }
    }
    return r;
}

// All admissible single-window patterns: bursts of length 1..B at every offset
// in [0, T_eff], plus every <=N subset (deduplicated).
inline PatternFamily enumerate_window_patterns(int N, int B, int T_eff,
                                               std::size_t cap = kPatternCap,
                                               std::uint64_t seed = 0) {
    PatternFamily fam = family_union(
        "window patterns N=" + std::to_string(N) + " B=" + std::to_string(B) +
            " T_eff=" + std::to_string(T_eff),
        {family_bursts_upto(B, T_eff + 1), family_subsets_upto(N, T_eff + 1, cap, seed)});
    return fam;
}

inline ErasureTrace periodic_trace(long period, long burst_len, long total_len) {
    if (burst_len > period) throw std::invalid_argument("periodic_trace: burst > period");
    ErasureTrace t(total_len);
    for (long i = 0; i < total_len; ++i)
        if (i % period < burst_len) t.set(i);
    return t;
}

// ---------------------------------------------------------------------------
// Random channels

struct GEParams {
    double alpha = 0;  // good -> bad
    double beta = 1;   // bad -> good
    double eps = 0;    // loss probability in the good state; bad state always loses

    void validate() const {
        for (double p : {alpha, beta, eps})
            if (!(p >= 0.0 && p <= 1.0))
                throw std::invalid_argument("GE params must be probabilities");
    }
};

struct FritchmanParams {
    int bad_states = 1;  // chain E_1 -> E_2 -> ... -> E_N, exit to good w.p. beta
    double alpha = 0;    // good -> E_1
    double beta = 1;
    double eps = 0;

    void validate() const {
        if (bad_states < 1) throw std::invalid_argument("Fritchman: bad_states >= 1");
        for (double p : {alpha, beta, eps})
            if (!(p >= 0.0 && p <= 1.0))
                throw std::invalid_argument("Fritchman params must be probabilities");
    }
};

// Stationary loss rate of the Gilbert-Elliott channel.
inline double ge_stationary_loss(double alpha, double beta, double eps) {
    if (alpha + beta <= 0) throw std::invalid_argument("ge_stationary_loss: alpha+beta > 0");
    return beta / (alpha + beta) * eps + alpha / (alpha + beta);
}

inline ErasureTrace sample_ge(const GEParams& p, long length, std::uint64_t seed) {
    p.validate();
    ErasureTrace t(length);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    bool bad = false;  // start in the good state
    for (long i = 0; i < length; ++i) {
        if (bad) {
            t.set(i);
            if (u(rng) < p.beta) bad = false;
        } else {
            if (p.eps > 0 && u(rng) < p.eps) t.set(i);
            if (u(rng) < p.alpha) bad = true;
        }
    }
    return t;
}

inline ErasureTrace sample_fritchman(const FritchmanParams& p, long length,
                                     std::uint64_t seed) {
    p.validate();
    ErasureTrace t(length);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int state = 0;  // 0 = good, 1..bad_states = E_1..E_N
    for (long i = 0; i < length; ++i) {
        if (state == 0) {
            if (p.eps > 0 && u(rng) < p.eps) t.set(i);
            if (u(rng) < p.alpha) state = 1;
        } else {
            t.set(i);
            if (u(rng) < p.beta)
                state = 0;
            else if (state < p.bad_states)
                ++state;
        }
    }
    return t;
}

inline std::map<long, long> burst_histogram(const ErasureTrace& t) {
    std::map<long, long> h;
    long i = 0, L = t.length();
    while (i < L) {
        if (!t.erased(i)) { ++i; continue; }
        long j = i;
        while (j < L && t.erased(j)) ++j;
        ++h[j - i];
        i = j;
    }
    return h;
}

}  // namespace streamfec
