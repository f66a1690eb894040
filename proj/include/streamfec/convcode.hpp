// Systematic time-invariant convolutional codes over a finite field:
//   x[i] = (s[i], p[i]),  p[i] = sum_{t=0..m} s[i-t] * H_t
// with zero state before stream start. This module provides encoding,
// truncated generator matrices, column distance/span (by exhaustive codeword
// enumeration and by the equivalent erasure-recovery rank test), randomized
// code search, and certification of erasure-recovery guarantees over explicit
// pattern families.
//
// Randomized search stands in for algebraic strongly-MDS constructions: parity
// coefficients drawn uniformly from a large prime field almost surely give the
// maximal recovery properties, and the certifier makes that unconditional per
// instance rather than probabilistic.

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "matrix.hpp"

namespace streamfec {

struct SystematicConvCode {
    const Field* f = nullptr;
    int kbar = 0, nbar = 0, mbar = 0;
    std::vector<Matrix> H;  // mbar+1 matrices, each kbar x (nbar-kbar)

    int parity() const { return nbar - kbar; }

    void validate() const {
        if (kbar < 1 || nbar <= kbar || mbar < 0)
            throw std::invalid_argument("convcode: bad (k,n,m)");
        if (int(H.size()) != mbar + 1)
            throw std::invalid_argument("convcode: need m+1 parity matrices");
        for (const Matrix& h : H)
            if (int(h.rows()) != kbar || int(h.cols()) != parity() || h.field() != *f)
                throw std::invalid_argument("convcode: parity matrix shape/field mismatch");
    }

    // history[t] = s[i-t]; history may be shorter than m+1 near stream start.
    std::vector<std::uint64_t> encode_step(
        const std::vector<std::vector<std::uint64_t>>& history) const {
        std::vector<std::uint64_t> x(nbar, 0);
        if (history.empty() || int(history[0].size()) != kbar)
            throw std::invalid_argument("convcode: bad source vector");
        for (int l = 0; l < kbar; ++l) x[l] = history[0][l];
        for (int t = 0; t <= mbar && t < int(history.size()); ++t)
            for (int l = 0; l < kbar; ++l) {
                std::uint64_t v = history[t][l];
                if (v == 0) continue;
                for (int c = 0; c < parity(); ++c)
                    x[kbar + c] = f->add(x[kbar + c], f->mul(v, H[t].at(l, c)));
            }
        return x;
    }

    // Block upper-triangular generator of the code truncated to steps 0..j,
    // shape (j+1)k x (j+1)n, zero initial state.
    Matrix truncated_generator(int j) const {
        Matrix g(*f, std::size_t(j + 1) * kbar, std::size_t(j + 1) * nbar);
        for (int bi = 0; bi <= j; ++bi)
            for (int bj = bi; bj <= j; ++bj) {
                int t = bj - bi;
                if (t > mbar) continue;
                for (int l = 0; l < kbar; ++l) {
                    if (t == 0) g.at(bi * kbar + l, bj * nbar + l) = 1;
                    for (int c = 0; c < parity(); ++c)
                        g.at(bi * kbar + l, bj * nbar + kbar + c) = H[t].at(l, c);
                }
            }
        return g;
    }
};

inline SystematicConvCode random_systematic(int kbar, int nbar, int mbar,
                                            const Field& f, std::uint64_t seed) {
    if (f.kind() != Field::Kind::Prime || f.size() < (1u << 20))
        throw FieldError("random_systematic: wants a prime field with p >= 2^20");
    SystematicConvCode c;
    c.f = &f;
    c.kbar = kbar;
    c.nbar = nbar;
    c.mbar = mbar;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint64_t> d(0, f.size() - 1);
    for (int t = 0; t <= mbar; ++t) {
        Matrix h(f, kbar, nbar - kbar);
        for (int l = 0; l < kbar; ++l)
            for (int cc = 0; cc < nbar - kbar; ++cc) h.at(l, cc) = d(rng);
        c.H.push_back(h);
    }
    c.validate();
    return c;
}

// ---------------------------------------------------------------------------
// Erasure-pattern families

enum class Granularity { Symbol, SubSymbol };

struct PatternFamily {
    std::string descriptor;
    std::vector<std::vector<int>> patterns;  // each sorted ascending
    std::size_t population = 0;              // full family size before sampling
    bool sampled = false;
};

inline constexpr std::size_t kPatternCap = 1000000;

namespace detail {

inline std::size_t binom(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        // saturate rather than overflow; callers only compare against the cap
        if (r > (std::size_t(1) << 60) / (n - k + i)) return std::size_t(-1);
        r = r * (n - k + i) / i;
    }
    return r;
}

inline void all_subsets(int window, int size, std::vector<std::vector<int>>& out) {
    std::vector<int> idx(size);
    for (int i = 0; i < size; ++i) idx[i] = i;
    if (size == 0) { out.push_back({}); return; }
    if (size > window) return;
    for (;;) {
        out.push_back(idx);
        int i = size;
        while (i > 0 && idx[i - 1] == window - size + (i - 1)) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (int j = i; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace detail

// All subsets of [0, window) of size 1..N. Falls back to uniform sampling past
// the pattern cap (recorded in the family and the certificate).
inline PatternFamily family_subsets_upto(int N, int window,
                                         std::size_t cap = kPatternCap,
                                         std::uint64_t seed = 0) {
    PatternFamily fam;
    fam.descriptor = "subsets<=" + std::to_string(N) + " in [0," +
                     std::to_string(window) + ")";
    std::size_t total = 0;
    for (int s = 1; s <= N && s <= window; ++s) {
        std::size_t b = detail::binom(window, s);
        total = (b == std::size_t(-1)) ? b : total + b;
        if (total >= std::size_t(-1) - 1) { total = std::size_t(-1); break; }
    }
    fam.population = total;
    if (total != std::size_t(-1) && total <= cap) {
        for (int s = 1; s <= N && s <= window; ++s)
            detail::all_subsets(window, s, fam.patterns);
        return fam;
    }
    fam.sampled = true;
    std::mt19937_64 rng(seed ^ 0x5eedfa11u);
    std::uniform_int_distribution<int> dsz(1, std::min(N, window));
    std::uniform_int_distribution<int> dpos(0, window - 1);
    while (fam.patterns.size() < cap) {
        int s = dsz(rng);
        std::vector<int> p;
        while (int(p.size()) < s) {
            int x = dpos(rng);
            if (std::find(p.begin(), p.end(), x) == p.end()) p.push_back(x);
        }
        std::sort(p.begin(), p.end());
        fam.patterns.push_back(p);
    }
    return fam;
}

// All bursts of length 1..B at every offset inside [0, window).
inline PatternFamily family_bursts_upto(int B, int window) {
    PatternFamily fam;
    fam.descriptor = "bursts<=" + std::to_string(B) + " in [0," +
                     std::to_string(window) + ")";
    for (int len = 1; len <= B; ++len)
        for (int off = 0; off + len <= window; ++off) {
            std::vector<int> p(len);
            for (int i = 0; i < len; ++i) p[i] = off + i;
            fam.patterns.push_back(p);
        }
    fam.population = fam.patterns.size();
    return fam;
}

// Bursts anchored at position 0, lengths 1..B.
inline PatternFamily family_bursts_anchored(int B) {
    PatternFamily fam;
    fam.descriptor = "anchored bursts<=" + std::to_string(B);
    for (int len = 1; len <= B; ++len) {
        std::vector<int> p(len);
        for (int i = 0; i < len; ++i) p[i] = i;
        fam.patterns.push_back(p);
    }
    fam.population = fam.patterns.size();
    return fam;
}

// A burst of length 1..B starting at 0 followed by up to I isolated erasures
// after a gap (the burst-then-isolated shape of the layered decoders).
inline PatternFamily family_burst_then_isolated(int B, int I, int window,
                                                std::size_t cap = kPatternCap) {
    PatternFamily fam;
    fam.descriptor = "burst<=" + std::to_string(B) + "+isolated<=" +
                     std::to_string(I) + " in [0," + std::to_string(window) + ")";
    for (int len = 1; len <= B && len < window; ++len) {
        std::vector<std::vector<int>> tails;
        for (int s = 1; s <= I; ++s)
            detail::all_subsets(window - len - 1, s, tails);
        for (const auto& tail : tails) {
            std::vector<int> p(len);
            for (int i = 0; i < len; ++i) p[i] = i;
            for (int t : tail) p.push_back(len + 1 + t);
            fam.patterns.push_back(p);
            if (fam.patterns.size() > cap) break;
        }
    }
    fam.population = fam.patterns.size();
    return fam;
}

inline PatternFamily family_union(std::string descriptor,
                                  std::initializer_list<PatternFamily> fams) {
    PatternFamily out;
    out.descriptor = std::move(descriptor);
    for (const auto& f : fams) {
        out.patterns.insert(out.patterns.end(), f.patterns.begin(), f.patterns.end());
        out.population += f.population;
        out.sampled = out.sampled || f.sampled;
    }
    std::sort(out.patterns.begin(), out.patterns.end());
    out.patterns.erase(std::unique(out.patterns.begin(), out.patterns.end()),
                       out.patterns.end());
    return out;
}

// ---------------------------------------------------------------------------
// Recovery certification

struct RecoveryCertificate {
    std::string family;
    Granularity granularity = Granularity::Symbol;
    int delay = 0;
    std::size_t checked = 0;
    std::size_t population = 0;
    bool sampled = false;
    bool pass = false;
    std::size_t failures = 0;
    std::vector<int> counterexample;  // lexicographically smallest failing pattern
};

namespace detail {

// Recoverability of target source steps under one erasure pattern, from the
// receiver's linear system: unknowns are erased source sub-symbols, equations
// are unerased parity sub-symbols of steps 0..delay (unerased systematic
// positions pin their source sub-symbols directly and are substituted out).
// Erasure decodability does not depend on transmitted values, so the system is
// solved with a zero right-hand side.
inline bool pattern_recoverable(const SystematicConvCode& code,
                                const std::vector<int>& pattern,
                                Granularity gran, int delay,
                                const std::vector<int>& target_steps) {
    const Field& f = *code.f;
    int kbar = code.kbar, nbar = code.nbar, par = code.parity();
    int W = delay + 1;
    auto pos_erased = [&](int t, int c) {
        int x = (gran == Granularity::Symbol) ? t : t * nbar + c;
        return std::binary_search(pattern.begin(), pattern.end(), x);
    };
    // unknown ids
    std::vector<int> unknown_id(std::size_t(W) * kbar, -1);
    int nunk = 0;
    for (int t = 0; t < W; ++t)
        for (int l = 0; l < kbar; ++l)
            if (pos_erased(t, l)) unknown_id[t * kbar + l] = nunk++;
    if (nunk == 0) return true;

    std::vector<std::vector<std::uint64_t>> rows;
    for (int t = 0; t < W; ++t)
        for (int c = kbar; c < nbar; ++c) {
            if (pos_erased(t, c)) continue;
            std::vector<std::uint64_t> row(nunk, 0);
            bool any = false;
            for (int d = 0; d <= code.mbar && d <= t; ++d) {
                const Matrix& h = code.H[d];
                for (int l = 0; l < kbar; ++l) {
                    int id = unknown_id[(t - d) * kbar + l];
                    if (id < 0) continue;
                    std::uint64_t v = h.at(l, c - kbar);
                    if (v == 0) continue;
                    row[id] = f.add(row[id], v);
                    any = true;
                }
            }
            if (any) rows.push_back(std::move(row));
        }
    Matrix a(f, rows.size(), nunk);
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (int j = 0; j < nunk; ++j) a.at(r, j) = rows[r][j];
    ErasureSolveReport rep = solve_erasures(a, std::vector<std::uint64_t>(rows.size(), 0));
    for (int t : target_steps)
        for (int l = 0; l < kbar; ++l) {
            int id = unknown_id[t * kbar + l];
            if (id >= 0 && !rep.is_determined(std::size_t(id))) return false;
        }
    return true;
}

}  // namespace detail

// Check a pattern family: every pattern must leave every target source step
// fully determined within the delay window. Targets given as step indices; an
// empty target list means "every erased source step".
inline RecoveryCertificate certify_recovery(const SystematicConvCode& code,
                                            const PatternFamily& family,
                                            Granularity gran, int delay,
                                            std::vector<int> target_steps = {}) {
    RecoveryCertificate cert;
    cert.family = family.descriptor;
    cert.granularity = gran;
    cert.delay = delay;
    cert.population = family.population;
    cert.sampled = family.sampled;
    int maxpos = (gran == Granularity::Symbol) ? delay + 1 : (delay + 1) * code.nbar;
    for (const auto& pat : family.patterns) {
        for (int p : pat)
            if (p < 0 || p >= maxpos)
                throw std::out_of_range("certify_recovery: pattern outside window");
        std::vector<int> targets = target_steps;
        if (targets.empty()) {
            for (int t = 0; t <= delay; ++t) {
                bool hit = false;
                for (int l = 0; l < code.kbar && !hit; ++l) {
                    int x = (gran == Granularity::Symbol) ? t : t * code.nbar + l;
                    hit = std::binary_search(pat.begin(), pat.end(), x);
                }
                if (hit) targets.push_back(t);
            }
        }
        ++cert.checked;
        if (!detail::pattern_recoverable(code, pat, gran, delay, targets)) {
            ++cert.failures;
            if (cert.counterexample.empty() || pat < cert.counterexample)
                cert.counterexample = pat;
        }
    }
    cert.pass = (cert.failures == 0);
    return cert;
}

// ---------------------------------------------------------------------------
// Column distance and span

struct DistanceOptions {
    std::uint64_t enum_cap = std::uint64_t(1) << 22;  // codeword enumeration cap
    bool allow_rank = true;
};

namespace detail {

// Visit every source stream s[0..T] with s[0] != 0; f(x-outputs) per stream.
template <class Fn>
inline void enumerate_codewords(const SystematicConvCode& code, int T, Fn&& fn) {
    const Field& f = *code.f;
    std::uint64_t q = f.size();
    int cells = code.kbar * (T + 1);
    std::vector<std::uint64_t> s(cells, 0);
    std::vector<std::vector<std::uint64_t>> hist;
    std::vector<std::vector<std::uint64_t>> x(T + 1);
    for (;;) {
        // advance odometer
        int i = 0;
        while (i < cells && s[i] == q - 1) { s[i] = 0; ++i; }
        if (i == cells) break;
        ++s[i];
        bool s0_nonzero = false;
        for (int l = 0; l < code.kbar; ++l) s0_nonzero |= (s[l] != 0);
        if (!s0_nonzero) continue;
        for (int t = 0; t <= T; ++t) {
            hist.clear();
            for (int d = 0; d <= code.mbar && d <= t; ++d)
                hist.emplace_back(s.begin() + (t - d) * code.kbar,
                                  s.begin() + (t - d + 1) * code.kbar);
            x[t] = code.encode_step(hist);
        }
        fn(x);
    }
}

}  // namespace detail

inline std::uint64_t enumeration_cost(const SystematicConvCode& code, int T) {
    std::uint64_t q = code.f->size(), total = 1;
    for (int i = 0; i < code.kbar * (T + 1); ++i) {
        if (total > (std::uint64_t(1) << 62) / q) return std::uint64_t(-1);
        total *= q;
    }
    return total;
}

inline int column_distance_enumerate(const SystematicConvCode& code, int T,
                                     Granularity gran,
                                     const DistanceOptions& opt = {}) {
    if (enumeration_cost(code, T) > opt.enum_cap)
        throw std::runtime_error("column_distance: enumeration cap exceeded");
    int best = INT32_MAX;
    detail::enumerate_codewords(code, T, [&](const std::vector<std::vector<std::uint64_t>>& x) {
        int w = 0;
        for (const auto& xt : x) {
            if (gran == Granularity::Symbol) {
                for (std::uint64_t v : xt)
                    if (v != 0) { ++w; break; }
            } else {
                for (std::uint64_t v : xt)
                    if (v != 0) ++w;
            }
        }
        best = std::min(best, w);
    });
    return best;
}

inline int column_span_enumerate(const SystematicConvCode& code, int T,
                                 const DistanceOptions& opt = {}) {
    if (enumeration_cost(code, T) > opt.enum_cap)
        throw std::runtime_error("column_span: enumeration cap exceeded");
    int best = INT32_MAX;
    detail::enumerate_codewords(code, T, [&](const std::vector<std::vector<std::uint64_t>>& x) {
        int first = -1, last = -1;
        for (int t = 0; t < int(x.size()); ++t)
            for (std::uint64_t v : x[t])
                if (v != 0) {
                    if (first < 0) first = t;
                    last = t;
                    break;
                }
        if (first >= 0) best = std::min(best, last - first + 1);
    });
    return best;
}

// Rank route, using the erasure-correction equivalences: d_T is the smallest N
// such that some N-subset of positions (containing an erasure of step 0)
// defeats recovery of s[0] by time T; c_T is the smallest L such that the
// length-L burst starting at 0 defeats it. For systematic codes the minimizing
// codeword has a nonzero output at step 0, which anchors both searches at 0.
inline int column_distance_rank(const SystematicConvCode& code, int T,
                                Granularity gran) {
    int positions = (gran == Granularity::Symbol) ? T + 1 : (T + 1) * code.nbar;
    for (int N = 1; N <= positions; ++N) {
        std::vector<std::vector<int>> subs;
        detail::all_subsets(positions, N, subs);
        for (const auto& pat : subs) {
            // only patterns erasing part of s[0] can defeat its recovery
            bool touches0 = false;
            for (int p : pat) {
                int step_sys = (gran == Granularity::Symbol)
                                   ? (p == 0)
                                   : (p < code.kbar);
                if (step_sys) { touches0 = true; break; }
            }
            if (!touches0) continue;
            if (!detail::pattern_recoverable(code, pat, gran, T, {0})) return N;
        }
    }
    return positions + 1;
}

inline int column_span_rank(const SystematicConvCode& code, int T) {
    for (int L = 1; L <= T + 1; ++L) {
        std::vector<int> pat(L);
        for (int i = 0; i < L; ++i) pat[i] = i;
        if (!detail::pattern_recoverable(code, pat, Granularity::Symbol, T, {0}))
            return L;
    }
    return T + 2;
}

inline int column_distance(const SystematicConvCode& code, int T, Granularity gran,
                           const DistanceOptions& opt = {}) {
    if (enumeration_cost(code, T) <= opt.enum_cap)
        return column_distance_enumerate(code, T, gran, opt);
    if (!opt.allow_rank)
        throw std::runtime_error("column_distance: cap exceeded, rank route disabled");
    return column_distance_rank(code, T, gran);
}

inline int column_span(const SystematicConvCode& code, int T,
                       const DistanceOptions& opt = {}) {
    if (enumeration_cost(code, T) <= opt.enum_cap)
        return column_span_enumerate(code, T, opt);
    if (!opt.allow_rank)
        throw std::runtime_error("column_span: cap exceeded, rank route disabled");
    return column_span_rank(code, T);
}

}  // namespace streamfec
