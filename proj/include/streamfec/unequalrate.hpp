// Unequal source-channel rate macro-packet codes (M channel packets per
// source symbol). The burst capacity has three achievable regimes:
//   plateau:    B' <= bM/(T+b)        rate T/(T+b)     n = T+b
//   steep:      B' >  bM/(T+b), T > b rate 1 - B/(M(T+b+1))  n = T+b+1
//   repetition: B' >  M/2,       T = b rate (M-B')/M    n = 1
// where B = bM + B'. The source is split into u (k^u) and v (k^v); parities
// p = sum_d v[i-d] H_d combine with the delayed u into q = p + u[i-T], and the
// three groups are reshaped into M equal columns: u fills columns from the
// front, q mirrors it from the back, v takes the middle (partial groups share
// the two boundary columns, u above v on the left, v above q on the right).
//
// The robust extension appends k^s parity sub-symbols per column protecting u
// against N isolated packet erasures per window, with
// k^s = ceil(N n / (M(T+1) - N)); an opt-in variant scales every per-column
// count so the pre-ceiling rational k^s becomes integral.
//
// Constituent coefficients are drawn from a large prime field and the whole
// code is certified against every burst <= B at every intra-macro offset
// (macro-level time invariance makes other offsets equivalent), retrying with
// fresh seeds.

#pragma once

#include "equalrate.hpp"

namespace streamfec {

enum class MacroCase { Plateau, Steep, Repetition };

struct MacroCodeSpec {
    std::string family = "unequal";  // "unequal" | "robust" | "adapted-ms"
    int M = 1, T = 0, B = 0, N = 0, W = INT_MAX;
    int b = 0, Bp = 0;  // B = b*M + Bp
    MacroCase kase = MacroCase::Plateau;
    int T_eff = 0;      // min(T, floor(W/M) - 1)
    int n = 0;          // sub-symbols per column before the robust tail
    int k = 0, ku = 0, kv = 0, ks = 0;
    int r = 0, rp = 0;  // k^u = r*n + r'
    int scale = 1;      // common multiplier for the rational-k^s variant
};

inline std::pair<int, int> split_burst(int B, int M) {
    if (B < 0 || M < 1) throw std::invalid_argument("split_burst: bad arguments");
    return {B / M, B % M};
}

// Exact burst capacity of the macro-packet channel with delay T.
inline Rational capacity(int M, int T, int B) {
    if (M < 1 || T < 0 || B < 0) throw std::invalid_argument("capacity: bad arguments");
    if (B == 0) return Rational(1);
    auto [b, Bp] = split_burst(B, M);
    if (T < b) return Rational(0);
    if (std::int64_t(Bp) * (T + b) <= std::int64_t(b) * M)
        return Rational(T, T + b);  // plateau (T=b gives 1/2)
    if (T > b) return Rational(std::int64_t(M) * (T + b + 1) - B,
                               std::int64_t(M) * (T + b + 1));
    return Rational(M - Bp, M);  // T = b, B' > M/2
}

// Rate of the delay-MT burst code run on the packet clock (Fig.-3 baseline).
inline Rational adapted_ms_rate(int M, int T, int B) {
    if (B > M * T) return Rational(0);
    return Rational(std::int64_t(M) * T, std::int64_t(M) * T + B);
}

// Pre-ceiling per-column robust parity count N n / (M(T+1) - N).
inline Rational robust_ks_rational(int M, int T, int B, int N) {
    int n = 0;
    {
        auto [b, Bp] = split_burst(B, M);
        if (T <= b) throw std::invalid_argument("robust_ks: needs T > b");
        bool plateau = std::int64_t(Bp) * (T + b) <= std::int64_t(b) * M;
        n = plateau ? T + b : T + b + 1;
    }
    return Rational(std::int64_t(N) * n, std::int64_t(M) * (T + 1) - N);
}

struct MacroCode {
    MacroCodeSpec spec;
    StreamCode sc;
    std::uint64_t seed = 0;
    DecodePolicy policy = DecodePolicy::Staged;
    std::vector<int> q_src;  // output coordinate -> partner u source (q only)

    Rational rate() const { return Rational(sc.k, sc.n); }
};

namespace detail {

// Resolve the Thm-3 regime and all per-macro counts.
inline MacroCodeSpec macro_spec(int M, int T, int B, int W) {
    MacroCodeSpec sp;
    sp.M = M;
    sp.T = T;
    sp.B = B;
    sp.W = W;
    auto [b, Bp] = split_burst(B, M);
    sp.b = b;
    sp.Bp = Bp;
    int T_eff = (W == INT_MAX) ? T : std::min(T, W / M - 1);
    sp.T_eff = T_eff;
    require(B >= 1, "macro code: B >= 1");
    require(T_eff >= b, "macro code: delay below burst span, rate is zero");
    if (std::int64_t(Bp) * (T_eff + b) <= std::int64_t(b) * M) {
        sp.kase = MacroCase::Plateau;
        sp.n = T_eff + b;
        sp.k = M * T_eff;
        sp.ku = M * b;
        sp.kv = M * (T_eff - b);
    } else if (T_eff > b) {
        sp.kase = MacroCase::Steep;
        sp.n = T_eff + b + 1;
        sp.k = M * sp.n - B;
        sp.ku = B;
        sp.kv = M * sp.n - 2 * B;
    } else {
        require(2 * Bp > M, "macro code: unreachable regime");
        sp.kase = MacroCase::Repetition;
        sp.n = 1;
        sp.k = sp.ku = M - Bp;
        sp.kv = 0;
    }
    if (sp.kase != MacroCase::Repetition) {
        sp.r = sp.ku / sp.n;
        sp.rp = sp.ku % sp.n;
        require(M - 2 * sp.r > 0 || (sp.rp == 0 && sp.kv == 0),
                "macro code: u and q overlap in the reshaping");
    }
    return sp;
}

inline void macro_scale(MacroCodeSpec& sp, int scale) {
    sp.scale = scale;
    sp.n *= scale;
    sp.k *= scale;
    sp.ku *= scale;
    sp.kv *= scale;
    sp.r = sp.ku / sp.n;
    sp.rp = sp.ku % sp.n;
}

// Reshaped skeleton: systematic placement, roles, q partners and the delayed-u
// shift. Parity coefficients (v layer into q, u layer into the robust tails)
// are left zero for the builder to fill.
inline MacroCode macro_skeleton(const MacroCodeSpec& sp,
                                std::shared_ptr<const Field> f) {
    MacroCode mc;
    mc.spec = sp;
    StreamCode& sc = mc.sc;
    sc.field = std::move(f);
    sc.k = sp.ku + sp.kv;
    sc.n = sp.M * (sp.n + sp.ks);
    sc.mem = sp.T_eff;
    sc.Tdec = sp.T;
    sc.slots = sp.M;
    sc.G.assign(sc.mem + 1, Matrix(*sc.field, sc.k, sc.n));
    sc.sys_pos.assign(sc.k, -1);
    sc.slot_of.resize(sc.n);
    sc.out_role.assign(sc.n, Role::P);
    sc.src_role.assign(sc.k, Role::V);
    std::fill(sc.src_role.begin(), sc.src_role.begin() + sp.ku, Role::U);
    mc.q_src.assign(sc.n, -1);

    int pos = 0, vi = 0;
    for (int c = 0; c < sp.M; ++c) {
        std::vector<std::pair<Role, int>> col;  // (role, u/v/q index)
        if (sp.kase == MacroCase::Repetition) {
            if (c < sp.ku)
                col.push_back({Role::U, c});
            else if (c >= sp.Bp)
                col.push_back({Role::Q, c - sp.Bp});
            else
                col.push_back({Role::P, -1});  // structural zero filler
        } else {
            int u_lo = c * sp.n, u_hi = std::min(sp.ku, (c + 1) * sp.n);
            int jq = sp.M - 1 - c;
            int q_lo = jq * sp.n, q_hi = std::min(sp.ku, (jq + 1) * sp.n);
            for (int l = u_lo; l < u_hi; ++l) col.push_back({Role::U, l});
            int mid = sp.n - std::max(0, u_hi - u_lo) - std::max(0, q_hi - q_lo);
            for (int t = 0; t < mid; ++t) col.push_back({Role::V, vi++});
            for (int l = q_lo; l < q_hi; ++l) col.push_back({Role::Q, l});
        }
        for (int t = 0; t < sp.ks; ++t) col.push_back({Role::P, c * sp.ks + t});
        for (auto [role, idx] : col) {
            sc.slot_of[pos] = c;
            sc.out_role[pos] = role;
            switch (role) {
                case Role::U:
                    sc.sys_pos[idx] = pos;
                    sc.G[0].at(idx, pos) = 1;
                    break;
                case Role::V:
                    sc.sys_pos[sp.ku + idx] = pos;
                    sc.G[0].at(sp.ku + idx, pos) = 1;
                    break;
                case Role::Q:
                    mc.q_src[pos] = idx;
                    sc.G[sp.T_eff].at(idx, pos) = 1;  // q = p + u[i - T_eff]
                    break;
                case Role::P:
                    break;
            }
            ++pos;
        }
    }
    if (pos != sc.n || vi != sp.kv)
        throw std::logic_error("macro layout: reshaping does not partition");
    for (int l = 0; l < sc.k; ++l)
        if (sc.sys_pos[l] < 0) throw std::logic_error("macro layout: missing source");
    return mc;
}

// Bursts of length 1..B starting at every column of the first erased macro.
inline PatternFamily macro_burst_family(int M, int B) {
    PatternFamily fam;
    fam.descriptor = "macro bursts<=" + std::to_string(B) + ", " +
                     std::to_string(M) + " start offsets";
    for (int len = 1; len <= B; ++len)
        for (int off = 0; off < M; ++off) {
            std::vector<int> p(len);
            for (int i = 0; i < len; ++i) p[i] = off + i;
            fam.patterns.push_back(p);
        }
    fam.population = fam.patterns.size();
    return fam;
}

}  // namespace detail

// Capacity-achieving burst code for the macro-packet channel.
inline MacroCode build_unequal(int M, int T, int B,
                               std::shared_ptr<const Field> field = nullptr,
                               std::uint64_t seed = 0, int W = INT_MAX) {
    MacroCodeSpec sp = detail::macro_spec(M, T, B, W);
    auto f = detail::pick_field(std::move(field), Backend::RandomSmds);
    if (f->kind() != Field::Kind::Prime || f->size() < (1u << 20))
        throw FieldError("macro code wants a prime field >= 2^20");

    for (int attempt = 0; attempt < kCertRetryBudget; ++attempt) {
        std::uint64_t s = seed + attempt;
        MacroCode mc = detail::macro_skeleton(sp, f);
        std::mt19937_64 rng(s ^ 0x6d616372u);
        std::uniform_int_distribution<std::uint64_t> dist(0, f->size() - 1);
        for (int pos = 0; pos < mc.sc.n; ++pos) {
            if (mc.sc.out_role[pos] != Role::Q || sp.kase == MacroCase::Repetition)
                continue;
            for (int d = 0; d <= sp.T_eff; ++d)
                for (int vj = 0; vj < sp.kv; ++vj)
                    mc.sc.G[d].at(sp.ku + vj, pos) = dist(rng);
        }
        mc.sc.design_N = 1;
        mc.sc.design_B = B;
        mc.sc.design_window = M * (sp.T_eff + 1);
        mc.sc.finalize();
        auto cert = certify_stream(mc.sc, detail::macro_burst_family(M, B),
                                   DecodePolicy::Staged);
        mc.sc.certified_bursts = cert.pass;
        if (cert.pass) {
            mc.seed = s;
            return mc;
        }
        if (attempt + 1 == kCertRetryBudget) throw CertificationError(cert);
    }
    throw std::logic_error("unreachable");
}

// Robust extension: tolerates any N isolated packet erasures per M(T+1)-packet
// window in addition to the design burst.
inline MacroCode build_robust(int M, int T, int B, int N,
                              std::shared_ptr<const Field> field = nullptr,
                              std::uint64_t seed = 0, bool rational_ks = false,
                              std::size_t subset_cap = 2000) {
    if (N == 0) return build_unequal(M, T, B, std::move(field), seed);
    MacroCodeSpec sp = detail::macro_spec(M, T, B, INT_MAX);
    detail::require(sp.T_eff > sp.b, "robust code: needs T > b");
    detail::require(
        N >= 1 && std::int64_t(N) * (T + sp.b) <= std::int64_t(T) * M * sp.b,
        "robust code: N exceeds the feasibility bound");
    Rational ks_rat(std::int64_t(N) * sp.n, std::int64_t(M) * (T + 1) - N);
    if (rational_ks) {
        detail::macro_scale(sp, int(ks_rat.den));
        sp.ks = int(ks_rat.num);
    } else {
        sp.ks = int(ks_rat.ceil());
    }
    sp.family = "robust";
    sp.N = N;
    auto f = detail::pick_field(std::move(field), Backend::RandomSmds);
    if (f->kind() != Field::Kind::Prime || f->size() < (1u << 20))
        throw FieldError("macro code wants a prime field >= 2^20");

    for (int attempt = 0; attempt < kCertRetryBudget; ++attempt) {
        std::uint64_t s = seed + attempt;
        MacroCode mc = detail::macro_skeleton(sp, f);
        std::mt19937_64 rng(s ^ 0x726f6275u);
        std::uniform_int_distribution<std::uint64_t> dist(0, f->size() - 1);
        for (int pos = 0; pos < mc.sc.n; ++pos) {
            if (mc.sc.out_role[pos] == Role::Q) {
                for (int d = 0; d <= sp.T_eff; ++d)
                    for (int vj = 0; vj < sp.kv; ++vj)
                        mc.sc.G[d].at(sp.ku + vj, pos) = dist(rng);
            } else if (mc.sc.out_role[pos] == Role::P) {
                for (int d = 0; d <= sp.T_eff; ++d)
                    for (int lu = 0; lu < sp.ku; ++lu)
                        mc.sc.G[d].at(lu, pos) = dist(rng);
            }
        }
        mc.sc.design_N = N;
        mc.sc.design_B = B;
        mc.sc.design_window = M * (T + 1);
        mc.sc.finalize();
        auto bcert = certify_stream(mc.sc, detail::macro_burst_family(M, B),
                                    DecodePolicy::Staged);
        mc.sc.certified_bursts = bcert.pass;
        if (bcert.pass) {
            auto fam = family_subsets_upto(N, mc.sc.design_window, subset_cap, s);
            auto ncert = certify_stream(mc.sc, fam, DecodePolicy::Staged);
            mc.sc.certified_subsets = ncert.pass && !fam.sampled;
            if (ncert.pass) {
                mc.seed = s;
                return mc;
            }
            if (attempt + 1 == kCertRetryBudget) throw CertificationError(ncert);
        } else if (attempt + 1 == kCertRetryBudget) {
            throw CertificationError(bcert);
        }
    }
    throw std::logic_error("unreachable");
}

// Baseline: the equal-rate burst code run on the packet clock with delay
// T' = MT packets, so packet (i,j) is recovered when packet (i+T, j) arrives.
inline MacroCode build_adapted_ms(int M, int T, int B,
                                  std::shared_ptr<const Field> field = nullptr,
                                  std::uint64_t seed = 0) {
    detail::require(B >= 1 && B <= M * T, "adapted-ms: needs 1 <= B <= MT");
    LayeredCode g = build_genms(B, M * T, INT_MAX, std::move(field), seed);
    MacroCode mc;
    mc.spec.family = "adapted-ms";
    mc.spec.M = M;
    mc.spec.T = T;
    mc.spec.T_eff = T;
    mc.spec.B = B;
    mc.spec.b = B / M;
    mc.spec.Bp = B % M;
    mc.spec.n = M * T + B;
    mc.spec.k = mc.spec.ku = g.ku;
    mc.spec.kv = g.kv;
    mc.seed = g.seed;
    mc.sc = std::move(g.sc);
    return mc;
}

// Appendix-style worst-case accounting: for a burst of the design length
// starting at column j (1-based) of macro 0, the number of v sub-symbols and
// usable-parity slots knocked out after u-cancellation: erased v positions in
// macros [0, T_eff], q positions inside erased packets, and q positions of
// macro T_eff whose partner u packet of macro 0 is erased.
inline long worst_case_count(const MacroCode& mc, int j) {
    const MacroCodeSpec& sp = mc.spec;
    if (j < 1 || j > sp.M - sp.r)
        throw std::out_of_range("worst_case_count: burst start out of range");
    const StreamCode& sc = mc.sc;
    auto erased = [&](long slot) { return slot >= j - 1 && slot < j - 1 + sp.B; };
    long count = 0;
    for (long t = 0; t <= sc.mem; ++t)
        for (int c = 0; c < sc.n; ++c) {
            long slot = t * sc.slots + sc.slot_of[c];
            if (sc.out_role[c] == Role::V) {
                if (erased(slot)) ++count;
            } else if (sc.out_role[c] == Role::Q) {
                if (erased(slot))
                    ++count;
                else if (t == sc.mem &&
                         erased(sc.slot_of[sc.sys_pos[mc.q_src[c]]]))
                    ++count;  // parity interfered by an erased u packet
            }
        }
    return count;
}

}  // namespace streamfec
