// Equal source-channel rate streaming codes (one packet per source symbol):
//   - strongly-MDS baseline: a certified random systematic convolutional code,
//     correcting N = B arbitrary erasures per window;
//   - genms: burst-optimal layered code. Source split into u (k^u = B) and
//     v (k^v = T_eff - B); v protected by diagonally embedded MDS parities,
//     combined with a delayed repetition of u: q[i] = p^v[i] + u[i - T_eff];
//   - midas: adds a second parity layer p^u protecting u against N isolated
//     erasures, sized k^s = B*N with splitting factor m = T_eff - N + 1.
// Backends: block-mds builds the parity layers from diagonally interleaved
// systematic MDS block codes (deterministic, small fields); random-smds draws
// the layer coefficients uniformly from a large prime field and certifies the
// recovery guarantees exhaustively, retrying with fresh seeds on failure.
//
// Rate-constrained variants (*_rated) fix the rate k/n and the delay and
// derive the correctable burst/isolated budget, for simulation comparisons at
// a common rate.

#pragma once

#include <climits>
#include <memory>

#include "rational.hpp"
#include "streamcode.hpp"

namespace streamfec {

enum class Backend { BlockMds, RandomSmds };

inline const char* backend_name(Backend b) {
    return b == Backend::BlockMds ? "block-mds" : "random-smds";
}

// Non-owning shared_ptr view of a long-lived field (the module-level defaults).
inline std::shared_ptr<const Field> share_field(const Field& f) {
    return std::shared_ptr<const Field>(&f, [](const Field*) {});
}

struct CertificationError : std::runtime_error {
    RecoveryCertificate certificate;
    explicit CertificationError(const RecoveryCertificate& cert)
        : std::runtime_error("certification failed on family '" + cert.family +
                             "' (" + std::to_string(cert.failures) + " of " +
                             std::to_string(cert.checked) + " patterns)"),
          certificate(cert) {}
};

inline constexpr int kCertRetryBudget = 8;

struct LayeredCode {
    StreamCode sc;
    std::string family;  // "smds" | "genms" | "midas"
    Backend backend = Backend::BlockMds;
    int N = 0, B = 0, T = 0, W = INT_MAX, T_eff = 0, m = 1;
    int ku = 0, kv = 0, ks = 0;
    std::uint64_t seed = 0;
    DecodePolicy policy = DecodePolicy::Staged;  // the construction's own decoder

    Rational rate() const { return Rational(sc.k, sc.n); }

    // The code is linear and time-invariant with memory T_eff, so it is a
    // plain systematic convolutional code; parity blocks are the generator
    // columns past the systematic prefix.
    SystematicConvCode flatten() const {
        SystematicConvCode c;
        c.f = sc.field.get();
        c.kbar = sc.k;
        c.nbar = sc.n;
        c.mbar = sc.mem;
        for (int d = 0; d <= sc.mem; ++d) {
            Matrix h(*sc.field, sc.k, sc.n - sc.k);
            for (int l = 0; l < sc.k; ++l)
                for (int cc = sc.k; cc < sc.n; ++cc)
                    h.at(l, cc - sc.k) = sc.G[d].at(l, cc);
            c.H.push_back(h);
        }
        c.validate();
        return c;
    }
};

// ---------------------------------------------------------------------------
// Stream-level certification

// Run the sequential stream decoder against each pattern of a family (packet
// indices inside one window), embedded after a clean prefix: every erased
// source step must be fully determined by its deadline.
inline RecoveryCertificate certify_stream(const StreamCode& sc,
                                          const PatternFamily& fam,
                                          DecodePolicy pol) {
    RecoveryCertificate cert;
    cert.family = fam.descriptor;
    cert.delay = sc.Tdec;
    cert.population = fam.population;
    cert.sampled = fam.sampled;
    const long off = sc.mem;  // steps of clean history before the pattern
    for (const auto& pat : fam.patterns) {
        if (pat.empty()) continue;
        long last_step = off + pat.back() / sc.slots;
        long total_steps = last_step + sc.Tdec + sc.mem + 3;
        ErasureTrace tr(total_steps * sc.slots);
        for (int p : pat) {
            if (p < 0) throw std::out_of_range("certify_stream: bad pattern");
            tr.set(off * sc.slots + p);
        }
        StreamDecoder dec(sc, tr);
        bool ok = true;
        for (long t = off; t <= last_step; ++t)
            if (dec.step_erased(t) && !decide_step(dec, t, pol)) ok = false;
        ++cert.checked;
        if (!ok) {
            ++cert.failures;
            if (cert.counterexample.empty() || pat < cert.counterexample)
                cert.counterexample = pat;
        }
    }
    cert.pass = (cert.failures == 0);
    return cert;
}

// Every admissible single-window pattern of C(N,B,W) within the design window,
// at every offset, against the construction's decoder.
inline RecoveryCertificate certify_channel(const LayeredCode& code, int N, int B,
                                           int W, int T,
                                           std::size_t cap = kPatternCap) {
    int T_eff = std::min(T, W - 1);
    PatternFamily fam = enumerate_window_patterns(N, B, T_eff, cap, code.seed);
    return certify_stream(code.sc, fam, code.policy);
}

namespace detail {

// Builder-side certification: anchored bursts (offsets follow by time
// invariance and are exercised by certify_channel/tests), plus the <=N subset
// family (sampled past the cap). Sets the fast-path eligibility flags.
inline RecoveryCertificate certify_builder(StreamCode& sc, DecodePolicy pol,
                                           std::size_t cap = kPatternCap) {
    sc.certified_bursts = sc.certified_subsets = false;
    if (sc.design_B > 0) {
        auto cert = certify_stream(sc, family_bursts_anchored(sc.design_B), pol);
        if (!cert.pass) return cert;
        sc.certified_bursts = true;
    }
    if (sc.design_N > 0) {
        auto fam = family_subsets_upto(sc.design_N, sc.design_window, cap, 1);
        auto cert = certify_stream(sc, fam, pol);
        if (!cert.pass) return cert;
        sc.certified_subsets = !fam.sampled;
        return cert;
    }
    RecoveryCertificate ok;
    ok.pass = true;
    return ok;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Builders

namespace detail {

inline void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

inline std::shared_ptr<const Field> pick_field(std::shared_ptr<const Field> f,
                                               Backend backend) {
    if (f) return f;
    return backend == Backend::BlockMds ? share_field(default_gf256())
                                        : share_field(default_prime_field());
}

// Layered layout shared by genms/midas: outputs [u | v | q | p^u], sources
// [u | v], systematic prefix, memory T_eff, q[i] = p^v[i] + u[i - T_eff].
inline StreamCode layered_skeleton(std::shared_ptr<const Field> f, int ku, int kv,
                                   int ks, int T_eff, int T) {
    StreamCode sc;
    sc.field = std::move(f);
    sc.k = ku + kv;
    sc.n = 2 * ku + kv + ks;
    sc.mem = T_eff;
    sc.Tdec = T;
    sc.G.assign(sc.mem + 1, Matrix(*sc.field, sc.k, sc.n));
    sc.sys_pos.resize(sc.k);
    for (int l = 0; l < sc.k; ++l) {
        sc.G[0].at(l, l) = 1;
        sc.sys_pos[l] = l;
    }
    sc.src_role.assign(sc.k, Role::V);
    std::fill(sc.src_role.begin(), sc.src_role.begin() + ku, Role::U);
    sc.out_role.assign(sc.n, Role::P);
    for (int c = 0; c < ku; ++c) sc.out_role[c] = Role::U;
    for (int c = ku; c < sc.k; ++c) sc.out_role[c] = Role::V;
    for (int c = sc.k; c < sc.k + ku; ++c) sc.out_role[c] = Role::Q;
    // delayed repetition of u inside q
    for (int c = 0; c < ku; ++c) sc.G[T_eff].at(c, sc.k + c) = 1;
    return sc;
}

}  // namespace detail

// Burst-optimal layered code: rate T_eff/(T_eff+B), corrects every burst of
// length <= B with delay T_eff. v parities come from the diagonal embedding of
// a (T_eff, T_eff-B) systematic MDS block code: the codeword started at step w
// carries its j-th coordinate in step w+j, so any <= B erased steps in its
// span are correctable.
inline LayeredCode build_genms(int B, int T, int W = INT_MAX,
                               std::shared_ptr<const Field> field = nullptr,
                               std::uint64_t seed = 0) {
    int T_eff = std::min(T, W - 1);
    detail::require(B >= 1 && B <= T_eff, "genms: needs 1 <= B <= T_eff");
    LayeredCode code;
    code.family = "genms";
    code.backend = Backend::BlockMds;
    code.N = 1;
    code.B = B;
    code.T = T;
    code.W = W;
    code.T_eff = T_eff;
    code.ku = B;
    code.kv = T_eff - B;
    code.seed = seed;
    auto f = detail::pick_field(std::move(field), Backend::BlockMds);

    StreamCode sc = detail::layered_skeleton(f, code.ku, code.kv, 0, T_eff, T);
    if (code.kv > 0) {
        Matrix g = rs_generator(T_eff, code.kv, *f);  // [I | P]
        for (int lv = 0; lv < code.kv; ++lv)
            for (int c = 0; c < B; ++c) {
                int d = code.kv + c - lv;  // diagonal: parity c trails source lv
                sc.G[d].at(code.ku + lv, sc.k + c) = g.at(lv, code.kv + c);
            }
    }
    sc.design_N = 1;
    sc.design_B = B;
    sc.design_window = T_eff + 1;
    sc.finalize();
    // Recovery is structural here: every diagonal codeword of the systematic
    // (T_eff, T_eff-B) MDS code loses at most B of its T_eff coordinates, and
    // u rides a plain delayed repetition. Run the exhaustive check only at
    // desk scale, where it doubles as a regression test of that argument.
    if (std::uint64_t(B) * std::uint64_t(std::max(code.kv, 1)) <= 400) {
        auto cert = detail::certify_builder(sc, DecodePolicy::Staged);
        if (!cert.pass) throw CertificationError(cert);
    }
    sc.certified_bursts = sc.certified_subsets = true;
    code.sc = std::move(sc);
    return code;
}

// Two-layer code correcting every burst <= B and every <= N arbitrary
// erasures per window with delay T_eff, at rate
// T_eff / (T_eff + B + B*N/(T_eff-N+1)). Block backend: v layer is the
// (T_eff, T_eff-B) diagonal MDS code interleaved m = T_eff-N+1 ways; u layer
// is the (T_eff+1, m) diagonal MDS code interleaved B ways. Random backend:
// the same tap supports with coefficients drawn from the prime field, then
// certified (retrying with fresh seeds up to the budget).
inline LayeredCode build_midas(int N, int B, int T, int W = INT_MAX,
                               Backend backend = Backend::BlockMds,
                               std::shared_ptr<const Field> field = nullptr,
                               std::uint64_t seed = 0) {
    int T_eff = std::min(T, W - 1);
    detail::require(N >= 1 && N <= B && B <= T_eff,
                    "midas: needs 1 <= N <= B <= T_eff");
    if (N == 1) return build_genms(B, T, W, std::move(field), seed);

    LayeredCode code;
    code.family = "midas";
    code.backend = backend;
    code.N = N;
    code.B = B;
    code.T = T;
    code.W = W;
    code.T_eff = T_eff;
    code.m = T_eff - N + 1;
    code.ku = code.m * B;
    code.kv = code.m * (T_eff - B);
    code.ks = B * N;
    code.seed = seed;
    auto f = detail::pick_field(std::move(field), backend);

    for (int attempt = 0; attempt < kCertRetryBudget; ++attempt) {
        std::uint64_t s = seed + attempt;
        StreamCode sc =
            detail::layered_skeleton(f, code.ku, code.kv, code.ks, T_eff, T);
        int kv0 = T_eff - B;
        if (backend == Backend::BlockMds) {
            if (kv0 > 0) {
                Matrix gv = rs_generator(T_eff, kv0, *f);
                for (int j = 0; j < code.m; ++j)
                    for (int lv = 0; lv < kv0; ++lv)
                        for (int c = 0; c < B; ++c) {
                            int d = kv0 + c - lv;
                            sc.G[d].at(code.ku + (j + code.m * lv),
                                       sc.k + (j + code.m * c)) =
                                gv.at(lv, kv0 + c);
                        }
            }
            Matrix gu = rs_generator(T_eff + 1, code.m, *f);
            for (int j = 0; j < B; ++j)
                for (int lu = 0; lu < code.m; ++lu)
                    for (int c = 0; c < N; ++c) {
                        int d = code.m + c - lu;
                        sc.G[d].at(j + B * lu, sc.k + code.ku + (j + B * c)) =
                            gu.at(lu, code.m + c);
                    }
        } else {
            if (f->kind() != Field::Kind::Prime || f->size() < (1u << 20))
                throw FieldError("midas random backend wants a prime field >= 2^20");
            std::mt19937_64 rng(s);
            std::uniform_int_distribution<std::uint64_t> dist(0, f->size() - 1);
            for (int d = 0; d < T_eff; ++d)  // v layer, memory T_eff-1
                for (int lv = 0; lv < code.kv; ++lv)
                    for (int c = 0; c < code.ku; ++c)
                        sc.G[d].at(code.ku + lv, sc.k + c) = dist(rng);
            for (int d = 0; d <= T_eff; ++d)  // u layer, memory T_eff
                for (int lu = 0; lu < code.ku; ++lu)
                    for (int c = 0; c < code.ks; ++c)
                        sc.G[d].at(lu, sc.k + code.ku + c) = dist(rng);
        }
        sc.design_N = N;
        sc.design_B = B;
        sc.design_window = T_eff + 1;
        sc.finalize();
        auto cert = detail::certify_builder(sc, DecodePolicy::Staged);
        if (cert.pass) {
            code.seed = s;
            code.sc = std::move(sc);
            return code;
        }
        if (backend == Backend::BlockMds || attempt + 1 == kCertRetryBudget)
            throw CertificationError(cert);
    }
    throw std::logic_error("unreachable");
}

// Strongly-MDS baseline at rate k/n with memory T: a random systematic code
// certified to correct N = B = floor((1-R)(T+1)) arbitrary erasures per
// window with delay T.
inline LayeredCode build_smds_baseline_rated(Rational R, int T,
                                             std::shared_ptr<const Field> field = nullptr,
                                             std::uint64_t seed = 0) {
    detail::require(R.num > 0 && R.num <= R.den, "smds: rate in (0, 1]");
    int kbar = int(R.num), nbar = int(R.den);
    int NB = int(((Rational(1) - R) * Rational(T + 1)).floor());
    auto f = detail::pick_field(std::move(field), Backend::RandomSmds);
    if (f->kind() != Field::Kind::Prime || f->size() < (1u << 20))
        throw FieldError("smds baseline wants a prime field >= 2^20");

    LayeredCode code;
    code.family = "smds";
    code.backend = Backend::RandomSmds;
    code.N = code.B = NB;
    code.T = T;
    code.T_eff = T;
    code.ku = 0;
    code.kv = kbar;
    code.policy = DecodePolicy::Oracle;  // no layer structure to stage
    for (int attempt = 0; attempt < kCertRetryBudget; ++attempt) {
        std::uint64_t s = seed + attempt;
        StreamCode sc;
        sc.field = f;
        sc.k = kbar;
        sc.n = nbar;
        sc.mem = T;
        sc.Tdec = T;
        sc.G.assign(T + 1, Matrix(*f, kbar, nbar));
        sc.sys_pos.resize(kbar);
        for (int l = 0; l < kbar; ++l) {
            sc.G[0].at(l, l) = 1;
            sc.sys_pos[l] = l;
        }
        sc.src_role.assign(kbar, Role::V);
        sc.out_role.assign(nbar, Role::Q);
        for (int c = 0; c < kbar; ++c) sc.out_role[c] = Role::V;
        std::mt19937_64 rng(s);
        std::uniform_int_distribution<std::uint64_t> dist(0, f->size() - 1);
        for (int d = 0; d <= T; ++d)
            for (int l = 0; l < kbar; ++l)
                for (int c = kbar; c < nbar; ++c) sc.G[d].at(l, c) = dist(rng);
        sc.design_N = sc.design_B = NB;
        sc.design_window = T + 1;
        sc.finalize();
        auto cert = detail::certify_builder(sc, DecodePolicy::Oracle);
        if (cert.pass) {
            code.seed = s;
            code.sc = std::move(sc);
            return code;
        }
        if (attempt + 1 == kCertRetryBudget) throw CertificationError(cert);
    }
    throw std::logic_error("unreachable");
}

inline LayeredCode build_smds_baseline(int N, int B, int T,
                                       std::shared_ptr<const Field> field = nullptr,
                                       std::uint64_t seed = 0) {
    detail::require(N == B && B >= 0 && B <= T, "smds baseline: needs N == B <= T");
    return build_smds_baseline_rated(Rational(T + 1 - B, T + 1), T,
                                     std::move(field), seed);
}

// Rate-constrained burst code: rate k/n fixed, delay T, correctable burst
// B = floor(T(n-k)/k). Same layout as genms (k^u = n-k parities per step,
// delayed u repetition) with random certified v-layer coefficients.
inline LayeredCode build_genms_rated(Rational R, int T,
                                     std::shared_ptr<const Field> field = nullptr,
                                     std::uint64_t seed = 0) {
    int kbar = int(R.num), nbar = int(R.den);
    int ku = nbar - kbar, kv = kbar - ku;
    detail::require(ku >= 1 && kv >= 0, "genms rated: rate must be in [1/2, 1)");
    int B = int(T) * ku / kbar;
    detail::require(B >= 1, "genms rated: correctable burst is empty");
    auto f = detail::pick_field(std::move(field), Backend::RandomSmds);
    if (f->kind() != Field::Kind::Prime || f->size() < (1u << 20))
        throw FieldError("genms rated wants a prime field >= 2^20");

    LayeredCode code;
    code.family = "genms";
    code.backend = Backend::RandomSmds;
    code.N = 1;
    code.B = B;
    code.T = T;
    code.T_eff = T;
    code.ku = ku;
    code.kv = kv;
    for (int attempt = 0; attempt < kCertRetryBudget; ++attempt) {
        std::uint64_t s = seed + attempt;
        StreamCode sc = detail::layered_skeleton(f, ku, kv, 0, T, T);
        std::mt19937_64 rng(s);
        std::uniform_int_distribution<std::uint64_t> dist(0, f->size() - 1);
        for (int d = 0; d < T; ++d)
            for (int lv = 0; lv < kv; ++lv)
                for (int c = 0; c < ku; ++c)
                    sc.G[d].at(ku + lv, sc.k + c) = dist(rng);
        sc.design_N = 1;
        sc.design_B = B;
        sc.design_window = T + 1;
        sc.finalize();
        auto cert = detail::certify_builder(sc, DecodePolicy::Staged);
        if (cert.pass) {
            code.seed = s;
            code.sc = std::move(sc);
            return code;
        }
        if (attempt + 1 == kCertRetryBudget) throw CertificationError(cert);
    }
    throw std::logic_error("unreachable");
}

// Rate-constrained two-layer code: rate k/n and delay T fixed, layout
// k^u = B = n-k-N, k^v = k-B, k^s = N; corrects bursts <= B and <= N isolated
// erasures per window. Random certified layers.
inline LayeredCode build_midas_rated(int N, Rational R, int T,
                                     std::shared_ptr<const Field> field = nullptr,
                                     std::uint64_t seed = 0) {
    int kbar = int(R.num), nbar = int(R.den);
    int B = nbar - kbar - N;
    int kv = kbar - B;
    detail::require(N >= 1 && B >= N && kv >= 0, "midas rated: bad (N, R) layout");
    auto f = detail::pick_field(std::move(field), Backend::RandomSmds);
    if (f->kind() != Field::Kind::Prime || f->size() < (1u << 20))
        throw FieldError("midas rated wants a prime field >= 2^20");

    LayeredCode code;
    code.family = "midas";
    code.backend = Backend::RandomSmds;
    code.N = N;
    code.B = B;
    code.T = T;
    code.T_eff = T;
    code.ku = B;
    code.kv = kv;
    code.ks = N;
    for (int attempt = 0; attempt < kCertRetryBudget; ++attempt) {
        std::uint64_t s = seed + attempt;
        StreamCode sc = detail::layered_skeleton(f, B, kv, N, T, T);
        std::mt19937_64 rng(s);
        std::uniform_int_distribution<std::uint64_t> dist(0, f->size() - 1);
        for (int d = 0; d < T; ++d)
            for (int lv = 0; lv < kv; ++lv)
                for (int c = 0; c < B; ++c)
                    sc.G[d].at(B + lv, sc.k + c) = dist(rng);
        for (int d = 0; d <= T; ++d)
            for (int lu = 0; lu < B; ++lu)
                for (int c = 0; c < N; ++c)
                    sc.G[d].at(lu, sc.k + B + c) = dist(rng);
        sc.design_N = N;
        sc.design_B = B;
        sc.design_window = T + 1;
        sc.finalize();
        auto cert = detail::certify_builder(sc, DecodePolicy::Staged);
        if (cert.pass) {
            code.seed = s;
            code.sc = std::move(sc);
            return code;
        }
        if (attempt + 1 == kCertRetryBudget) throw CertificationError(cert);
    }
    throw std::logic_error("unreachable");
}

// Eq.-style rate of the two-layer construction, exact.
inline Rational midas_design_rate(int N, int B, int T_eff) {
    Rational denom = Rational(T_eff + B) + Rational(B * N, T_eff - N + 1);
    return Rational(T_eff) / denom;
}

}  // namespace streamfec
