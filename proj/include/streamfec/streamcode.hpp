// Generic layered streaming code and its erasure decoder.
//
// A StreamCode emits, per source step i, n output sub-symbols
//   x[i] = sum_{d=0..mem} s[i-d] * G[d]
// spread across `slots` channel packets; channel erasures act on whole
// packets. Source and output coordinates carry layer roles (u, v, q, p) so the
// decoder can run either the layered two-stage procedure or a one-shot joint
// elimination ("oracle"), both as restricted eliminations: an equation is
// usable only when every unresolved source sub-symbol it references is in the
// current unknown set. Erasure decodability of a linear code is
// value-independent, so the decoder normally tracks determination only; when
// constructed with the transmitted stream it also reconstructs values (used by
// round-trip tests).

#pragma once

#include <cstdint>
#include <memory>
#include <unordered_map>

#include "channels.hpp"
#include "matrix.hpp"

namespace streamfec {

enum class Role : std::uint8_t { U = 0, V = 1, Q = 2, P = 3 };

constexpr unsigned role_bit(Role r) { return 1u << unsigned(r); }
inline constexpr unsigned kAllRoles = 0xF;

struct StreamCode {
    std::shared_ptr<const Field> field;
    int k = 0, n = 0, mem = 0;
    int slots = 1;                 // channel packets per step
    std::vector<int> slot_of;      // output coordinate -> packet within the step
    std::vector<Matrix> G;         // mem+1 matrices, each k x n
    std::vector<int> sys_pos;      // source l -> its systematic output coordinate
    std::vector<Role> out_role;    // size n
    std::vector<Role> src_role;    // size k
    int group = 1;                 // source symbols per step (loss accounting)
    std::vector<int> sym_of;       // source sub-symbol -> symbol index within step
    int Tdec = 0;                  // decoding delay in steps
    bool macro_end_deadline = false;
    int macro_slots = 1;           // deadline rounds up to a multiple of this
    int design_N = 0, design_B = 0;  // designed channel point, packet granularity
    int design_window = 1;           // admissibility window, in packets
    bool certified_bursts = false;   // anchored bursts <= design_B certified
    bool certified_subsets = false;  // <=design_N subsets certified

    struct Tap {
        int d, l;
        std::uint64_t c;
    };
    std::vector<std::vector<Tap>> taps;  // per output coordinate

    long deadline_slot(long i) const {
        long end = (i + Tdec + 1) * slots;  // one past the last usable packet
        if (macro_end_deadline)
            end = (end + macro_slots - 1) / macro_slots * macro_slots;
        return end - 1;
    }
    long global_slot(long t, int c) const { return t * slots + slot_of[c]; }

    // Fill defaults, validate shapes, and precompute the tap lists.
    void finalize() {
        if (!field || k < 1 || n <= 0 || mem < 0 || slots < 1)
            throw std::invalid_argument("streamcode: bad dimensions");
        if (slot_of.empty()) slot_of.assign(n, 0);
        if (sym_of.empty()) sym_of.assign(k, 0);
        if (out_role.empty()) out_role.assign(n, Role::U);
        if (src_role.empty()) src_role.assign(k, Role::U);
        if (int(G.size()) != mem + 1 || int(slot_of.size()) != n ||
            int(sys_pos.size()) != k || int(out_role.size()) != n ||
            int(src_role.size()) != k || int(sym_of.size()) != k)
            throw std::invalid_argument("streamcode: inconsistent layout");
        for (const Matrix& g : G)
            if (int(g.rows()) != k || int(g.cols()) != n || g.field() != *field)
                throw std::invalid_argument("streamcode: bad generator block");
        for (int c = 0; c < n; ++c)
            if (slot_of[c] < 0 || slot_of[c] >= slots)
                throw std::invalid_argument("streamcode: bad slot map");
        std::vector<int> seen(n, -1);
        for (int l = 0; l < k; ++l) {
            int c = sys_pos[l];
            if (c < 0 || c >= n || seen[c] >= 0 || G[0].at(l, c) != 1)
                throw std::invalid_argument("streamcode: bad systematic map");
            seen[c] = l;
        }
        taps.assign(n, {});
        for (int d = 0; d <= mem; ++d)
            for (int l = 0; l < k; ++l)
                for (int c = 0; c < n; ++c) {
                    std::uint64_t v = G[d].at(l, c);
                    if (v != 0) taps[c].push_back({d, l, v});
                }
    }

    // history[d] = s[i-d]; shorter histories mean zero state near stream start.
    std::vector<std::uint64_t> encode_step(
        const std::vector<std::vector<std::uint64_t>>& history) const {
        const Field& f = *field;
        if (history.empty() || int(history[0].size()) != k)
            throw std::invalid_argument("streamcode: bad source vector");
        std::vector<std::uint64_t> x(n, 0);
        for (int c = 0; c < n; ++c)
            for (const Tap& t : taps[c]) {
                if (t.d >= int(history.size())) continue;
                std::uint64_t v = history[t.d][t.l];
                if (v != 0) x[c] = f.add(x[c], f.mul(t.c, v));
            }
        return x;
    }
};

inline std::vector<std::vector<std::uint64_t>> encode_stream(
    const StreamCode& code, const std::vector<std::vector<std::uint64_t>>& src) {
    std::vector<std::vector<std::uint64_t>> out;
    std::vector<std::vector<std::uint64_t>> hist;
    for (std::size_t i = 0; i < src.size(); ++i) {
        hist.clear();
        for (int d = 0; d <= code.mem && d <= int(i); ++d) hist.push_back(src[i - d]);
        out.push_back(code.encode_step(hist));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Decoder

// One restricted-elimination pass: solve for the unresolved source sub-symbols
// with the given roles inside the unknown step window, from the unerased
// outputs with the given roles up to slot_hi. Equations touching an unresolved
// sub-symbol outside the unknown set are dropped.
struct EliminationPass {
    unsigned unknown_roles = kAllRoles;
    unsigned eq_roles = kAllRoles;
    long u_lo = 0, u_hi = 0;  // unknown step range (inclusive)
    long e_lo = 0;            // first equation step
    long slot_hi = 0;         // last usable global packet index
};

class StreamDecoder {
public:
    StreamDecoder(const StreamCode& code, const ErasureTrace& trace,
                  const std::vector<std::vector<std::uint64_t>>* sent = nullptr)
        : c_(&code), tr_(&trace), sent_(sent) {}

    const StreamCode& code() const { return *c_; }

    bool out_erased(long t, int c) const { return tr_->erased(c_->global_slot(t, c)); }
    bool src_erased(long t, int l) const { return out_erased(t, c_->sys_pos[l]); }

    bool known(long t, int l) const {
        if (t < 0) return true;  // zero state before stream start
        if (!src_erased(t, l)) return true;
        return recovered_.count(key(t, l)) != 0;
    }
    std::uint64_t value(long t, int l) const {
        if (t < 0) return 0;
        if (!src_erased(t, l))
            return sent_ ? (*sent_)[t][c_->sys_pos[l]] : 0;
        auto it = recovered_.find(key(t, l));
        return it == recovered_.end() ? 0 : it->second;
    }

    bool step_erased(long t) const {
        for (int l = 0; l < c_->k; ++l)
            if (src_erased(t, l)) return true;
        return false;
    }
    bool step_known(long t) const {
        for (int l = 0; l < c_->k; ++l)
            if (!known(t, l)) return false;
        return true;
    }
    bool symbol_known(long t, int j) const {
        for (int l = 0; l < c_->k; ++l)
            if (c_->sym_of[l] == j && !known(t, l)) return false;
        return true;
    }

    void mark_recovered(long t, int l, std::uint64_t v = 0) { recovered_[key(t, l)] = v; }
    void mark_step_recovered(long t) {
        for (int l = 0; l < c_->k; ++l)
            if (!known(t, l)) mark_recovered(t, l);
    }
    // Drop recovery records older than step t (their deadlines have passed and
    // no in-window equation can reference them any more).
    void forget_before(long t) {
        for (auto it = recovered_.begin(); it != recovered_.end();)
            it = (it->first < key(t, 0)) ? recovered_.erase(it) : std::next(it);
    }

    // Returns the number of newly determined sub-symbols (marked recovered).
    long eliminate(const EliminationPass& pass) {
        const Field& f = *c_->field;
        std::vector<std::pair<long, int>> unk;
        std::unordered_map<long, int> id;
        for (long t = std::max(pass.u_lo, 0L); t <= pass.u_hi; ++t)
            for (int l = 0; l < c_->k; ++l)
                if ((role_bit(c_->src_role[l]) & pass.unknown_roles) && !known(t, l)) {
                    id.emplace(key(t, l), int(unk.size()));
                    unk.emplace_back(t, l);
                }
        if (unk.empty()) return 0;

        std::vector<std::vector<std::uint64_t>> rows;
        std::vector<std::uint64_t> rhs;
        std::vector<std::uint64_t> row(unk.size());
        long e_hi_step = pass.slot_hi / c_->slots;
        for (long t = std::max(pass.e_lo, 0L); t <= e_hi_step; ++t)
            for (int c = 0; c < c_->n; ++c) {
                if (!(role_bit(c_->out_role[c]) & pass.eq_roles)) continue;
                long gs = c_->global_slot(t, c);
                if (gs > pass.slot_hi || tr_->erased(gs)) continue;
                if (sent_ && t >= long(sent_->size())) continue;
                std::fill(row.begin(), row.end(), 0);
                std::uint64_t b = sent_ ? (*sent_)[t][c] : 0;
                bool usable = true, any = false;
                for (const StreamCode::Tap& tap : c_->taps[c]) {
                    long ts = t - tap.d;
                    if (ts < 0) continue;
                    auto it = id.find(key(ts, tap.l));
                    if (it != id.end()) {
                        row[it->second] = f.add(row[it->second], tap.c);
                        any = true;
                    } else if (known(ts, tap.l)) {
                        if (sent_) b = f.sub(b, f.mul(tap.c, value(ts, tap.l)));
                    } else {
                        usable = false;
                        break;
                    }
                }
                if (usable && any) {
                    rows.push_back(row);
                    rhs.push_back(b);
                }
            }

        Matrix a(f, rows.size(), unk.size());
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t j = 0; j < unk.size(); ++j) a.at(r, j) = rows[r][j];
        ErasureSolveReport rep = solve_erasures(a, rhs);
        long found = 0;
        for (const auto& [j, v] : rep.determined) {
            mark_recovered(unk[j].first, unk[j].second, v);
            ++found;
        }
        return found;
    }

private:
    static long key(long t, int l) { return t * 4096 + l; }  // k < 4096 everywhere

    const StreamCode* c_;
    const ErasureTrace* tr_;
    const std::vector<std::vector<std::uint64_t>>* sent_;
    std::unordered_map<long, std::uint64_t> recovered_;
};

// ---------------------------------------------------------------------------
// Per-step decoding policies

enum class DecodePolicy { Oracle, Staged };

// Joint elimination over all unresolved sub-symbols in [i-mem, deadline],
// equations from every unerased output in the same range.
inline bool decide_step_oracle(StreamDecoder& dec, long i, int delay = -1) {
    const StreamCode& c = dec.code();
    if (dec.step_known(i)) return true;
    long dl = (delay < 0) ? c.deadline_slot(i)
                          : c.deadline_slot(i) + long(delay - c.Tdec) * c.slots;
    EliminationPass pass;
    pass.u_lo = i - c.mem;
    pass.u_hi = dl / c.slots;
    pass.e_lo = i - c.mem;
    pass.slot_hi = dl;
    dec.eliminate(pass);
    return dec.step_known(i);
}

// The layered two-stage procedure: first the v layer from the combined
// parities q, then the u layer from q (burst route, after v cancellation) and
// the dedicated u parities p (isolated route).
inline bool decide_step_staged(StreamDecoder& dec, long i) {
    const StreamCode& c = dec.code();
    if (dec.step_known(i)) return true;
    long dl = c.deadline_slot(i);
    EliminationPass s1;
    s1.unknown_roles = role_bit(Role::V);
    s1.eq_roles = role_bit(Role::Q);
    s1.u_lo = i;
    s1.u_hi = dl / c.slots;
    s1.e_lo = i;
    s1.slot_hi = dl;
    dec.eliminate(s1);
    EliminationPass s2 = s1;
    s2.unknown_roles = role_bit(Role::U);
    s2.eq_roles = role_bit(Role::Q) | role_bit(Role::P);
    dec.eliminate(s2);
    return dec.step_known(i);
}

inline bool decide_step(StreamDecoder& dec, long i, DecodePolicy policy) {
    return policy == DecodePolicy::Staged ? decide_step_staged(dec, i)
                                          : decide_step_oracle(dec, i);
}

}  // namespace streamfec
