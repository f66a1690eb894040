// Closed-form rate bounds and delay tradeoffs for the sliding-window erasure
// channel. A rate-R code correcting bursts of B and N isolated erasures with
// delay T over windows of W must satisfy (R/(1-R)) B + N <= T_eff + 1 with
// T_eff = min(T, W-1); the layered construction comes within one isolated
// erasure of that line. The column distance d_T and span c_T of any
// convolutional code obey the analogous (R/(1-R)) c_T + d_T <= T+1+1/(1-R).

#pragma once

#include "convcode.hpp"
#include "equalrate.hpp"

namespace streamfec {

struct TradeoffPoint {
    std::string family;  // "smds" | "ms" | "midas"
    int N = 0, B = 0;
    Rational rate;
    int T = 0, W = INT_MAX;
    bool feasible = false;  // passes the converse bound
};

inline int bounds_teff(int T, int W) {
    return (W == INT_MAX) ? T : std::min(T, W - 1);
}

// Converse: achievable only if (R/(1-R)) B + N <= T_eff + 1. Exact rationals.
inline bool upper_bound_feasible(Rational R, int N, int B, int T,
                                 int W = INT_MAX) {
    if (!(Rational(0) < R && R < Rational(1)))
        throw std::invalid_argument("upper_bound_feasible: R outside (0,1)");
    Rational lhs = R / (Rational(1) - R) * Rational(B) + Rational(N);
    return lhs <= Rational(bounds_teff(T, W) + 1);
}

// Largest N the converse allows at rate R and burst B (may be negative).
inline long upper_bound_max_N(Rational R, int B, int T, int W = INT_MAX) {
    Rational slack =
        Rational(bounds_teff(T, W) + 1) - R / (Rational(1) - R) * Rational(B);
    return slack.floor();
}

// Rate of the layered (N,B) construction at effective delay T_eff.
inline Rational midas_rate(int N, int B, int T_eff) {
    detail::require(1 <= N && N <= B && B <= T_eff, "midas_rate: need N<=B<=T_eff");
    return midas_design_rate(N, B, T_eff);
}

// Achievable (N,B) per family at fixed rate and delay, floors applied:
//   strongly-MDS  N = B = floor((1-R)(T_eff+1))
//   burst-optimal N = 1, B = floor(T_eff min(1/R - 1, 1))
//   layered       N = min(B, floor(T_eff - (R/(1-R)) B)) for each B with N >= 1
inline std::vector<TradeoffPoint> table1_points(Rational R, int T,
                                                int W = INT_MAX) {
    if (!(Rational(0) < R && R < Rational(1)))
        throw std::invalid_argument("table1_points: R outside (0,1)");
    int Te = bounds_teff(T, W);
    Rational ratio = R / (Rational(1) - R);
    std::vector<TradeoffPoint> pts;
    auto add = [&](std::string fam, int N, int B) {
        TradeoffPoint p;
        p.family = std::move(fam);
        p.N = N;
        p.B = B;
        p.rate = R;
        p.T = T;
        p.W = W;
        p.feasible = upper_bound_feasible(R, N, B, T, W);
        pts.push_back(std::move(p));
    };
    int nb = int(((Rational(1) - R) * Rational(Te + 1)).floor());
    add("smds", nb, nb);
    Rational one_over = Rational(1) / R - Rational(1);
    add("ms", 1, int((Rational(Te) * std::min(one_over, Rational(1))).floor()));
    for (int B = 1; B <= Te; ++B) {
        long N = std::min<long>(B, (Rational(Te) - ratio * Rational(B)).floor());
        if (N < 1) break;
        add("midas", int(N), B);
    }
    return pts;
}

struct Prop4Report {
    int dT = 0, cT = 0;
    Rational lhs, rhs;
    bool pass = false;
};

// Column distance/span tradeoff: (R/(1-R)) c_T + d_T <= T + 1 + 1/(1-R).
inline Prop4Report prop4_check(const SystematicConvCode& code, int T,
                               const DistanceOptions& opt = {}) {
    Prop4Report rep;
    rep.dT = column_distance(code, T, Granularity::Symbol, opt);
    rep.cT = column_span(code, T, opt);
    Rational R(code.kbar, code.nbar);
    rep.lhs = R / (Rational(1) - R) * Rational(rep.cT) + Rational(rep.dT);
    rep.rhs = Rational(T + 1) + Rational(1) / (Rational(1) - R);
    rep.pass = rep.lhs <= rep.rhs;
    return rep;
}

}  // namespace streamfec
