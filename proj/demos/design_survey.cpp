// Survey the achievable designs at a fixed rate and delay: the single-burst,
// single-loss, and intermediate operating points, each checked against the
// exact feasibility bound. Also prints the burst capacity staircase of the
// macro-packet channel.

#include <iostream>

#include "streamfec/bounds.hpp"
#include "streamfec/unequalrate.hpp"

using namespace streamfec;

int main() {
    Rational R(12, 23);
    int T = 12;
    std::cout << "designs at rate " << R.num << "/" << R.den << ", delay " << T
              << "\n  family   N   B  feasible\n";
    for (const auto& p : table1_points(R, T))
        std::cout << "  " << p.family << (p.family.size() < 5 ? "  " : "   ")
                  << p.N << "  " << (p.B < 10 ? " " : "") << p.B << "  "
                  << (p.feasible ? "yes" : "no") << "\n";
    std::cout << "max isolated losses alongside B=6: "
              << upper_bound_max_N(R, 6, T) << "\n\n";

    std::cout << "burst capacity, macro-packets of M=20 slots, delay 5:\n";
    for (int B = 40; B <= 110; B += 5) {
        Rational c = capacity(20, 5, B);
        std::cout << "  B=" << B << "  capacity " << c.num << "/" << c.den
                  << "  (delay-adapted baseline " << adapted_ms_rate(20, 5, B).num
                  << "/" << adapted_ms_rate(20, 5, B).den << ")\n";
    }
    return 0;
}
