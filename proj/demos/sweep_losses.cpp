// Compare residual loss of three equal-rate constructions over a bursty
// Gilbert-Elliott channel, sweeping the good-state loss probability.
// Prints the same CSV the command-line tool produces.

#include <iostream>

#include "streamfec/equalrate.hpp"
#include "streamfec/simkit.hpp"

using namespace streamfec;

int main() {
    Rational R(12, 23);
    auto midas = build_midas_rated(2, R, 12);
    auto smds = build_smds_baseline_rated(R, 12);
    auto ms = build_genms_rated(R, 12);

    SweepConfig cfg;
    cfg.codes = {{"midas", "N=2 B=9", &midas.sc, DecodePolicy::Oracle},
                 {"smds", "N=B=6", &smds.sc, DecodePolicy::Oracle},
                 {"ms", "N=1 B=11", &ms.sc, DecodePolicy::Oracle}};
    cfg.ge = {5e-4, 0.5, 0.0};
    cfg.axis = GridAxis::Eps;
    cfg.grid = {1e-3, 3e-3, 5e-3};
    cfg.length = 1000000;  // short run; the acceptance harness uses 10^7
    cfg.master_seed = 1;

    std::cout << sweep_csv(sweep(cfg), /*include_runtime=*/false);
    return 0;
}
