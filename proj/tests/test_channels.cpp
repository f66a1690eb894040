#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "streamfec/channels.hpp"

using namespace streamfec;

TEST_CASE("validate_trace on the reference pattern") {
    // erasures at {0,1,2,6,8,12,13,14}: admissible for (N=2,B=3,W=5)
    ErasureTrace t(18);
    for (long i : {0, 1, 2, 6, 8, 12, 13, 14}) t.set(i);
    CHECK(validate_trace(t, 2, 3, 5).valid);

    ErasureTrace all(5);
    for (long i = 0; i < 5; ++i) all.set(i);
    auto v = validate_trace(all, 2, 3, 5);
    CHECK_FALSE(v.valid);
    CHECK(v.first_bad_window == 0);

    ErasureTrace none(40);
    CHECK(validate_trace(none, 0, 0, 4).valid);
    CHECK_THROWS_AS(validate_trace(none, 1, 5, 5), std::invalid_argument);
}

TEST_CASE("enumerate_window_patterns") {
    auto f0 = enumerate_window_patterns(1, 1, 1);
    CHECK(f0.patterns == std::vector<std::vector<int>>{{0}, {1}});

    auto f1 = enumerate_window_patterns(2, 3, 4);
    // bursts: 5+4+3 = 12, subsets <=2: 5+10 = 15; dedup: singles and pairs of
    // adjacent positions appear in both
    for (const auto& p : f1.patterns) CHECK(p.size() <= 3);
    std::set<std::vector<int>> uniq(f1.patterns.begin(), f1.patterns.end());
    CHECK(uniq.size() == f1.patterns.size());
    CHECK(uniq.count({0, 1, 2}) == 1);
    CHECK(uniq.count({0, 4}) == 1);

    CHECK(enumerate_window_patterns(0, 0, 5).patterns.empty());
}

TEST_CASE("periodic traces") {
    auto t = periodic_trace(6, 3, 14);
    for (long i : {0, 1, 2, 6, 7, 8, 12, 13}) CHECK(t.erased(i));
    for (long i : {3, 4, 5, 9, 10, 11}) CHECK_FALSE(t.erased(i));
    CHECK(periodic_trace(5, 0, 20).erasure_count() == 0);
    CHECK_THROWS(periodic_trace(3, 4, 10));
}

TEST_CASE("trace round trip") {
    ErasureTrace t(17);
    for (long i : {0, 3, 4, 5, 16}) t.set(i);
    std::string s = t.serialize();
    CHECK(s.rfind("FECTRACE v1 length=17", 0) == 0);
    ErasureTrace u = ErasureTrace::parse(s);
    REQUIRE(u.length() == t.length());
    for (long i = 0; i < 17; ++i) REQUIRE(u.erased(i) == t.erased(i));
    CHECK(u.serialize() == s);

    ErasureTrace empty(0);
    CHECK(ErasureTrace::parse(empty.serialize()).length() == 0);
    ErasureTrace none(9);
    CHECK(ErasureTrace::parse(none.serialize()).erasure_count() == 0);
}

TEST_CASE("GE sampler determinism and stationary loss") {
    GEParams p{5e-4, 0.5, 0.0};
    auto a = sample_ge(p, 100000, 9);
    auto b = sample_ge(p, 100000, 9);
    CHECK(a.serialize() == b.serialize());

    CHECK(sample_ge(GEParams{0, 0.5, 0}, 5000, 3).erasure_count() == 0);
    CHECK(sample_ge(GEParams{1, 1, 1}, 5000, 3).erasure_count() == 5000);

    // empirical loss within 3 binomial sigmas of the closed form, several params
    std::mt19937_64 prng(31337);
    for (int trial = 0; trial < 10; ++trial) {
        double alpha = std::pow(10.0, -4.0 + 2.0 * (prng() % 1000) / 1000.0);
        double beta = 0.05 + 0.9 * (prng() % 1000) / 1000.0;
        double eps = 1e-3 * (prng() % 10);
        long L = 1000000;
        double expect = ge_stationary_loss(alpha, beta, eps);
        auto t = sample_ge(GEParams{alpha, beta, eps}, L, prng());
        double got = double(t.erasure_count()) / L;
        // bursts are correlated; widen the binomial sigma by the mean burst length
        double sigma = std::sqrt(expect * (1 - expect) / L) * (1 + 2.0 / beta);
        INFO("alpha=" << alpha << " beta=" << beta << " eps=" << eps);
        CHECK(std::abs(got - expect) <= 3 * sigma + 3.0 / L);
    }
}

TEST_CASE("GE burst lengths are geometric") {
    GEParams p{1e-3, 0.4, 0.0};
    auto t = sample_ge(p, 4000000, 77);
    auto h = burst_histogram(t);
    // P(len > L)/P(len > L-1) -> 1-beta
    auto tail = [&](long L) {
        long n = 0;
        for (auto& [len, cnt] : h)
            if (len > L) n += cnt;
        return double(n);
    };
    for (long L = 1; L <= 4; ++L) {
        double ratio = tail(L) / tail(L - 1);
        CHECK(std::abs(ratio - (1 - p.beta)) < 0.05);
    }
}

TEST_CASE("Fritchman sampler") {
    FritchmanParams p{1, 5e-4, 0.5, 0.0};
    GEParams g{5e-4, 0.5, 0.0};
    // single bad state: identical chain, identical sampling path
    CHECK(sample_fritchman(p, 200000, 5).serialize() == sample_ge(g, 200000, 5).serialize());

    auto quiet = sample_fritchman(FritchmanParams{4, 0.0, 0.5, 0.0}, 10000, 2);
    CHECK(quiet.erasure_count() == 0);

    // heavier burst tail than GE at matched parameters
    FritchmanParams fp{8, 1e-3, 0.5, 0.0};
    auto ft = sample_fritchman(fp, 4000000, 11);
    auto h = burst_histogram(ft);
    long above8 = 0;
    for (auto& [len, cnt] : h)
        if (len > 8) above8 += cnt;
    CHECK(above8 > 0);
}

TEST_CASE("burst histogram") {
    ErasureTrace t(10);
    for (long i : {0, 1, 2, 5}) t.set(i);
    auto h = burst_histogram(t);
    CHECK(h == std::map<long, long>{{3, 1}, {1, 1}});
    CHECK(burst_histogram(ErasureTrace(7)).empty());
    ErasureTrace all(4);
    for (long i = 0; i < 4; ++i) all.set(i);
    CHECK(burst_histogram(all) == std::map<long, long>{{4, 1}});
}

TEST_CASE("ge_stationary_loss closed form") {
    CHECK(std::abs(ge_stationary_loss(5e-4, 0.5, 0) - 9.99001e-4) < 1e-8);
    CHECK(ge_stationary_loss(0, 0.3, 0.25) == 0.25);
    CHECK(ge_stationary_loss(0.2, 0.8, 1.0) == 1.0);
    CHECK_THROWS(ge_stationary_loss(0, 0, 0.5));
}

TEST_CASE("thm-1 converse periodic traces are admissible") {
    // period T+B-N+1 with burst B stays inside C(N,B,W) for W = T_eff+1
    for (auto [N, B, T] : std::vector<std::array<int, 3>>{{2, 3, 4}, {2, 3, 5}, {1, 3, 7}, {2, 9, 12}}) {
        long period = T + B - N + 1;
        auto t = periodic_trace(period, B, 12 * period);
        CHECK(validate_trace(t, N, B, T + 1).valid);
    }
}
