#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "streamfec/matrix.hpp"

using namespace streamfec;

TEST_CASE("rank basics") {
    Field f7 = Field::prime(7);
    CHECK(rank(Matrix::identity(f7, 3)) == 3);
    CHECK(rank(Matrix(f7, 4, 5)) == 0);

    // Vandermonde on 3 distinct points is invertible
    Matrix v(f7, 3, 3);
    std::uint64_t pts[3] = {1, 2, 3};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) v.at(i, j) = f7.pow(pts[j], i);
    CHECK(rank(v) == 3);
}

TEST_CASE("solve_erasures worked examples") {
    Field f7 = Field::prime(7);
    {
        Matrix a = Matrix::identity(f7, 2);
        auto rep = solve_erasures(a, {3, 5});
        CHECK(rep.consistent);
        CHECK(rep.determined.at(0) == 3);
        CHECK(rep.determined.at(1) == 5);
        CHECK(rep.free.empty());
    }
    {
        Matrix a(f7, 1, 2);
        a.at(0, 0) = 1;
        a.at(0, 1) = 1;
        auto rep = solve_erasures(a, {4});
        CHECK(rep.consistent);
        CHECK(rep.determined.empty());
        CHECK(rep.free == std::set<std::size_t>{0, 1});
    }
    {
        Matrix a(f7, 2, 2);
        a.at(0, 0) = 1;
        a.at(1, 0) = 1;
        auto rep = solve_erasures(a, {1, 2});
        CHECK_FALSE(rep.consistent);
    }
    {
        // x0 determined even though x1, x2 are free
        Matrix a(f7, 2, 3);
        a.at(0, 0) = 1;               // x0 = 2
        a.at(1, 1) = 1; a.at(1, 2) = 1;  // x1 + x2 = 3
        auto rep = solve_erasures(a, {2, 3});
        CHECK(rep.consistent);
        CHECK(rep.determined.at(0) == 2);
        CHECK(rep.free == std::set<std::size_t>{1, 2});
    }
}

// Brute-force oracle: enumerate every assignment, keep solutions, and call an
// unknown determined when it takes one value across all solutions.
static void cross_check(const Field& f, const Matrix& a, const std::vector<std::uint64_t>& b) {
    std::size_t n = a.cols();
    std::uint64_t q = f.size();
    std::vector<std::vector<std::uint64_t>> sols;
    std::vector<std::uint64_t> x(n, 0);
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= q;
    for (std::uint64_t code = 0; code < total; ++code) {
        std::uint64_t c = code;
        for (std::size_t i = 0; i < n; ++i) { x[i] = c % q; c /= q; }
        bool ok = true;
        for (std::size_t r = 0; r < a.rows() && ok; ++r) {
            std::uint64_t s = 0;
            for (std::size_t j = 0; j < n; ++j) s = f.add(s, f.mul(a.at(r, j), x[j]));
            ok = (s == b[r]);
        }
        if (ok) sols.push_back(x);
    }
    auto rep = solve_erasures(a, b);
    REQUIRE(rep.consistent == !sols.empty());
    if (sols.empty()) return;
    for (std::size_t j = 0; j < n; ++j) {
        bool constant = true;
        for (const auto& s : sols)
            if (s[j] != sols[0][j]) { constant = false; break; }
        INFO("unknown " << j);
        REQUIRE(rep.is_determined(j) == constant);
        if (constant) REQUIRE(rep.determined.at(j) == sols[0][j]);
    }
}

TEST_CASE("solve_erasures agrees with exhaustive enumeration") {
    std::mt19937_64 rng(777);
    for (std::uint64_t q : {2ull, 3ull}) {
        Field f = Field::prime(q);
        for (int it = 0; it < 200; ++it) {
            std::size_t n = 1 + rng() % (q == 2 ? 10 : 6);
            std::size_t m = 1 + rng() % 6;
            Matrix a(f, m, n);
            std::vector<std::uint64_t> b(m);
            for (std::size_t r = 0; r < m; ++r) {
                for (std::size_t c = 0; c < n; ++c) a.at(r, c) = rng() % q;
                b[r] = rng() % q;
            }
            cross_check(f, a, b);
        }
    }
}

TEST_CASE("rs_generator produces systematic MDS generators") {
    Field f7 = Field::prime(7);
    Field g256 = Field::gf2(8, 0x11D);

    Matrix g11 = rs_generator(1, 1, f7);
    CHECK(g11.rows() == 1);
    CHECK(g11.at(0, 0) == 1);

    for (auto [n, k] : std::vector<std::pair<std::size_t, std::size_t>>{
             {3, 2}, {5, 2}, {6, 3}, {7, 4}, {7, 7}}) {
        Matrix g = rs_generator(n, k, f7);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                REQUIRE(g.at(i, j) == (i == j ? 1u : 0u));
        REQUIRE(is_mds(g));
    }
    for (auto [n, k] : std::vector<std::pair<std::size_t, std::size_t>>{
             {6, 4}, {9, 3}, {12, 8}}) {
        Matrix g = rs_generator(n, k, g256);
        REQUIRE(is_mds(g));
    }
    CHECK_THROWS(rs_generator(8, 2, f7));  // n exceeds field size
}

TEST_CASE("is_mds rejects defective generators") {
    Field f7 = Field::prime(7);
    CHECK(is_mds(Matrix::identity(f7, 3)));
    Matrix g(f7, 2, 4);
    // columns 2 and 3 equal => the pair {2,3} is singular
    g.at(0, 0) = 1; g.at(1, 1) = 1;
    g.at(0, 2) = 2; g.at(1, 2) = 3;
    g.at(0, 3) = 2; g.at(1, 3) = 3;
    CHECK_FALSE(is_mds(g));
}
