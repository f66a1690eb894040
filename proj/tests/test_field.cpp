#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "streamfec/field.hpp"
#include "streamfec/rational.hpp"

using namespace streamfec;

TEST_CASE("field construction validates parameters") {
    CHECK_NOTHROW(Field::prime(65537));
    CHECK_NOTHROW(Field::gf2(8, 0x11D));
    CHECK_THROWS_AS(Field::prime(65536), FieldError);      // not prime
    CHECK_THROWS_AS(Field::prime(1), FieldError);
    CHECK_THROWS_AS(Field::gf2(8, 0x11C), FieldError);     // even => divisible by x
    CHECK_THROWS_AS(Field::gf2(8, 0x101), FieldError);     // x^8+1 reducible
    CHECK_THROWS_AS(Field::gf2(4, 0x11D), FieldError);     // degree mismatch
    CHECK(default_prime_field().size() == 1048583);
    CHECK(default_prime_field().size() >= (1u << 20));
}

TEST_CASE("worked arithmetic examples") {
    Field g = Field::gf2(8, 0x11D);
    CHECK(g.mul(0x80, 0x02) == 0x1D);
    CHECK(g.inv(1) == 1);

    Field f7 = Field::prime(7);
    CHECK(f7.mul(3, 5) == 1);
    CHECK(f7.inv(3) == 5);

    Field f = Field::prime(65537);
    CHECK(f.mul(65536, 65536) == 1);  // (-1)^2
    CHECK(f.inv(2) == 32769);
}

TEST_CASE("field axioms hold on random triples") {
    std::mt19937_64 rng(12345);
    auto check_axioms = [&](const Field& f) {
        std::uniform_int_distribution<std::uint64_t> d(0, f.size() - 1);
        for (int it = 0; it < 2000; ++it) {
            std::uint64_t a = d(rng), b = d(rng), c = d(rng);
            CHECK(f.add(a, b) == f.add(b, a));
            CHECK(f.mul(a, b) == f.mul(b, a));
            CHECK(f.add(f.add(a, b), c) == f.add(a, f.add(b, c)));
            CHECK(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
            CHECK(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
            CHECK(f.sub(f.add(a, b), b) == a);
            if (a != 0) CHECK(f.mul(a, f.inv(a)) == 1);
        }
    };
    check_axioms(Field::prime(65537));
    check_axioms(Field::prime(1048583));
    check_axioms(Field::gf2(8, 0x11D));
    check_axioms(Field::gf2(4, 0x13));
}

TEST_CASE("binary mul tables match carry-less reference") {
    Field g = Field::gf2(8, 0x11D);
    for (unsigned a = 0; a < 256; ++a)
        for (unsigned b = 0; b < 256; ++b)
            REQUIRE(g.mul(a, b) == g.mul_clmul(a, b));
}

TEST_CASE("division errors") {
    Field f = Field::prime(7);
    CHECK_THROWS_AS(f.div(3, 0), FieldError);
    CHECK_THROWS_AS(f.inv(0), FieldError);
}

TEST_CASE("rational arithmetic is exact") {
    CHECK(Rational(4, 6) == Rational(2, 3));
    CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
    CHECK(Rational(10, 19).str() == "10/19");
    CHECK(Rational(-7, 2).floor() == -4);
    CHECK(Rational(-7, 2).ceil() == -3);
    CHECK(Rational(7, 2).floor() == 3);
    CHECK(Rational(1, 3) < Rational(2, 5));
    CHECK_THROWS(Rational(1, 0));
}
