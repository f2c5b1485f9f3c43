#include <splitkit/matrix.hpp>
#include <splitkit/rational.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace splitkit;

TEST_CASE("rational parse and format round-trip") {
    CHECK(rat_to_string(parse_rat("3/6")) == "1/2");
    CHECK(rat_to_string(parse_rat("-8/2")) == "-4");
    CHECK(rat_to_string(parse_rat("0")) == "0");
    CHECK(parse_rat("7") == Rat(7));
    CHECK_THROWS_AS(parse_rat("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rat("a"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rat(""), std::invalid_argument);
}

TEST_CASE("rref, rank, nullspace") {
    RatMat a(3, 3);
    a(0, 0) = 1; a(0, 1) = 2; a(0, 2) = 3;
    a(1, 0) = 2; a(1, 1) = 4; a(1, 2) = 6;
    a(2, 0) = 1; a(2, 1) = 0; a(2, 2) = 1;
    CHECK(rank(a) == 2);
    RatMat ns = nullspace(a);
    REQUIRE(ns.cols() == 1);
    CHECK((a * ns).is_zero());
}

TEST_CASE("solve and inverse") {
    RatMat a(2, 2);
    a(0, 0) = 2; a(0, 1) = 1; a(1, 0) = 1; a(1, 1) = 1;
    auto inv = inverse(a);
    REQUIRE(inv.has_value());
    CHECK((a * *inv) == RatMat::identity(2));
    CHECK(determinant(a) == Rat(1));

    RatMat singular(2, 2);
    singular(0, 0) = 1; singular(0, 1) = 2; singular(1, 0) = 2; singular(1, 1) = 4;
    CHECK(!inverse(singular).has_value());
    CHECK(determinant(singular) == Rat(0));
}

TEST_CASE("smith diagonalization reconstructs the input") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> val(-4, 4);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t m = 1 + rng() % 4, n = 1 + rng() % 4;
        IntMat a(m, n);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) a(i, j) = val(rng);
        auto s = smith_diagonalize(a);
        CHECK(s.u * s.s * s.v == a);
        Int du = int_determinant(s.u), dv = int_determinant(s.v);
        CHECK((du == 1 || du == -1));
        CHECK((dv == 1 || dv == -1));
        for (std::size_t i = 0; i < s.s.rows(); ++i)
            for (std::size_t j = 0; j < s.s.cols(); ++j)
                if (i != j) CHECK(s.s(i, j) == 0);
    }
}
