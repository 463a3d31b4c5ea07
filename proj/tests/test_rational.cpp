#include "doctest.h"

#include <cmath>
#include <limits>

#include "gmroi/rational.hpp"
#include "gmroi/simulate.hpp"

using gmroi::Rat;
using gmroi::rat_add;
using gmroi::rat_from_double;
using gmroi::rat_ge_scaled;
using gmroi::rat_to_double_le;

TEST_CASE("exact comparison and normalization") {
    CHECK(Rat{1, 3} == Rat{2, 6});
    CHECK(Rat{3, 10} < Rat{1, 3});
    CHECK(Rat{1, 3} <= Rat{1, 3});
    CHECK(Rat{99, 100} > Rat{98, 100});
    const auto big = std::numeric_limits<std::uint64_t>::max();
    CHECK(Rat{big, big} == Rat{1, 1});
    CHECK(Rat{big - 1, big} < Rat{1, 1});
    CHECK(Rat::make(6, 8).num == 3);
    CHECK(Rat::make(6, 8).den == 4);
}

TEST_CASE("addition reduces and flags overflow") {
    const auto half = rat_add(Rat{1, 3}, Rat{1, 6});
    REQUIRE(half);
    CHECK(half->num == 1);
    CHECK(half->den == 2);

    const auto big = std::uint64_t{1} << 62;
    const auto sum = rat_add(Rat{1, big}, Rat{1, big - 1});
    CHECK_FALSE(sum);
}

TEST_CASE("doubles decompose exactly") {
    for (const double v : {0.0, 0.5, 0.25, 0.91, 0.95, 1.0, 0.123456789}) {
        const auto r = rat_from_double(v);
        CHECK(r.exact);
        CHECK(r.value.to_double() == v);
    }
    const auto tiny = rat_from_double(1e-300);
    CHECK_FALSE(tiny.exact);
}

TEST_CASE("scaled comparison handles boundary equality") {
    // 19/10 >= 2 * 0.95 with 0.95 the usual double
    const auto floor = rat_from_double(0.95).value;
    const auto ge = rat_ge_scaled(Rat{19, 10}, floor, 2);
    REQUIRE(ge);
    CHECK(*ge == (1.9 >= 2 * 0.95));
    const auto lt = rat_ge_scaled(Rat{18, 10}, floor, 2);
    REQUIRE(lt);
    CHECK_FALSE(*lt);
    // exact boundary: sum 19/10 vs 2 * (19/20)
    const auto eq = rat_ge_scaled(Rat{19, 10}, Rat{19, 20}, 2);
    REQUIRE(eq);
    CHECK(*eq);
}

TEST_CASE("scaled comparison with a dyadic floor stays exact") {
    const auto floor = rat_from_double(0.91).value;  // denominator 2^52-ish
    const auto above = rat_ge_scaled(Rat{3641, 1000}, floor, 4);  // 3.641 vs 3.64
    REQUIRE(above);
    CHECK(*above);
    const auto below = rat_ge_scaled(Rat{3639, 1000}, floor, 4);
    REQUIRE(below);
    CHECK_FALSE(*below);
}

TEST_CASE("le rounding never lands above the rational") {
    for (const std::uint64_t den : {3ull, 7ull, 9ull, 11ull, 97ull}) {
        for (std::uint64_t num = 0; num <= den; ++num) {
            const double d = rat_to_double_le(Rat{num, den});
            const auto back = rat_from_double(d);
            REQUIRE(back.exact);
            CHECK(back.value <= Rat{num, den});
            CHECK(std::fabs(d - static_cast<double>(num) /
                                    static_cast<double>(den)) < 1e-15);
        }
    }
}

TEST_CASE("comparison agrees with long double away from ties") {
    gmroi::SplitMix64 rng(7);
    for (int i = 0; i < 2000; ++i) {
        const std::uint64_t b = 1 + rng.next() % 100000;
        const std::uint64_t d = 1 + rng.next() % 100000;
        const std::uint64_t a = rng.next() % (b + 1);
        const std::uint64_t c = rng.next() % (d + 1);
        const long double x = static_cast<long double>(a) / b;
        const long double y = static_cast<long double>(c) / d;
        if (std::fabs(x - y) < 1e-12L) continue;
        CHECK((Rat{a, b} < Rat{c, d}) == (x < y));
    }
}
