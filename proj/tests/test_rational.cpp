#include <catch2/catch_amalgamated.hpp>

#include "scatter/rational.hpp"

using namespace scatter;

TEST_CASE("rational basics") {
    Rat a = rat_of(1, 3);
    Rat b = rat_of(1, 6);
    REQUIRE(a + b == rat_of(1, 2));
    REQUIRE(to_double(rat_of(-3, 4)) == -0.75);
    REQUIRE(num_str(rat_of(2, -4)) == "-1");
    REQUIRE(den_str(rat_of(2, -4)) == "2");
}

TEST_CASE("rational parse round trip") {
    Rat r = rat_parse("-7", "12");
    REQUIRE(r == rat_of(-7, 12));
    REQUIRE(num_str(r) == "-7");
    REQUIRE(den_str(r) == "12");
}

TEST_CASE("snap finds nearby small-denominator rational") {
    auto s = snap_to_rational(0.25000003, 1e-6, 64);
    REQUIRE(s.has_value());
    REQUIRE(*s == rat_of(1, 4));

    auto t = snap_to_rational(0.333333332, 1e-6, 64);
    REQUIRE(t.has_value());
    REQUIRE(*t == rat_of(1, 3));

    auto u = snap_to_rational(-0.1249999997, 1e-6, 64);
    REQUIRE(u.has_value());
    REQUIRE(*u == rat_of(-1, 8));
}

TEST_CASE("snap rejects values with no close small fraction") {
    // 1/101 is not representable with denominator <= 64 within 1e-6
    auto s = snap_to_rational(1.0 / 101.0, 1e-6, 64);
    REQUIRE(!s.has_value());

    auto t = snap_to_rational(0.7071067811865476, 1e-9, 64);
    REQUIRE(!t.has_value());
}

TEST_CASE("snap prefers the simplest fraction inside the tolerance") {
    auto s = snap_to_rational(0.49, 0.02, 64);
    REQUIRE(s.has_value());
    REQUIRE(std::abs(to_double(*s) - 0.49) <= 0.02);
    // with max_den 2 the only candidate near 0.49 is 1/2
    auto t = snap_to_rational(0.49, 0.02, 2);
    REQUIRE(t.has_value());
    REQUIRE(*t == rat_of(1, 2));
    // a noisy near-zero estimate must collapse to zero, not to 1/64
    auto z = snap_to_rational(0.013, 0.1, 64);
    REQUIRE(z.has_value());
    REQUIRE(*z == 0);
}
