#include <catch2/catch_amalgamated.hpp>

#include "scatter/vec.hpp"

using namespace scatter;

TEST_CASE("integer vector arithmetic") {
    IVec a{2, -3};
    IVec b{1, 5};
    REQUIRE(a + b == IVec{3, 2});
    REQUIRE(a - b == IVec{1, -8});
    REQUIRE(-a == IVec{-2, 3});
    REQUIRE(a * 3 == IVec{6, -9});
    REQUIRE(dot(a, b) == -13);
    REQUIRE(cross(a, b) == 13);
    REQUIRE(rot90(IVec{1, 0}) == IVec{0, 1});
    REQUIRE(rot90(IVec{0, 1}) == IVec{-1, 0});
}

TEST_CASE("primitive decomposition") {
    auto p = primitive_part(IVec{6, -9});
    REQUIRE(p.direction == IVec{2, -3});
    REQUIRE(p.multiple == 3);

    auto q = primitive_part(IVec{0, -4});
    REQUIRE(q.direction == IVec{0, -1});
    REQUIRE(q.multiple == 4);

    REQUIRE(is_primitive(IVec{2, 1}));
    REQUIRE(!is_primitive(IVec{2, 2}));
    REQUIRE_THROWS(primitive_part(IVec{0, 0}));
}

TEST_CASE("rational vector arithmetic and pairing") {
    QVec u{rat_of(1, 2), rat_of(-1, 3)};
    QVec v{rat_of(1, 6), rat_of(1, 3)};
    REQUIRE(u + v == QVec{rat_of(2, 3), Rat(0)});
    REQUIRE((u * Rat(6)) == QVec{Rat(3), Rat(-2)});
    REQUIRE(pairing(IVec{2, 3}, u) == Rat(0));
    REQUIRE(pairing(IVec{1, 0}, v) == rat_of(1, 6));
}

TEST_CASE("factoring a rational vector into scale times primitive direction") {
    auto f = factor_direction(QVec{rat_of(3, 2), rat_of(-9, 4)});
    REQUIRE(f.direction == IVec{2, -3});
    REQUIRE(f.scale == rat_of(3, 4));

    auto g = factor_direction(QVec{Rat(0), rat_of(5, 7)});
    REQUIRE(g.direction == IVec{0, 1});
    REQUIRE(g.scale == rat_of(5, 7));
}
