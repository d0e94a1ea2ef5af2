#include <catch2/catch_amalgamated.hpp>

#include "scatter/series.hpp"

using namespace scatter;

namespace {
TruncatedSeries one_plus_tx(int order) {
    auto f = TruncatedSeries::one(order);
    f.add_term({1, 0}, 1, Rat(1));
    return f;
}
}  // namespace

TEST_CASE("series construction and term access") {
    auto f = TruncatedSeries::monomial(4, {2, 1}, 3, rat_of(5, 2));
    REQUIRE(f.order() == 4);
    REQUIRE(f.coefficient({2, 1}, 3) == rat_of(5, 2));
    REQUIRE(f.coefficient({2, 1}, 2) == Rat(0));
    REQUIRE(!f.is_zero());
    REQUIRE(TruncatedSeries(4).is_zero());
    REQUIRE(TruncatedSeries::one(4).is_one());
    REQUIRE_THROWS(TruncatedSeries(-1));
}

TEST_CASE("terms beyond the truncation order are dropped") {
    TruncatedSeries f(2);
    f.add_term({1, 0}, 3, Rat(1));
    REQUIRE(f.is_zero());
    f.add_term({1, 0}, 2, Rat(1));
    f.add_term({1, 0}, 2, Rat(-1));
    REQUIRE(f.is_zero());
    REQUIRE(f.terms().empty());
}

TEST_CASE("product truncates at the common order") {
    auto f = one_plus_tx(2);
    auto g = f * f * f;  // (1 + t x)^3 mod t^3
    REQUIRE(g.coefficient({0, 0}, 0) == Rat(1));
    REQUIRE(g.coefficient({1, 0}, 1) == Rat(3));
    REQUIRE(g.coefficient({2, 0}, 2) == Rat(3));
    REQUIRE(g.coefficient({3, 0}, 3) == Rat(0));
    REQUIRE(g == series_pow(f, 3));
}

TEST_CASE("log of one plus t x") {
    auto lg = series_log(one_plus_tx(3));
    REQUIRE(lg.coefficient({1, 0}, 1) == Rat(1));
    REQUIRE(lg.coefficient({2, 0}, 2) == rat_of(-1, 2));
    REQUIRE(lg.coefficient({3, 0}, 3) == rat_of(1, 3));
    REQUIRE(lg.terms().size() == 3);
}

TEST_CASE("exp and log are mutually inverse") {
    auto g = TruncatedSeries::monomial(5, {1, 1}, 2, Rat(2)) +
             TruncatedSeries::monomial(5, {0, 1}, 1, rat_of(-1, 3)) +
             TruncatedSeries::monomial(5, {2, 1}, 3, rat_of(7, 5));
    auto f = series_exp(g);
    REQUIRE(series_log(f) == g);

    auto u = one_plus_tx(5) + TruncatedSeries::monomial(5, {1, 2}, 4, Rat(-3));
    REQUIRE(series_exp(series_log(u)) == u);
}

TEST_CASE("inverse of a unit series") {
    auto f = one_plus_tx(3);
    auto inv = series_inv(f);
    REQUIRE(inv.coefficient({1, 0}, 1) == Rat(-1));
    REQUIRE(inv.coefficient({2, 0}, 2) == Rat(1));
    REQUIRE(inv.coefficient({3, 0}, 3) == Rat(-1));
    REQUIRE((f * inv).is_one());
    REQUIRE(series_pow(f, -2) == inv * inv);
}

TEST_CASE("exp rejects terms of order zero") {
    auto bad = TruncatedSeries::one(3);
    REQUIRE_THROWS(series_exp(bad));
}

TEST_CASE("log and inverse require unit constant term") {
    auto no_const = TruncatedSeries::monomial(3, {1, 0}, 1, Rat(1));
    REQUIRE_THROWS(series_log(no_const));
    REQUIRE_THROWS(series_inv(no_const));
    auto wrong_const = TruncatedSeries::monomial(3, {0, 0}, 0, Rat(2));
    REQUIRE_THROWS(series_log(wrong_const));
}

TEST_CASE("order mismatch is an error") {
    auto f = TruncatedSeries::one(3);
    auto g = TruncatedSeries::one(4);
    REQUIRE_THROWS(f + g);
    REQUIRE_THROWS(f * g);
    REQUIRE(f.truncated(4) + g == TruncatedSeries::one(4) + TruncatedSeries::one(4));
}

TEST_CASE("classical wall function expansions") {
    // (1 - t^2 x y)^(-4) mod t^5 = 1 + 4 t^2 x y + 10 t^4 x^2 y^2
    auto base = TruncatedSeries::one(5) +
                TruncatedSeries::monomial(5, {1, 1}, 2, Rat(-1));
    auto f = series_pow(base, -4);
    REQUIRE(f.coefficient({1, 1}, 2) == Rat(4));
    REQUIRE(f.coefficient({2, 2}, 4) == Rat(10));

    // (1 + t^3 x^2 y)^2 mod t^7 = 1 + 2 t^3 x^2 y + t^6 x^4 y^2
    auto g = series_pow(TruncatedSeries::one(7) +
                            TruncatedSeries::monomial(7, {2, 1}, 3, Rat(1)),
                        2);
    REQUIRE(g.coefficient({2, 1}, 3) == Rat(2));
    REQUIRE(g.coefficient({4, 2}, 6) == Rat(1));
}
