#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "es/expr.hpp"

using namespace es;

namespace {

Rational ev(const char* text, std::vector<i64> vals = {}, std::vector<std::string> names = {}) {
    if (names.empty())
        for (std::size_t i = 0; i < vals.size(); ++i) names.push_back(std::string(1, static_cast<char>('a' + i)));
    return Expr::parse(text, names).eval(vals);
}

}  // namespace

TEST_CASE("rational normalization") {
    CHECK(Rational(6, 4) == Rational(3, 2));
    CHECK(Rational(3, -6) == Rational(-1, 2));
    CHECK(Rational(0, 5) == Rational(0));
    CHECK(Rational(6, 3).is_integer());
    CHECK(Rational(-7, 2).str() == "-7/2");
    CHECK_THROWS(Rational(1, 0));
    CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(-1, 3) > Rational(-1, 2));
}

TEST_CASE("rational overflow is reported, not wrapped") {
    const Rational big(static_cast<i128>(1) << 100);
    CHECK_THROWS_AS(big * big, std::overflow_error);
}

TEST_CASE("expression arithmetic") {
    CHECK(ev("1+2*3") == Rational(7));
    CHECK(ev("(1+2)*3") == Rational(9));
    CHECK(ev("2^3^2") == Rational(512));  // right associative
    CHECK(ev("-2^2") == Rational(-4));
    CHECK(ev("2^(0-2)") == Rational(1, 4));
    CHECK(ev("7/2") == Rational(7, 2));
    CHECK(ev("7%3") == Rational(1));
    CHECK(ev("-7%3") == Rational(2));  // floor-style residue
    CHECK(ev("a*b-c", {3, 4, 5}) == Rational(7));
    CHECK(ev("s1+s", {10, 1}, {"s1", "s"}) == Rational(11));
}

TEST_CASE("expression errors") {
    CHECK_THROWS_AS(Expr::parse("1+", {}), ExprError);
    CHECK_THROWS_AS(Expr::parse("x", {"y"}), ExprError);
    CHECK_THROWS_AS(Expr::parse("(1", {}), ExprError);
    CHECK_THROWS_AS(Expr::parse("1 2", {}), ExprError);
    CHECK_THROWS_AS(ev("(7/2)%3"), ExprError);
    CHECK_THROWS_AS(ev("1/0"), std::exception);
}

TEST_CASE("constraints and congruences") {
    const std::vector<std::string> names{"r", "c"};
    const auto div = Constraint::parse("3 | c*(2^(r+4)-1)-1", names);
    CHECK(div.holds(std::vector<i64>{1, 1}));  // 31 - 1
    CHECK_FALSE(div.holds(std::vector<i64>{1, 2}));
    CHECK_FALSE(div.holds(std::vector<i64>{1, 0}));
    const auto ne = Constraint::parse("r % 3 != 2", names);
    CHECK(ne.holds(std::vector<i64>{1, 0}));
    CHECK_FALSE(ne.holds(std::vector<i64>{5, 0}));
    const auto cg = Congruence::parse("7*r+4 (mod 12*r+7)", names);
    CHECK(cg.holds(Rational(4), std::vector<i64>{0, 0}));
    CHECK(cg.holds(Rational(25), std::vector<i64>{0, 0}));
    CHECK_FALSE(cg.holds(Rational(26), std::vector<i64>{0, 0}));
    CHECK(cg.modulus(std::vector<i64>{2, 0}) == Rational(31));
    CHECK(split_list(" a ;b;  ") == std::vector<std::string>{"a", "b"});
    CHECK(split_list("").empty());
}

TEST_CASE("evaluation matches direct arithmetic on random inputs") {
    const auto e = Expr::parse("3*s-t+(16*t+3+d*(24*t+5))*(12*s+1)", {"s", "t", "d"});
    std::mt19937_64 rng(11);
    for (int i = 0; i < 5000; ++i) {
        const i64 s = rng() % 1000, t = rng() % 1000, d = rng() % 1000;
        const i64 want = 3 * s - t + (16 * t + 3 + d * (24 * t + 5)) * (12 * s + 1);
        REQUIRE(e.eval(std::vector<i64>{s, t, d}) == Rational(want));
    }
}
