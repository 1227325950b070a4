#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>
#include <random>

#include "es/solver.hpp"

using namespace es;

namespace {

// The plain n1/n2 loop, straight from the definition.
std::optional<SolutionTriple> brute_fallback(u64 n) {
    for (u64 n1 = n / 4 + 1; n1 <= 3 * n / 4; ++n1) {
        const u64 num = 4 * n1 - n, den = n * n1;
        const u64 g = std::gcd(num, den);
        const u64 p = num / g, q = den / g;
        for (u64 n2 = (q + p - 1) / p; n2 <= 2 * q / p; ++n2) {
            if (p * n2 <= q) continue;
            const u64 top = q * n2, bot = p * n2 - q;
            if (top % bot == 0) return make_triple(n, n1, n2, top / bot);
        }
    }
    return std::nullopt;
}

Rule last_rule(const SolveResult& r) { return r.trace.steps.back().rule; }

}  // namespace

TEST_CASE("closed-form examples") {
    auto r6 = solve(6);
    CHECK(r6.triple == SolutionTriple{6, 3, 4, 12});
    CHECK(last_rule(r6) == Rule::Even);
    CHECK(r6.trace.steps.back().detail == std::vector<u64>{3});

    auto r7 = solve(7);
    CHECK(r7.triple == SolutionTriple{7, 2, 15, 210});
    CHECK(last_rule(r7) == Rule::Mod4Is3);
    CHECK(r7.trace.steps.back().detail == std::vector<u64>{2});

    auto r13 = solve(13);
    CHECK(r13.triple == SolutionTriple{13, 4, 26, 52});
    CHECK(last_rule(r13) == Rule::Mod24Is13);

    auto r25 = solve(25);
    CHECK(r25.triple == SolutionTriple{25, 10, 25, 50});
    REQUIRE(r25.trace.steps.size() == 2);
    CHECK(r25.trace.steps[0].rule == Rule::CompositeScale);
    CHECK(r25.trace.steps[0].detail == std::vector<u64>{5});
    CHECK(r25.trace.steps[1].rule == Rule::Mod3Is2);

    auto r97 = solve(97);
    CHECK(r97.triple == SolutionTriple{97, 28, 194, 2716});
    CHECK(last_rule(r97) == Rule::Tame);
    CHECK(r97.trace.steps.back().detail == std::vector<u64>{4, 4, 14, 1});
}

TEST_CASE("small n") {
    for (u64 n : {3, 4, 5}) {
        const auto r = solve(n);
        CHECK(r.resolved);
        CHECK(verify_decomposition(n, r.triple));
    }
    CHECK_THROWS_AS(solve(2), std::domain_error);
    CHECK_THROWS_AS(solve(0), std::domain_error);
}

TEST_CASE("rule priority") {
    CHECK(last_rule(solve(12)) == Rule::Even);  // n = 0 mod 6 goes to the first rule
    CHECK(last_rule(solve(9)) == Rule::Mult3);
    CHECK(last_rule(solve(11)) == Rule::Mod3Is2);
    CHECK(last_rule(solve(19)) == Rule::Mod4Is3);
    CHECK(last_rule(solve(37)) == Rule::Mod24Is13);
    CHECK(last_rule(solve(409)) == Rule::ExhaustiveFallback);  // m = 17, wild
    // 1 mod 24 composite: 73 * 97 = 7081
    const auto r = solve(7081);
    CHECK(r.trace.steps.front().rule == Rule::CompositeScale);
    CHECK(r.trace.steps.front().detail == std::vector<u64>{73});
}

TEST_CASE("fallback examples") {
    const auto f5 = exhaustive_fallback(5);
    REQUIRE(f5);
    CHECK(f5->n1 == 2);
    CHECK(verify_decomposition(5, *f5));
    const auto f3 = exhaustive_fallback(3);
    REQUIRE(f3);
    CHECK(verify_decomposition(3, *f3));
    const auto f4 = exhaustive_fallback(4);
    REQUIRE(f4);
    CHECK(verify_decomposition(4, *f4));
}

TEST_CASE("fallback equals the plain n2 loop") {
    for (u64 n = 3; n <= 2500; ++n) {
        CAPTURE(n);
        REQUIRE(exhaustive_fallback(n) == brute_fallback(n));
    }
    for (u64 m : {17, 24, 232, 400, 997}) REQUIRE(exhaustive_fallback(24 * m + 1) == brute_fallback(24 * m + 1));
}

TEST_CASE("every n up to 20000 solves, verifies and replays") {
    const auto spf = sieve_spf(20001);
    for (u64 n = 3; n <= 20000; ++n) {
        CAPTURE(n);
        const auto r = solve(n, &spf);
        REQUIRE(r.resolved);
        REQUIRE(verify_decomposition(n, r.triple));
        REQUIRE(r.triple.n1 <= r.triple.n2);
        REQUIRE(r.triple.n2 <= r.triple.n3);
        REQUIRE(replay(n, r.trace) == r.triple);
        if (n % 97 == 0) REQUIRE(solve(n).triple == r.triple);  // no table, same answer
    }
}

TEST_CASE("replay rejects inconsistent traces") {
    auto r = solve(25);
    CHECK_THROWS_AS(replay(26, r.trace), std::invalid_argument);
    r.trace.steps.clear();
    CHECK_THROWS_AS(replay(25, r.trace), std::invalid_argument);
    DerivationTrace t{{{Rule::Even, {4}}}};
    CHECK(replay(8, t) == SolutionTriple{8, 4, 5, 20});
    CHECK_THROWS_AS(replay(10, t), std::invalid_argument);
}

TEST_CASE("scaling a verified triple by p verifies against p*n (random)") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 200; ++i) {
        const u64 n = 3 + rng() % 5000;
        const u64 p = 2 + rng() % 1000;
        const auto t = solve(n).triple;
        const auto s = scale_triple(t, p);
        REQUIRE(s.n == n * p);
        REQUIRE(verify_decomposition(s.n, s));
    }
}

TEST_CASE("overflow is reported") {
    // the 3 mod 4 rule squares k(4k-1); past about 2^17 it cannot fit
    CHECK_THROWS_AS(solve(4'000'000'003ull), std::overflow_error);
}
