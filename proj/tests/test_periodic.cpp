#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "skewlab/periodic.hpp"

using namespace skewlab;

TEST_CASE("coordinates read the period word at i mod period, any sign") {
    PeriodicPoint p(Word::literal("221"));
    CHECK(p.period() == 3);
    CHECK(p.symbol_at(0) == 2);
    CHECK(p.symbol_at(1) == 2);
    CHECK(p.symbol_at(2) == 1);
    CHECK(p.symbol_at(3) == 2);
    CHECK(p.symbol_at(-1) == 1);
    CHECK(p.symbol_at(-2) == 2);
    CHECK(p.symbol_at(-3) == 2);
    CHECK(p.symbol_at(300) == 2);
    CHECK(p.symbol_at(-301) == 1);

    const std::vector<Symbol>& f = p.flat();
    REQUIRE(f.size() == 3);
    CHECK(f[0] == 2);
    CHECK(f[2] == 1);
}

TEST_CASE("window agreement matches direct symbol comparison") {
    PeriodicPoint u(Word::literal("221"));
    PeriodicPoint v(Word::literal("2212211"));
    for (std::int64_t i = -5; i <= 5; ++i)
        CHECK(window_agree(u, i, v, i, 0) ==
              (u.symbol_at(i) == v.symbol_at(i)));
    // same word, shifted phase
    CHECK(window_agree(u, 0, u, 3, 5));
    CHECK(window_agree(u, 0, u, 0, 50));
    CHECK(!window_agree(u, 0, u, 1, 1));
}

TEST_CASE("phased equality detects shifted copies of the same sequence") {
    PeriodicPoint a(Word::literal("12"));
    PeriodicPoint b(Word::literal("21"));
    CHECK(same_phased_sequence(a, 0, b, 1));
    CHECK(same_phased_sequence(a, 1, b, 0));
    CHECK(!same_phased_sequence(a, 0, b, 0));
    PeriodicPoint c(Word::literal("1212"));
    CHECK(same_phased_sequence(a, 0, c, 0));  // same sequence, longer word
}

TEST_CASE("shift distance frozen examples") {
    PeriodicPoint x1(Word::literal("221"));
    PeriodicPoint x2(Word::literal("2212211"));
    PeriodicPoint a(Word::literal("12"));
    PeriodicPoint b(Word::literal("21"));
    CHECK(shift_distance(x1, 0, x1, 0) == 0.0);
    CHECK(shift_distance(x1, 0, x1, 1) == 0.5);
    CHECK(shift_distance(x1, 0, x2, 0) == 0.25);
    CHECK(shift_distance(a, 0, b, 1) == 0.0);
}

TEST_CASE("shift distance cutoff returns the unresolved scale") {
    // words that agree on every scanned coordinate but are not equal as
    // phased sequences only happens beyond the cutoff; with a tiny cutoff
    // the scan reports 2^-(M+1)
    PeriodicPoint u(Word::literal("2222221"));
    PeriodicPoint v(Word::literal("22222221"));
    double d = shift_distance(u, 3, v, 3, 2);
    CHECK(d == doctest::Approx(std::ldexp(1.0, -3)));
}
