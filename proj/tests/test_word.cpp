#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "skewlab/errors.hpp"
#include "skewlab/word.hpp"

using namespace skewlab;

TEST_CASE("literal basics") {
    Word w = Word::literal("121");
    CHECK(w.length() == 3);
    CHECK(w.at(0) == 1);
    CHECK(w.at(1) == 2);
    CHECK(w.at(2) == 1);
    CHECK(w.max_symbol() == 2);
    CHECK(w.expand_digits(16) == "121");
    CHECK(!w.empty());
    CHECK(Word().empty());
    CHECK(Word().length() == 0);
    CHECK_THROWS_AS((void)w.at(3), Error);
}

TEST_CASE("power and concat compose lengths and symbols") {
    Word base = Word::literal("12");
    Word p = Word::power(base, 3);
    CHECK(p.length() == 6);
    CHECK(p.expand_digits(16) == "121212");

    Word c = Word::concat(p, Word::literal("2"));
    CHECK(c.length() == 7);
    CHECK(c.expand_digits(16) == "1212122");
    CHECK(c.max_symbol() == 2);

    // the stage shape: xi' = xi^k alpha, nested twice
    Word xi1 = Word::concat(Word::power(Word::literal("2"), 2),
                            Word::literal("1"));
    Word xi2 = Word::concat(Word::power(xi1, 2), Word::literal("1"));
    CHECK(xi1.expand_digits(16) == "221");
    CHECK(xi2.expand_digits(16) == "2212211");
    CHECK(xi2.length() == 7);
    CHECK(xi2.at(6) == 1);
}

TEST_CASE("indexing a deep power tree stays consistent with expansion") {
    Word w = Word::literal("2");
    for (int i = 0; i < 6; ++i)
        w = Word::concat(Word::power(w, 2), Word::literal("1"));
    CHECK(w.length() == 127);
    std::string flat = w.expand_digits(1 << 20);
    REQUIRE(flat.size() == 127);
    for (std::uint64_t i = 0; i < w.length(); ++i)
        CHECK(w.at(i) == Symbol(flat[i] - '0'));
}

TEST_CASE("for_each_range streams exactly the requested slice") {
    Word w = Word::concat(Word::power(Word::literal("122"), 5),
                          Word::literal("21"));
    std::string flat = w.expand_digits(64);
    std::mt19937 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        std::uint64_t b = rng() % (w.length() + 1);
        std::uint64_t e = b + rng() % (w.length() + 1 - b);
        std::string got;
        w.for_each_range(b, e, [&](Symbol s) { got.push_back(char('0' + s)); });
        CHECK(got == flat.substr(b, e - b));
    }
    CHECK_THROWS_AS(w.for_each_range(3, w.length() + 1, [](Symbol) {}), Error);
}

TEST_CASE("same_expansion compares by content, not by tree shape") {
    Word a = Word::power(Word::literal("12"), 2);
    Word b = Word::literal("1212");
    Word c = Word::literal("1221");
    CHECK(a.same_expansion(b, 64));
    CHECK(!a.same_expansion(c, 64));
    CHECK(!a.same_expansion(Word::literal("121"), 64));
}

TEST_CASE("text grammar round trip") {
    Word w = Word::concat(
        Word::power(Word::concat(Word::power(Word::literal("2"), 2),
                                 Word::literal("1")),
                    3),
        Word::literal("12"));
    Word back = Word::parse_text(w.to_text());
    CHECK(back.length() == w.length());
    CHECK(back.same_expansion(w, 1 << 16));

    CHECK(Word::parse_text("LITERAL:\"121\"").expand_digits(8) == "121");
    Word pw = Word::parse_text("POWER(LITERAL:\"21\",3)");
    CHECK(pw.expand_digits(16) == "212121");
    // n-ary concat accepted on input
    Word nary = Word::parse_text(
        "CONCAT(LITERAL:\"1\",LITERAL:\"2\",LITERAL:\"1\")");
    CHECK(nary.expand_digits(8) == "121");
}

TEST_CASE("text grammar rejects malformed input") {
    CHECK_THROWS_AS(Word::parse_text("LITERAL:\"0\""), Error);
    CHECK_THROWS_AS(Word::parse_text("LITERAL:\"a\""), Error);
    CHECK_THROWS_AS(Word::parse_text("POWER(LITERAL:\"1\")"), Error);
    CHECK_THROWS_AS(Word::parse_text("NOPE(LITERAL:\"1\",2)"), Error);
    CHECK_THROWS_AS(Word::parse_text(""), Error);
}

TEST_CASE("expansion cap guards huge words") {
    Word w = Word::power(Word::literal("12"), 1u << 20);
    CHECK(w.length() == (std::uint64_t(1) << 21));
    CHECK_THROWS_AS(w.expand(1024), Error);
}
