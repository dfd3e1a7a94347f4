#include <doctest.h>

#include "circ/interp.hpp"

using namespace circ;

namespace {

Value gate1(const Interpretation& i, const char* name, Value a) {
    return i.apply(*i.signature().find(name), {a})[0];
}
Value gate2(const Interpretation& i, const char* name, Value a, Value b) {
    return i.apply(*i.signature().find(name), {a, b})[0];
}

}  // namespace

TEST_CASE("belnap gate tables") {
    auto i = belnap();
    const Lattice& l = i->lattice();

    CHECK(l.size() == 4);
    CHECK(l.bottom() == kBot);
    CHECK(l.name(kBot) == "bot");
    CHECK(l.name(kTop) == "top");

    // Spot checks across the three gate tables.
    CHECK(gate2(*i, "and", kT, kF) == kF);
    CHECK(gate2(*i, "and", kBot, kT) == kBot);
    CHECK(gate2(*i, "and", kBot, kF) == kF);
    CHECK(gate2(*i, "and", kTop, kBot) == kF);
    CHECK(gate2(*i, "or", kBot, kF) == kBot);
    CHECK(gate2(*i, "or", kTop, kBot) == kT);
    CHECK(gate2(*i, "or", kTop, kF) == kTop);
    CHECK(gate1(*i, "not", kTop) == kTop);
    CHECK(gate1(*i, "not", kT) == kF);
    CHECK(gate1(*i, "not", kF) == kT);
    CHECK(gate1(*i, "not", kBot) == kBot);

    SUBCASE("commutativity of and/or") {
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                CHECK(gate2(*i, "and", Value{a}, Value{b}) == gate2(*i, "and", Value{b}, Value{a}));
                CHECK(gate2(*i, "or", Value{a}, Value{b}) == gate2(*i, "or", Value{b}, Value{a}));
            }
    }
    SUBCASE("de morgan") {
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                Value lhs = gate1(*i, "not", gate2(*i, "and", Value{a}, Value{b}));
                Value rhs = gate2(*i, "or", gate1(*i, "not", Value{a}), gate1(*i, "not", Value{b}));
                CHECK(lhs == rhs);
            }
    }
}

TEST_CASE("belnap information order and join") {
    const Lattice& l = belnap()->lattice();
    CHECK(l.leq(kBot, kF));
    CHECK(l.leq(kBot, kT));
    CHECK(l.leq(kF, kTop));
    CHECK(l.leq(kT, kTop));
    CHECK(!l.leq(kF, kT));
    CHECK(!l.leq(kT, kF));

    CHECK(l.join(kT, kF) == kTop);
    CHECK(l.join(kF, kT) == kTop);
    CHECK(l.join(kF, kF) == kF);
    for (int v = 0; v < 4; ++v) {
        CHECK(l.join(kBot, Value{v}) == Value{v});
        CHECK(l.join(Value{v}, kTop) == kTop);
    }

    SUBCASE("join laws") {
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                CHECK(l.join(Value{a}, Value{b}) == l.join(Value{b}, Value{a}));
                CHECK((l.leq(Value{a}, Value{b}) == (l.join(Value{a}, Value{b}) == Value{b})));
                for (int c = 0; c < 4; ++c)
                    CHECK(l.join(Value{a}, l.join(Value{b}, Value{c})) ==
                          l.join(l.join(Value{a}, Value{b}), Value{c}));
            }
    }
}

TEST_CASE("check_interpretation accepts belnap and flags bad tables") {
    CHECK(check_interpretation(*belnap()).empty());

    auto lattice = belnap()->lattice_ptr();

    SUBCASE("bottom preservation violation") {
        // Unary g with g(bot) = t.
        std::vector<std::vector<Word>> tables = {{{kT}, {kF}, {kT}, {kTop}}};
        Interpretation bad(lattice, Signature({{"g", 1, 1}}), tables);
        auto v = check_interpretation(bad);
        REQUIRE(!v.empty());
        CHECK(v[0].kind == Violation::Kind::NotBottomPreserving);
        CHECK(v[0].prim == "g");
    }
    SUBCASE("monotonicity violation at (t, top)") {
        // g(bot)=bot, g(f)=f, g(t)=f, g(top)=bot: f below t but g(t)=f not<=g(top)=bot.
        std::vector<std::vector<Word>> tables = {{{kBot}, {kF}, {kF}, {kBot}}};
        Interpretation bad(lattice, Signature({{"g", 1, 1}}), tables);
        auto v = check_interpretation(bad);
        REQUIRE(!v.empty());
        bool found = false;
        for (const auto& viol : v)
            if (viol.kind == Violation::Kind::NotMonotone && viol.input_a == Word{kT} && viol.input_b == Word{kTop})
                found = true;
        CHECK(found);
    }
    SUBCASE("monotone variant passes") {
        // g(bot)=bot, g(t)=f, g(top)=f, g(f)=f is monotone.
        std::vector<std::vector<Word>> tables = {{{kBot}, {kF}, {kF}, {kF}}};
        Interpretation ok(lattice, Signature({{"g", 1, 1}}), tables);
        CHECK(check_interpretation(ok).empty());
    }
}

TEST_CASE("lattice heights") {
    CHECK(belnap()->lattice().height() == 2);

    Lattice one({"x"}, {});
    CHECK(one.height() == 0);
    CHECK(one.bottom() == Value{0});

    Lattice two({"lo", "hi"}, {{0, 1}});
    CHECK(two.height() == 1);

    Lattice chain4({"a", "b", "c", "d"}, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
    CHECK(chain4.height() == 3);
}

TEST_CASE("lattice validation rejects bad orders") {
    // Missing transitivity: a<=b, b<=c, but not a<=c.
    CHECK_THROWS_AS(Lattice({"a", "b", "c"}, {{0, 1}, {1, 2}}), std::invalid_argument);
    // Two maximal elements with no upper bound.
    CHECK_THROWS_AS(Lattice({"a", "b", "c"}, {{0, 1}, {0, 2}}), std::invalid_argument);
    // Cycle.
    CHECK_THROWS_AS(Lattice({"a", "b"}, {{0, 1}, {1, 0}}), std::invalid_argument);
    // No least element (diamond without bottom is fine only with a bottom).
    CHECK_THROWS_AS(Lattice({"a", "b", "c"}, {{0, 2}, {1, 2}}), std::invalid_argument);
}

TEST_CASE("word indexing round trips") {
    for (int width = 0; width <= 3; ++width) {
        const size_t n = word_count(width, 4);
        for (size_t k = 0; k < n; ++k) {
            Word w = word_at(k, width, 4);
            CHECK(word_index(w, 4) == k);
        }
    }
}
