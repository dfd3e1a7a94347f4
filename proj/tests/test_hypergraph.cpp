#include <doctest.h>
#include <sstream>

#include "circ/hypergraph.hpp"
#include "corpus.hpp"

using namespace circ;
using namespace circ::tests;

namespace {

/// Random terms over gates, swaps, delays and traces only: the traced
/// fragment, with no wire copying or joining.
TermPtr random_traced_term(Rng& rng) {
    int width = 1 + rng.below(3);
    TermPtr t = identity(width);
    int steps = 2 + rng.below(6);
    const Signature& sig = belnap()->signature();
    for (int k = 0; k < steps; ++k) {
        switch (rng.below(4)) {
            case 0: {
                const Primitive& p = sig.prim(rng.below(3));
                if (width < p.arity) break;
                int pos = rng.below(width - p.arity + 1);
                t = compose(t, tensor(tensor(identity(pos), prim(sig, p.name)), identity(width - pos - p.arity)));
                width += p.coarity - p.arity;
                break;
            }
            case 1: {
                if (width < 2) break;
                int pos = rng.below(width - 1);
                t = compose(t, tensor(tensor(identity(pos), symmetry(1, 1)), identity(width - pos - 2)));
                break;
            }
            case 2: {
                if (width == 0) break;
                int pos = rng.below(width);
                t = compose(t, tensor(tensor(identity(pos), delay(1)), identity(width - pos - 1)));
                break;
            }
            default: {
                if (width >= 4) break;
                t = tensor(t, value_word({Value{rng.below(4)}}));
                ++width;
                break;
            }
        }
    }
    if (t->inputs >= 2 && width >= 2 && rng.chance(50)) t = trace(1, t);
    return t;
}

/// Traced terms extended with forks and eliminators (but no joins).
TermPtr random_comonoid_term(Rng& rng) {
    int width = 1 + rng.below(3);
    TermPtr t = identity(width);
    int steps = 3 + rng.below(7);
    const Signature& sig = belnap()->signature();
    for (int k = 0; k < steps; ++k) {
        switch (rng.below(5)) {
            case 0: {
                const Primitive& p = sig.prim(rng.below(3));
                if (width < p.arity) break;
                int pos = rng.below(width - p.arity + 1);
                t = compose(t, tensor(tensor(identity(pos), prim(sig, p.name)), identity(width - pos - p.arity)));
                width += p.coarity - p.arity;
                break;
            }
            case 1: {
                if (width == 0 || width > 4) break;
                int pos = rng.below(width);
                t = compose(t, tensor(tensor(identity(pos), circ::fork()), identity(width - pos - 1)));
                ++width;
                break;
            }
            case 2: {
                if (width < 2) break;
                int pos = rng.below(width);
                t = compose(t, tensor(tensor(identity(pos), elim()), identity(width - pos - 1)));
                --width;
                break;
            }
            case 3: {
                if (width < 2) break;
                int pos = rng.below(width - 1);
                t = compose(t, tensor(tensor(identity(pos), symmetry(1, 1)), identity(width - pos - 2)));
                break;
            }
            default: {
                if (width == 0) break;
                int pos = rng.below(width);
                t = compose(t, tensor(tensor(identity(pos), delay(1)), identity(width - pos - 1)));
                break;
            }
        }
    }
    if (t->inputs >= 2 && width >= 2 && rng.chance(50)) t = trace(1, t);
    return t;
}

}  // namespace

TEST_CASE("term_to_cospan on basic shapes") {
    SUBCASE("a single generator") {
        auto c = term_to_cospan(prim("phi", 2, 1));
        CHECK(c.graph.n_vertices == 3);
        CHECK(c.graph.edges.size() == 1);
        CHECK(c.inputs.size() == 2);
        CHECK(c.outputs.size() == 1);
        CHECK(check_partial_monogamous(c).ok);
        CHECK(check_monogamous_acyclic(c).ok);
    }
    SUBCASE("a closed loop is an isolated vertex") {
        auto c = term_to_cospan(trace(1, identity(1)));
        CHECK(c.graph.n_vertices == 1);
        CHECK(c.graph.edges.empty());
        CHECK(c.inputs.empty());
        CHECK(c.outputs.empty());
        CHECK(degree(c.graph, 0) == Degree{0, 0});
        CHECK(check_partial_monogamous(c).ok);
        CHECK(!check_monogamous_acyclic(c).ok);
    }
    SUBCASE("a traced generator becomes a self-connection") {
        auto c = term_to_cospan(trace(1, prim("e", 1, 1)));
        CHECK(c.graph.n_vertices == 1);
        REQUIRE(c.graph.edges.size() == 1);
        CHECK(c.graph.edges[0].sources == std::vector<int>{0});
        CHECK(c.graph.edges[0].targets == std::vector<int>{0});
        CHECK(check_partial_monogamous(c).ok);
    }
    SUBCASE("fork shares a vertex") {
        auto c = term_to_cospan(circ::fork());
        CHECK(c.graph.n_vertices == 1);
        CHECK(c.outputs == std::vector<int>{0, 0});
    }
}

TEST_CASE("degrees") {
    Hypergraph g;
    g.n_vertices = 3;
    g.edges.push_back({EdgeLabel::gate("a", 1, 1), {0}, {1}});
    g.edges.push_back({EdgeLabel::gate("b", 1, 1), {1}, {2}});
    CHECK(degree(g, 0) == Degree{0, 1});
    CHECK(degree(g, 1) == Degree{1, 1});
    CHECK(degree(g, 2) == Degree{1, 0});

    Hypergraph h;
    h.n_vertices = 1;
    CHECK(degree(h, 0) == Degree{0, 0});

    SUBCASE("bookkeeping: total in-degree equals total target count") {
        Rng rng(3);
        for (int k = 0; k < 20; ++k) {
            auto c = term_to_cospan(random_comonoid_term(rng));
            auto deg = degrees(c.graph);
            int total_in = 0, total_targets = 0;
            for (const auto& d : deg) total_in += d.in_degree;
            for (const auto& e : c.graph.edges) total_targets += static_cast<int>(e.targets.size());
            CHECK(total_in == total_targets);
        }
    }
}

TEST_CASE("validators") {
    SUBCASE("traced terms are partial monogamous") {
        Rng rng(101);
        for (int k = 0; k < 40; ++k) {
            TermPtr t = random_traced_term(rng);
            CHECK(check_partial_monogamous(term_to_cospan(t)).ok);
        }
    }
    SUBCASE("trace-free symmetric monoidal terms are monogamous acyclic") {
        Rng rng(103);
        const Signature& sig = belnap()->signature();
        for (int k = 0; k < 30; ++k) {
            // gates and swaps only
            int width = 2 + rng.below(2);
            TermPtr t = identity(width);
            for (int s = 0; s < 4; ++s) {
                if (rng.chance(60) && width >= 2) {
                    int pos = rng.below(width - 1);
                    t = compose(t, tensor(tensor(identity(pos), prim(sig, "and")), identity(width - pos - 2)));
                    --width;
                } else if (width >= 2) {
                    int pos = rng.below(width - 1);
                    t = compose(t, tensor(tensor(identity(pos), symmetry(1, 1)), identity(width - pos - 2)));
                }
            }
            CHECK(check_monogamous_acyclic(term_to_cospan(t)).ok);
        }
    }
    SUBCASE("comonoid terms are partial left-monogamous") {
        Rng rng(107);
        for (int k = 0; k < 40; ++k) {
            TermPtr t = random_comonoid_term(rng);
            CHECK(check_partial_left_monogamous(term_to_cospan(t)).ok);
        }
    }
    SUBCASE("fork-shaped cospan is left but not fully monogamous") {
        auto c = term_to_cospan(circ::fork());
        CHECK(check_partial_left_monogamous(c).ok);
        CHECK(!check_partial_monogamous(c).ok);
    }
    SUBCASE("join-shaped cospan fails the left validator") {
        auto c = term_to_cospan(join_wires());
        CHECK(!check_partial_left_monogamous(c).ok);
    }
    SUBCASE("discrete identity cospan is partial monogamous") {
        auto c = term_to_cospan(identity(3));
        CHECK(check_partial_monogamous(c).ok);
        CHECK(check_monogamous_acyclic(c).ok);
    }
    SUBCASE("in-degree two is rejected everywhere") {
        Hypergraph g;
        g.n_vertices = 3;
        g.edges.push_back({EdgeLabel::gate("a", 1, 1), {0}, {2}});
        g.edges.push_back({EdgeLabel::gate("b", 1, 1), {1}, {2}});
        InterfacedHypergraph c{g, {0, 1}, {2}};
        CHECK(!check_partial_monogamous(c).ok);
        CHECK(!check_partial_left_monogamous(c).ok);
    }
    SUBCASE("non-injective outputs fail partial monogamy only") {
        Hypergraph g;
        g.n_vertices = 1;
        InterfacedHypergraph c{g, {0}, {0, 0}};
        CHECK(!check_partial_monogamous(c).ok);
        CHECK(check_partial_left_monogamous(c).ok);
    }
}

TEST_CASE("cospan algebra") {
    SUBCASE("functoriality over composition, tensor and trace") {
        Rng rng(211);
        for (int k = 0; k < 30; ++k) {
            TermPtr f = random_traced_term(rng);
            TermPtr g = random_traced_term(rng);
            auto cf = term_to_cospan(f);
            auto cg = term_to_cospan(g);
            if (f->outputs == g->inputs) {
                auto lhs = term_to_cospan(compose(f, g));
                auto rhs = compose_cospans(cf, cg);
                CHECK(cospan_iso(lhs, rhs).has_value());
            }
            auto lhs_t = term_to_cospan(tensor(f, g));
            auto rhs_t = tensor_cospans(cf, cg);
            CHECK(cospan_iso(lhs_t, rhs_t).has_value());
            if (f->inputs >= 1 && f->outputs >= 1) {
                auto lhs_tr = term_to_cospan(trace(1, f));
                auto rhs_tr = trace_cospan(1, cf);
                CHECK(cospan_iso(lhs_tr, rhs_tr).has_value());
            }
        }
    }
    SUBCASE("composition with the identity cospan") {
        auto c = term_to_cospan(compose(belnap_gate("and"), belnap_gate("not")));
        auto idc = term_to_cospan(identity(1));
        CHECK(cospan_iso(compose_cospans(c, idc), c).has_value());
        auto id2 = term_to_cospan(identity(2));
        CHECK(cospan_iso(compose_cospans(id2, c), c).has_value());
    }
    SUBCASE("composition and tensor preserve the validators") {
        Rng rng(227);
        for (int k = 0; k < 20; ++k) {
            TermPtr f = random_traced_term(rng);
            TermPtr g = random_traced_term(rng);
            auto cf = term_to_cospan(f);
            auto cg = term_to_cospan(g);
            CHECK(check_partial_monogamous(tensor_cospans(cf, cg)).ok);
            if (f->outputs == g->inputs) CHECK(check_partial_monogamous(compose_cospans(cf, cg)).ok);

            TermPtr cf2 = random_comonoid_term(rng);
            TermPtr cg2 = random_comonoid_term(rng);
            auto a = term_to_cospan(cf2);
            auto b = term_to_cospan(cg2);
            CHECK(check_partial_left_monogamous(tensor_cospans(a, b)).ok);
            if (cf2->outputs == cg2->inputs) CHECK(check_partial_left_monogamous(compose_cospans(a, b)).ok);
            if (a.n_inputs() >= 1 && a.n_outputs() >= 1)
                CHECK(check_partial_left_monogamous(trace_cospan(1, a)).ok);
        }
    }
    SUBCASE("trace preserves partial monogamy") {
        Rng rng(223);
        for (int k = 0; k < 30; ++k) {
            TermPtr f = random_traced_term(rng);
            if (f->inputs < 1 || f->outputs < 1) continue;
            auto c = term_to_cospan(f);
            REQUIRE(check_partial_monogamous(c).ok);
            CHECK(check_partial_monogamous(trace_cospan(1, c)).ok);
        }
    }
}

TEST_CASE("cospan isomorphism") {
    SUBCASE("identity on itself") {
        auto c = term_to_cospan(sr_latch());
        auto iso = cospan_iso(c, c);
        REQUIRE(iso.has_value());
        for (size_t v = 0; v < iso->vertex_map.size(); ++v)
            CHECK(iso->vertex_map[v] == static_cast<int>(v));
    }
    SUBCASE("three tilings of one diagram") {
        TermPtr t1 = tensor(belnap_gate("or"), compose(belnap_gate("and"), belnap_gate("not")));
        TermPtr t2 = compose(tensor(identity(2), belnap_gate("and")), tensor(belnap_gate("or"), belnap_gate("not")));
        TermPtr t3 = compose(tensor(belnap_gate("or"), belnap_gate("and")), tensor(identity(1), belnap_gate("not")));
        auto c1 = term_to_cospan(t1);
        auto c2 = term_to_cospan(t2);
        auto c3 = term_to_cospan(t3);
        CHECK(cospan_iso(c1, c2).has_value());
        CHECK(cospan_iso(c2, c3).has_value());
        CHECK(cospan_iso(c1, c3).has_value());
    }
    SUBCASE("different labels never match") {
        auto a = term_to_cospan(belnap_gate("and"));
        auto b = term_to_cospan(belnap_gate("or"));
        CHECK(!cospan_iso(a, b).has_value());
    }
    SUBCASE("interface order matters") {
        auto id2 = term_to_cospan(identity(2));
        auto swap = term_to_cospan(symmetry(1, 1));
        CHECK(!cospan_iso(id2, swap).has_value());
    }
}

TEST_CASE("term extraction") {
    SUBCASE("round trip over the traced corpus") {
        Rng rng(307);
        for (int k = 0; k < 40; ++k) {
            TermPtr t = random_traced_term(rng);
            auto c = term_to_cospan(t);
            TermPtr back = extract_term(c, ExtractMode::Traced);
            auto c2 = term_to_cospan(back);
            CHECK(cospan_iso(c, c2).has_value());
        }
    }
    SUBCASE("round trip over the comonoid corpus") {
        Rng rng(311);
        for (int k = 0; k < 40; ++k) {
            TermPtr t = random_comonoid_term(rng);
            auto c = term_to_cospan(t);
            TermPtr back = extract_term(c, ExtractMode::TracedComonoid);
            auto c2 = term_to_cospan(back);
            CHECK(cospan_iso(c, c2).has_value());
        }
    }
    SUBCASE("discrete cospans extract to wiring only") {
        auto c = term_to_cospan(symmetry(2, 1));
        TermPtr back = extract_term(c, ExtractMode::Traced);
        CHECK(stats(back).gate_count == 0);
        CHECK(cospan_iso(term_to_cospan(back), c).has_value());
    }
    SUBCASE("self-loop extracts back to its own shape") {
        auto c = term_to_cospan(trace(1, prim("e", 1, 1)));
        TermPtr back = extract_term(c, ExtractMode::Traced);
        CHECK(cospan_iso(term_to_cospan(back), c).has_value());
    }
    SUBCASE("mode validation failures are reported") {
        auto c = term_to_cospan(circ::fork());
        CHECK_THROWS_AS(extract_term(c, ExtractMode::Traced), std::invalid_argument);
        CHECK_NOTHROW(extract_term(c, ExtractMode::TracedComonoid));
        auto j = term_to_cospan(join_wires());
        CHECK_THROWS_AS(extract_term(j, ExtractMode::TracedComonoid), std::invalid_argument);
    }
    SUBCASE("traced loop over a fork") {
        // Feed a fork's first branch back into itself: one vertex, fan-out 1.
        auto c = trace_cospan(1, term_to_cospan(circ::fork()));
        REQUIRE(check_partial_left_monogamous(c).ok);
        TermPtr back = extract_term(c, ExtractMode::TracedComonoid);
        CHECK(cospan_iso(term_to_cospan(back), c).has_value());
    }
}

namespace {

/// Small structural check for the graphviz output: one digraph block,
/// braces balanced, every inner line is a node or edge statement.
bool dot_well_formed(const std::string& s) {
    std::istringstream is(s);
    std::string line;
    int depth = 0;
    bool saw_digraph = false;
    while (std::getline(is, line)) {
        if (line.empty() || line.rfind("//", 0) == 0) continue;
        if (line.find("digraph") != std::string::npos) {
            saw_digraph = true;
            if (line.find('{') == std::string::npos) return false;
            ++depth;
            continue;
        }
        if (line == "}") {
            --depth;
            continue;
        }
        if (depth != 1) return false;
        if (line.back() != ';') return false;
    }
    return saw_digraph && depth == 0;
}

}  // namespace

TEST_CASE("dot export") {
    auto lattice = belnap()->lattice_ptr();
    auto c = term_to_cospan(sr_latch());
    std::string dot = to_dot(c, lattice.get());
    CHECK(dot_well_formed(dot));
    CHECK(dot.find("delay") != std::string::npos);
    CHECK(dot.find("or") != std::string::npos);

    auto c2 = term_to_cospan(value_word({kT, kBot}));
    std::string dot2 = to_dot(c2, lattice.get());
    CHECK(dot_well_formed(dot2));
    CHECK(dot2.find("value t") != std::string::npos);
}
