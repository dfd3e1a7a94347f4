// Acceptance suite: one criterion per run_criterion call, each printing a
// single pass/fail line. The process exits with the number of failures.

#include <chrono>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <vector>

#include "circ/dpo.hpp"
#include "circ/formats.hpp"
#include "circ/lang.hpp"
#include "circ/opsem.hpp"
#include "circ/parteval.hpp"
#include "circ/synth.hpp"
#include "corpus.hpp"

using namespace circ;
using namespace circ::tests;

namespace {

int g_failures = 0;

void run_criterion(int number, const std::string& title, const std::function<void()>& body) {
    auto start = std::chrono::steady_clock::now();
    std::string failure;
    try {
        body();
    } catch (const std::exception& e) {
        failure = e.what();
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
    if (failure.empty()) {
        std::cout << "PASS  " << number << "  " << title << "  (" << ms.count() << " ms)\n";
    } else {
        ++g_failures;
        std::cout << "FAIL  " << number << "  " << title << "  (" << ms.count() << " ms): " << failure << "\n";
    }
}

struct check_failed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& what) {
    if (!cond) throw check_failed(what);
}

Value gate2(const Interpretation& i, const char* name, Value a, Value b) {
    return i.apply(*i.signature().find(name), {a, b})[0];
}
Value gate1(const Interpretation& i, const char* name, Value a) {
    return i.apply(*i.signature().find(name), {a})[0];
}

// --- criterion 1 --------------------------------------------------------------

void criterion_gate_tables() {
    auto i = belnap();
    const Lattice& l = i->lattice();
    const Value B = kBot, F = kF, T = kT, P = kTop;

    const Value and_table[4][4] = {{B, F, B, F}, {F, F, F, F}, {B, F, T, P}, {F, F, P, P}};
    const Value or_table[4][4] = {{B, B, T, T}, {B, F, T, P}, {T, T, T, T}, {T, P, T, P}};
    const Value not_table[4] = {B, T, F, P};
    const Value join_table[4][4] = {{B, F, T, P}, {F, F, P, P}, {T, P, T, P}, {P, P, P, P}};

    int checked = 0;
    for (int a = 0; a < 4; ++a) {
        require(gate1(*i, "not", Value{a}) == not_table[a], "negation table entry differs");
        ++checked;
        for (int b = 0; b < 4; ++b) {
            require(gate2(*i, "and", Value{a}, Value{b}) == and_table[a][b], "conjunction table entry differs");
            require(gate2(*i, "or", Value{a}, Value{b}) == or_table[a][b], "disjunction table entry differs");
            require(l.join(Value{a}, Value{b}) == join_table[a][b], "join table entry differs");
            checked += 3;
        }
    }
    require(checked == 52, "table entry count");
    require(check_interpretation(*i).empty(), "interpretation check must be clean");
}

// --- criterion 2 --------------------------------------------------------------

void criterion_latch_end_to_end() {
    auto i = belnap();
    const char* src =
        "circuit latch(r, s) -> (q, nq) {\n"
        "  feedback fb\n"
        "  q = delay(not(or(r, fb)))\n"
        "  nq = not(or(q, s))\n"
        "  fb = nq\n"
        "}\n";
    auto def = parse_circuit(src, *i);
    Waveform out = run_waveform(def.term, latch_schedule(), *i);
    std::string csv = write_waveform_csv(out, i->lattice(), def.output_names);
    require(csv.find("bot,f\nt,f\nt,f\nf,t\n") != std::string::npos, "evaluated stream differs");

    MealyForm mf = to_mealy_form(def.term, *i);
    auto [first_out, next] = productivity_step(mf, {kF, kT}, *i);
    require(first_out == Word{kBot, kF}, "first outputs differ");
    require(next.state == Word{kT}, "next state differs");
}

// --- criterion 3 --------------------------------------------------------------

void criterion_cross_semantics() {
    auto i = belnap();
    Rng rng(90001);
    RandomCircuitOpts opts;  // defaults: <=3 inputs, <=6 gates, <=3 delays
    int circuits = 0;
    while (circuits < 50) {
        TermPtr t = random_circuit(rng, opts);
        ++circuits;
        auto m = circuit_to_mealy(t, i);
        MealyForm mf = to_mealy_form(t, *i);
        for (int w = 0; w < 20; ++w) {
            Waveform wave = random_wave(rng, t->inputs, 8);
            Waveform a = run(m, wave);
            MealyForm cur = mf;
            for (size_t k = 0; k < wave.values.size(); ++k) {
                auto [o, nxt] = productivity_step(cur, wave.values[k], *i);
                require(o == a.values[k], "operational and denotational runs differ");
                cur = std::move(nxt);
            }
        }
    }
}

// --- criterion 4 --------------------------------------------------------------

void criterion_machine_algebra() {
    auto bool_lattice = std::make_shared<const Lattice>(std::vector<std::string>{"f", "t"},
                                                        std::vector<std::pair<int, int>>{{0, 1}});
    const Value bF{0}, bT{1};
    MealyTable toggle;
    toggle.lattice = bool_lattice;
    toggle.input_width = toggle.output_width = 1;
    toggle.state_names = {"s0", "s1"};
    toggle.rows = {{{0, {bF}}, {1, {bT}}}, {{1, {bT}}, {0, {bF}}}};
    MealyTable latchup = toggle;
    latchup.state_names = {"t0", "t1"};
    latchup.rows = {{{0, {bF}}, {1, {bT}}}, {{1, {bT}}, {1, {bT}}}};

    // Sequential composition from state (s1, t0) on input f.
    MealyTable from_s1 = toggle;
    from_s1.initial = 1;
    auto c = cascade(table_machine(from_s1), table_machine(latchup));
    auto [cn, co] = c.step(c.initial(), {bF});
    require(co == Word{bT} && c.state_name(cn) == "(s1;t1)", "cascade entry differs");

    // Parallel composition entry from (s0, t0) on input (t, f).
    auto d = direct(table_machine(toggle), table_machine(latchup));
    auto [dn, dout] = d.step(d.initial(), {bT, bF});
    require(dout == Word{bT, bF} && d.state_name(dn) == "(s1;t0)", "direct entry differs");

    // Traced step of the latch pre-machine.
    auto i = belnap();
    auto nor = [&](Value a, Value b) { return gate1(*i, "not", gate2(*i, "or", a, b)); };
    MealyTable pre;
    pre.lattice = i->lattice_ptr();
    pre.input_width = pre.output_width = 3;
    pre.state_names = {"bot", "f", "t", "top"};
    pre.rows.resize(4);
    for (int s = 0; s < 4; ++s)
        for (size_t k = 0; k < word_count(3, 4); ++k) {
            Word in = word_at(k, 3, 4);
            Value nxt = nor(in[1], in[0]);
            Value o = nor(Value{s}, in[2]);
            pre.rows[static_cast<size_t>(s)].emplace_back(static_cast<uint32_t>(nxt.index),
                                                          Word{o, Value{s}, o});
        }
    auto traced = mealy_trace(table_machine(pre), 1);
    auto [tn, tout] = traced.step(traced.initial(), {kF, kT});
    require(tout == Word{kBot, kF}, "traced outputs differ");
    require(traced.state_name(tn) == "t", "traced successor differs");
}

// --- criterion 5 --------------------------------------------------------------

void criterion_synthesis_round_trip() {
    auto i = belnap();
    Rng rng(90005);
    RandomCircuitOpts opts;
    opts.max_inputs = 2;
    opts.max_gates = 4;
    opts.max_delays = 1;
    int done = 0;
    int attempts = 0;
    while (done < 20 && attempts < 2000) {
        ++attempts;
        TermPtr t = random_circuit(rng, opts);
        if (t->inputs < 1 || t->inputs > 2) continue;
        auto machine = circuit_to_mealy(t, i);
        ReachableResult r = reachable(machine, 4096);
        if (r.table.rows.size() < 2 || r.table.rows.size() > 4) continue;
        auto tm = table_machine(r.table);
        TermPtr back = mealy_to_circuit(tm);
        require(bisimilar(tm, circuit_to_mealy(back, i)), "round trip machine differs");
        ++done;
    }
    require(done >= 20, "not enough machines generated");
}

// --- criterion 6 --------------------------------------------------------------

void criterion_functional_completeness() {
    auto i = belnap();
    auto l = i->lattice_ptr();
    Rng rng(90006);
    for (int rep = 0; rep < 100; ++rep) {
        int m = 1 + rng.below(3);
        TruthTable t = random_monotone_table(rng, m);
        TermPtr term = belnap_express(t);
        auto machine = circuit_to_mealy(term, i);
        for (size_t k = 0; k < t.rows.size(); ++k) {
            auto [s, out] = machine.step(machine.initial(), word_at(k, m, 4));
            require(out == t.rows[k], "synthesized expression differs from the table");
        }
    }

    // The four-state encoding under the standard total order.
    MealyTable states;
    states.lattice = l;
    states.input_width = states.output_width = 0;
    states.state_names = {"bot", "f", "t", "top"};
    states.rows.assign(4, {{0u, {}}});
    states.order.assign(16, 0);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            states.order[static_cast<size_t>(a * 4 + b)] = l->leq(Value{a}, Value{b});
    Encoding e = encoding(states, {0, 1, 2, 3});
    require(e.code[0] == Word{kTop, kBot, kBot, kBot}, "encoding of the least state differs");
    require(e.code[1] == Word{kTop, kTop, kBot, kBot}, "encoding of the false state differs");
    require(e.code[2] == Word{kTop, kBot, kTop, kBot}, "encoding of the true state differs");
    require(e.code[3] == Word{kTop, kTop, kTop, kTop}, "encoding of the greatest state differs");

    // The chain completion example: 2 -> 6 and 4 -> 7 over 0..4.
    auto leq = [](int a, int b) { return a <= b; };
    std::vector<bool> defined = {false, false, true, false, true};
    std::vector<int> partial = {0, 0, 6, 0, 7};
    auto completed = monotone_completion<int>(
        5, leq, defined, partial, [](const int& a, const int& b) { return std::max(a, b); }, 0,
        [](const int& a, const int& b) { return a <= b; });
    require(completed == std::vector<int>({0, 0, 6, 6, 7}), "chain completion differs");
}

// --- criterion 7 --------------------------------------------------------------

void criterion_instant_feedback() {
    auto i = belnap();
    TermPtr g_gate = compose(circ::fork(), belnap_gate("or"));
    TermPtr t = substitute(substitute(cyclic_sharing_template(), "bb_f", belnap_gate("not")), "bb_g", g_gate);
    MealyForm mf = to_mealy_form(t, *i);

    std::function<bool(const TermPtr&)> has_trace = [&](const TermPtr& term) {
        if (term->kind == TermKind::Trace) return true;
        for (const auto& c : term->children)
            if (has_trace(c)) return true;
        return false;
    };
    require(!has_trace(mf.core), "unrolled core still contains a loop");

    auto lnot = [&](Value v) { return gate1(*i, "not", v); };
    auto lor = [&](Value a, Value b) { return gate2(*i, "or", a, b); };
    for (int v = 0; v < 4; ++v) {
        Value x{v};
        auto [out_f, n1] = productivity_step(mf, {x, kF}, *i);
        auto [out_t, n2] = productivity_step(mf, {x, kT}, *i);
        require(out_f == Word{lor(lnot(x), lnot(x))}, "control-low composite differs");
        require(out_t == Word{lnot(lor(x, x))}, "control-high composite differs");
    }

    TermPtr f_then_g = compose(belnap_gate("not"), g_gate);
    TermPtr with_low = compose(tensor(identity(1), waveform({kF})), t);
    require(bisimilar(circuit_to_mealy(with_low, i), circuit_to_mealy(f_then_g, i)),
            "control-low circuit is not bisimilar to the composite");
    TermPtr g_then_f = compose(g_gate, belnap_gate("not"));
    TermPtr with_high = compose(tensor(identity(1), waveform({kT})), t);
    require(bisimilar(circuit_to_mealy(with_high, i), circuit_to_mealy(g_then_f, i)),
            "control-high circuit is not bisimilar to the composite");
}

// --- criterion 8 --------------------------------------------------------------

void criterion_observational_equivalence() {
    auto i = belnap();
    Rng rng(90008);
    RandomCircuitOpts opts;
    opts.max_inputs = 1;
    opts.max_delays = 1;
    opts.max_gates = 3;
    int compared = 0;
    int attempts = 0;
    while (compared < 15 && attempts < 400) {
        ++attempts;
        TermPtr a = random_circuit(rng, opts);
        TermPtr b = random_circuit(rng, opts);
        if (a->inputs != b->inputs || a->outputs != b->outputs) continue;
        EquivResult ex;
        try {
            ex = obs_equiv(a, b, EquivMode::Exhaustive, i, 200000);
        } catch (const budget_error&) {
            continue;
        }
        EquivResult oracle = obs_equiv(a, b, EquivMode::Oracle, i);
        require(ex.equivalent == oracle.equivalent, "exhaustive and oracle verdicts disagree");
        ++compared;
    }
    require(compared >= 15, "not enough feasible pairs");
}

// --- criterion 9 --------------------------------------------------------------

TermPtr random_fragment_term(Rng& rng, bool with_comonoid) {
    int width = 1 + rng.below(3);
    TermPtr t = identity(width);
    int steps = 2 + rng.below(7);
    const Signature& sig = belnap()->signature();
    for (int k = 0; k < steps; ++k) {
        switch (rng.below(with_comonoid ? 6 : 4)) {
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
            case 3: {
                if (width >= 4) break;
                t = tensor(t, value_word({Value{rng.below(4)}}));
                ++width;
                break;
            }
            case 4: {
                if (width == 0 || width > 4) break;
                int pos = rng.below(width);
                t = compose(t, tensor(tensor(identity(pos), circ::fork()), identity(width - pos - 1)));
                ++width;
                break;
            }
            default: {
                if (width < 2) break;
                int pos = rng.below(width);
                t = compose(t, tensor(tensor(identity(pos), elim()), identity(width - pos - 1)));
                --width;
                break;
            }
        }
    }
    if (t->inputs >= 2 && width >= 2 && rng.chance(50)) t = trace(1, t);
    return t;
}

void criterion_hypergraph_correspondence() {
    Rng rng(90009);
    for (int k = 0; k < 60; ++k) {
        TermPtr t = random_fragment_term(rng, false);
        auto c = term_to_cospan(t);
        require(check_partial_monogamous(c).ok, "traced image fails the validator");
        TermPtr back = extract_term(c, ExtractMode::Traced);
        require(cospan_iso(term_to_cospan(back), c).has_value(), "traced extraction does not round trip");
    }
    for (int k = 0; k < 60; ++k) {
        TermPtr t = random_fragment_term(rng, true);
        auto c = term_to_cospan(t);
        require(check_partial_left_monogamous(c).ok, "comonoid image fails the validator");
        TermPtr back = extract_term(c, ExtractMode::TracedComonoid);
        require(cospan_iso(term_to_cospan(back), c).has_value(), "comonoid extraction does not round trip");
    }
}

// --- criterion 10 --------------------------------------------------------------

void criterion_dpo_counts() {
    auto e = [](const char* name) { return prim(name, 1, 1); };

    {
        DpoRule r = make_rule(identity(1), e("e1"));
        auto host = fold(term_to_cospan(compose(e("e2"), e("e3"))));
        auto ms = find_matchings(r, host);
        auto deg = degrees(host.graph);
        const Matching* mid = nullptr;
        for (const auto& m : ms) {
            int v = m.vertex_map[0];
            if (deg[static_cast<size_t>(v)].in_degree == 1 && deg[static_cast<size_t>(v)].out_degree == 1)
                mid = &m;
        }
        require(mid != nullptr, "no matching at the middle vertex");
        auto cs = pushout_complements(r, *mid, host);
        require(cs.size() == 5, "expected exactly 5 pushout complements, got " + std::to_string(cs.size()));
    }
    {
        DpoRule r = make_rule(compose(e("a"), e("b")), identity(1));
        Hypergraph g;
        g.n_vertices = 4;
        g.edges.push_back({EdgeLabel::gate("a", 1, 1), {0}, {1}});
        g.edges.push_back({EdgeLabel::gate("b", 1, 1), {1}, {2}});
        g.edges.push_back({EdgeLabel::gate("p", 1, 1), {1}, {3}});
        InterfacedHypergraph host{g, {}, {0, 2, 3}};
        auto ms = find_matchings(r, host);
        require(ms.size() == 1, "expected one matching");
        require(pushout_complements(r, ms[0], host).empty(), "dangling case must yield none");
    }
    {
        DpoRule r = make_rule(compose(e("a"), e("b")), identity(1));
        Hypergraph g;
        g.n_vertices = 2;
        g.edges.push_back({EdgeLabel::gate("a", 1, 1), {0}, {0}});
        g.edges.push_back({EdgeLabel::gate("b", 1, 1), {0}, {1}});
        InterfacedHypergraph host{g, {}, {0, 1}};
        for (const auto& m : find_matchings(r, host))
            require(pushout_complements(r, m, host).empty(), "identification case must yield none");
    }
    {
        DpoRule r = make_rule(identity(2), tensor(e("e1"), e("e2")));
        auto host = fold(term_to_cospan(identity(1)));
        auto ms = find_matchings(r, host);
        require(ms.size() == 1, "expected one matching");
        auto kept = filter_boundary(r, pushout_complements(r, ms[0], host), 1, 1, RewriteMode::Traced);
        require(kept.size() == 2, "expected exactly 2 surviving contexts, got " + std::to_string(kept.size()));
        bool seq12 = false, seq21 = false;
        for (const auto& c : kept) {
            auto res = rewrite(r, c, 1, 1);
            if (cospan_iso(res, term_to_cospan(compose(e("e1"), e("e2")))).has_value()) seq12 = true;
            if (cospan_iso(res, term_to_cospan(compose(e("e2"), e("e1")))).has_value()) seq21 = true;
        }
        require(seq12 && seq21, "the two composition orders must both arise");
    }
    {
        DpoRule r = make_rule(e("e1"), e("e2"));
        auto host = term_to_cospan(compose(compose(e("e3"), e("e1")), e("e3")));
        auto results = rewrite_all(r, host, RewriteMode::Traced);
        require(results.size() == 1, "expected one surviving rewrite");
        auto expect = term_to_cospan(compose(compose(e("e3"), e("e2")), e("e3")));
        require(cospan_iso(results[0].result, expect).has_value(), "rewrite result differs");
    }
}

// --- criterion 11 --------------------------------------------------------------

struct CospanClass {
    std::vector<InterfacedHypergraph> reps;
    int find(const InterfacedHypergraph& c) {
        for (size_t k = 0; k < reps.size(); ++k)
            if (cospan_iso(reps[k], c).has_value()) return static_cast<int>(k);
        reps.push_back(c);
        return static_cast<int>(reps.size()) - 1;
    }
};

InterfacedHypergraph plug_cospan(const InterfacedHypergraph& folded_side, const InterfacedHypergraph& ctx,
                                 int i, int j, int m, int n) {
    (void)n;
    InterfacedHypergraph y;
    y.graph = ctx.graph;
    y.inputs.assign(ctx.outputs.begin(), ctx.outputs.begin() + i);
    y.inputs.insert(y.inputs.end(), ctx.inputs.begin(), ctx.inputs.begin() + j);
    y.outputs.assign(ctx.inputs.begin() + j, ctx.inputs.end());
    y.outputs.insert(y.outputs.end(), ctx.outputs.begin() + i, ctx.outputs.end());
    InterfacedHypergraph z = compose_cospans(folded_side, y);
    InterfacedHypergraph out;
    out.graph = z.graph;
    out.inputs.assign(z.outputs.begin(), z.outputs.begin() + m);
    out.outputs.assign(z.outputs.begin() + m, z.outputs.end());
    return out;
}

void criterion_traced_rewriting_correspondence() {
    // The local value rules as graph rewrites versus the term-level value
    // stepper: on every generated host of at most four edges, the two
    // reachability relations coincide up to isomorphism. Hosts come from an
    // enumerated family of contexts plugged around each rule's left side.
    auto interp = belnap();
    std::vector<NamedRule> rules;
    for (const auto& r : value_rule_bank(*interp))
        if (r.name == "value-and-t,f" || r.name == "value-not-t" || r.name == "value-or-bot,bot" ||
            r.name == "value-not-top")
            rules.push_back(r);
    require(rules.size() == 4, "expected the four sampled rules");

    // Context cospans, closed under composition, tensor and unary trace,
    // capped at two edges and deduplicated up to isomorphism.
    std::vector<InterfacedHypergraph> contexts;
    CospanClass seen;
    auto add = [&](const InterfacedHypergraph& c) {
        if (static_cast<int>(c.graph.edges.size()) > 2) return;
        if (c.n_inputs() > 3 || c.n_outputs() > 3 || c.graph.n_vertices > 8) return;
        if (!check_partial_monogamous(c).ok) return;
        size_t before = seen.reps.size();
        seen.find(c);
        if (seen.reps.size() == before) return;
        contexts.push_back(c);
    };
    std::vector<TermPtr> atoms = {identity(0), identity(1), identity(2), symmetry(1, 1),
                                  belnap_gate("not"), belnap_gate("and"), belnap_gate("or"),
                                  value_word({kT}), value_word({kF}), value_word({kBot})};
    for (const auto& a : atoms) add(term_to_cospan(a));
    for (int round = 0; round < 3 && contexts.size() < 600; ++round) {
        std::vector<InterfacedHypergraph> base = contexts;
        for (const auto& a : base) {
            for (const auto& b : base) {
                if (contexts.size() >= 600) break;
                if (a.n_outputs() == b.n_inputs()) add(compose_cospans(a, b));
                add(tensor_cospans(a, b));
            }
            if (a.n_inputs() >= 1 && a.n_outputs() >= 1) add(trace_cospan(1, a));
        }
    }

    int instances = 0;
    for (const auto& rule_terms : rules) {
        DpoRule rule = make_rule(rule_terms.left, rule_terms.right);
        const std::string gate = rule_terms.name.substr(6, rule_terms.name.find('-', 6) - 6);
        auto infos_match = [&](const ValueRedexInfo& info) {
            if (info.kind != gate) return false;
            // The consumed letters must be the rule's word.
            auto redex_word = rule_terms.left->children[0];
            return info.letters == redex_word->letters;
        };

        CospanClass hosts;
        for (const auto& ctx : contexts) {
            if (ctx.n_inputs() < rule.j || ctx.n_outputs() < rule.i) continue;
            int m = ctx.n_inputs() - rule.j, n = ctx.n_outputs() - rule.i;
            if (m > 2 || n > 2) continue;
            InterfacedHypergraph host = plug_cospan(rule.left, ctx, rule.i, rule.j, m, n);
            if (static_cast<int>(host.graph.edges.size()) > 4) continue;
            hosts.find(host);
        }
        require(!hosts.reps.empty(), "no hosts for rule " + rule_terms.name);

        int checked_hosts = 0;
        for (size_t h = 0; h < hosts.reps.size() && checked_hosts < 40; ++h, ++checked_hosts) {
            const auto& host = hosts.reps[h];
            TermPtr host_term = extract_term(host, ExtractMode::Traced);

            // Term-level one-step reachability at redexes of this rule.
            CospanClass expected;
            auto infos = value_redex_info(host_term, *interp);
            for (size_t r = 0; r < infos.size(); ++r)
                if (infos_match(infos[r]))
                    expected.find(term_to_cospan(value_rule_apply(host_term, *interp, static_cast<int>(r))));

            // Graph-level reachability through surviving complements.
            CospanClass actual;
            for (const auto& res : rewrite_all(rule, host, RewriteMode::Traced, 20000)) {
                (void)extract_term(res.result, ExtractMode::Traced);  // stays in the fragment
                actual.find(res.result);
            }

            for (const auto& want : expected.reps) {
                bool found = false;
                for (const auto& got : actual.reps)
                    if (cospan_iso(want, got).has_value()) found = true;
                require(found, "a term rewrite is missing from the graph rewrites (" + rule_terms.name + ")");
            }
            for (const auto& got : actual.reps) {
                bool found = false;
                for (const auto& want : expected.reps)
                    if (cospan_iso(want, got).has_value()) found = true;
                require(found, "a graph rewrite has no term-level counterpart (" + rule_terms.name + ")");
            }
            ++instances;
        }
    }
    require(instances >= 80, "not enough host instances checked");
}

// --- criterion 12 --------------------------------------------------------------

void criterion_partial_evaluation() {
    auto i = belnap();
    TermPtr t;
    {
        TermPtr b = tensor(identity(1),
                           tensor(compose(circ::fork(), tensor(belnap_gate("not"), identity(1))), identity(1)));
        b = compose(b, tensor(identity(1), tensor(belnap_gate("or"), identity(1))));
        b = compose(b, tensor(belnap_gate("or"), identity(1)));
        b = compose(b, belnap_gate("and"));
        b = compose(b, compose(circ::fork(), tensor(delay(1), identity(1))));
        t = trace(1, b);
    }
    auto res = partial_evaluate(t, {{0, Binding{std::vector<Value>{kT, kF}}}}, *i);
    require(res.complete, "evaluation hit the step budget");
    require(cospan_iso(term_to_cospan(res.term), term_to_cospan(identity(1))).has_value(),
            "result is not the identity wire");

    Rng rng(90012);
    RandomCircuitOpts opts;
    int done = 0;
    while (done < 20) {
        TermPtr c = random_circuit(rng, opts);
        if (c->inputs < 1) continue;
        ++done;
        std::map<int, Binding> binds;
        int wire = rng.below(c->inputs);
        std::vector<Value> alts = {Value{rng.below(4)}, Value{rng.below(4)}};
        binds[wire] = Binding{alts};
        auto r = partial_evaluate(c, binds, *i);
        TermPtr gen = alts[0] == alts[1] ? waveform({alts[0]}) : uncertain({{alts[0]}, {alts[1]}});
        TermPtr pre = identity(0);
        for (int w = 0; w < c->inputs; ++w) pre = tensor(pre, w == wire ? gen : identity(1));
        TermPtr bound = compose(pre, c);
        int worlds = std::max(term_worlds(bound), term_worlds(r.term));
        for (int w = 0; w < worlds; ++w)
            require(bisimilar(circuit_to_mealy(fix_world(bound, w), i),
                              circuit_to_mealy(fix_world(r.term, w), i)),
                    "a rewrite changed the behaviour in some world");
    }
}

}  // namespace

int main() {
    run_criterion(1, "four-valued gate and join tables, interpretation check", criterion_gate_tables);
    run_criterion(2, "latch end to end: evaluated stream and first step", criterion_latch_end_to_end);
    run_criterion(3, "operational and denotational runs agree on 50 random circuits", criterion_cross_semantics);
    run_criterion(4, "machine algebra: cascade, direct and traced steps", criterion_machine_algebra);
    run_criterion(5, "synthesis round trip on 20 random monotone machines", criterion_synthesis_round_trip);
    run_criterion(6, "functional completeness on 100 random monotone tables", criterion_functional_completeness);
    run_criterion(7, "loop unrolling selects the composite by control", criterion_instant_feedback);
    run_criterion(8, "exhaustive and oracle equivalence verdicts agree", criterion_observational_equivalence);
    run_criterion(9, "hypergraph validators and extraction round trips", criterion_hypergraph_correspondence);
    run_criterion(10, "pushout complement counts and rewrite results", criterion_dpo_counts);
    run_criterion(11, "graph and term rewriting reach the same results", criterion_traced_rewriting_correspondence);
    run_criterion(12, "partial evaluation: protocol collapse and per-world soundness", criterion_partial_evaluation);
    if (g_failures == 0)
        std::cout << "all criteria passed\n";
    else
        std::cout << g_failures << " criteria failed\n";
    return g_failures;
}
