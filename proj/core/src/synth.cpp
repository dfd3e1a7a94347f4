#include "circ/synth.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace circ {

namespace {

/// Strict covers of each lattice value; stepping along covers suffices for
/// monotonicity checks over product orders.
std::vector<std::vector<Value>> lattice_covers(const Lattice& l) {
    std::vector<std::vector<Value>> covers(static_cast<size_t>(l.size()));
    for (int a = 0; a < l.size(); ++a)
        for (int b = 0; b < l.size(); ++b) {
            if (a == b || !l.leq(Value{a}, Value{b})) continue;
            bool direct = true;
            for (int c = 0; c < l.size(); ++c)
                if (c != a && c != b && l.leq(Value{a}, Value{c}) && l.leq(Value{c}, Value{b})) {
                    direct = false;
                    break;
                }
            if (direct) covers[static_cast<size_t>(a)].push_back(Value{b});
        }
    return covers;
}

/// Visit every (index, cover index) pair of the pointwise order on words.
template <typename F>
bool for_each_cover_pair(const Lattice& l, int width, F&& check) {
    const int base = l.size();
    auto covers = lattice_covers(l);
    const size_t n = word_count(width, base);
    Word w(static_cast<size_t>(width), Value{0});
    for (size_t idx = 0; idx < n; ++idx) {
        w = word_at(idx, width, base);
        long long place = 1;
        for (int pos = width - 1; pos >= 0; --pos) {
            for (Value up : covers[w[static_cast<size_t>(pos)].index]) {
                long long delta = place * (static_cast<long long>(up.index) - w[static_cast<size_t>(pos)].index);
                size_t jdx = static_cast<size_t>(static_cast<long long>(idx) + delta);
                if (!check(idx, jdx)) return false;
            }
            place *= base;
        }
    }
    return true;
}

}  // namespace

bool TruthTable::is_monotone() const {
    return for_each_cover_pair(*lattice, inputs, [&](size_t a, size_t b) {
        return lattice->leq_word(rows[a], rows[b]);
    });
}

TruthTable tabulate(const LatticePtr& l, int inputs, int outputs,
                    const std::function<Word(const Word&)>& f) {
    TruthTable t;
    t.lattice = l;
    t.inputs = inputs;
    t.outputs = outputs;
    const size_t n = word_count(inputs, l->size());
    t.rows.reserve(n);
    for (size_t k = 0; k < n; ++k) {
        Word out = f(word_at(k, inputs, l->size()));
        if (out.size() != static_cast<size_t>(outputs)) throw std::invalid_argument("tabulate: output width mismatch");
        t.rows.push_back(std::move(out));
    }
    return t;
}

namespace {

Value lattice_top(const Lattice& l) {
    for (int c = 0; c < l.size(); ++c) {
        bool greatest = true;
        for (int d = 0; d < l.size(); ++d)
            if (!l.leq(Value{d}, Value{c})) { greatest = false; break; }
        if (greatest) return Value{c};
    }
    throw std::invalid_argument("encoding: lattice has no greatest element");
}

}  // namespace

Encoding encoding(const MealyTable& states, const std::vector<uint32_t>& total_order) {
    const size_t n = states.rows.size();
    if (total_order.size() != n) throw std::invalid_argument("encoding: order must list every state once");
    if (states.order.empty()) throw std::invalid_argument("encoding: machine carries no state order");
    const Lattice& l = *states.lattice;
    const Value top = lattice_top(l);
    const Value bot = l.bottom();

    Encoding e;
    e.order = total_order;
    e.code.assign(n, Word(n, bot));
    for (size_t s = 0; s < n; ++s)
        for (size_t i = 0; i < n; ++i)
            if (states.order[static_cast<size_t>(total_order[i]) * n + s]) e.code[s][i] = top;
    return e;
}

std::vector<uint32_t> chosen_state_order(const MealyTable& reachable_table,
                                         const std::vector<int>& value_order) {
    const Lattice& l = *reachable_table.lattice;
    const int base = l.size();
    std::vector<int> vo = value_order;
    if (vo.empty()) {
        vo.resize(static_cast<size_t>(base));
        for (int i = 0; i < base; ++i) vo[static_cast<size_t>(i)] = i;
    }
    if (static_cast<int>(vo.size()) != base)
        throw std::invalid_argument("chosen_state_order: value order must list every value");

    const int m = reachable_table.input_width;
    const size_t n_inputs = word_count(m, base);
    // Breadth-first search discovers states in order of their shortest
    // access word, ties broken lexicographically when input words are
    // explored in the given value order.
    std::vector<uint32_t> order;
    std::vector<char> seen(reachable_table.rows.size(), 0);
    std::vector<uint32_t> queue;
    auto visit = [&](uint32_t s) {
        if (seen[s]) return;
        seen[s] = 1;
        order.push_back(s);
        queue.push_back(s);
    };
    visit(reachable_table.initial);
    for (size_t head = 0; head < queue.size(); ++head) {
        uint32_t s = queue[head];
        for (size_t k = 0; k < n_inputs; ++k) {
            Word digits = word_at(k, m, base);
            Word in(digits.size());
            for (size_t i = 0; i < digits.size(); ++i) in[i] = Value{vo[digits[i].index]};
            visit(reachable_table.rows[s][word_index(in, base)].first);
        }
    }
    if (order.size() != reachable_table.rows.size())
        throw std::invalid_argument("chosen_state_order: table contains unreachable states");
    return order;
}

template <typename C>
std::vector<C> monotone_completion(int size,
                                   const std::function<bool(int, int)>& leq_b,
                                   const std::vector<bool>& defined,
                                   const std::vector<C>& partial,
                                   const std::function<C(const C&, const C&)>& join_c,
                                   const C& bottom_c,
                                   const std::function<bool(const C&, const C&)>& leq_c) {
    // Linear extension of the order by Kahn's algorithm.
    std::vector<int> topo;
    {
        std::vector<int> indeg(static_cast<size_t>(size), 0);
        for (int a = 0; a < size; ++a)
            for (int b = 0; b < size; ++b)
                if (a != b && leq_b(a, b)) ++indeg[static_cast<size_t>(b)];
        std::vector<int> ready;
        for (int i = 0; i < size; ++i)
            if (indeg[static_cast<size_t>(i)] == 0) ready.push_back(i);
        std::vector<char> emitted(static_cast<size_t>(size), 0);
        for (size_t head = 0; head < ready.size(); ++head) {
            int v = ready[head];
            topo.push_back(v);
            emitted[static_cast<size_t>(v)] = 1;
            for (int b = 0; b < size; ++b)
                if (b != v && leq_b(v, b) && !emitted[static_cast<size_t>(b)] && --indeg[static_cast<size_t>(b)] == 0)
                    ready.push_back(b);
        }
        if (topo.size() != static_cast<size_t>(size))
            throw std::invalid_argument("monotone_completion: relation is not a partial order");
    }

    std::vector<C> out(static_cast<size_t>(size), bottom_c);
    for (int v : topo) {
        if (defined[static_cast<size_t>(v)]) {
            out[static_cast<size_t>(v)] = partial[static_cast<size_t>(v)];
            continue;
        }
        // Bottom falls through to bottom_c; everything else joins the
        // completed values strictly below it.
        C acc = bottom_c;
        for (int w = 0; w < size; ++w)
            if (w != v && leq_b(w, v)) acc = join_c(acc, out[static_cast<size_t>(w)]);
        out[static_cast<size_t>(v)] = acc;
    }
    for (int a = 0; a < size; ++a)
        for (int b = 0; b < size; ++b)
            if (a != b && leq_b(a, b) && !leq_c(out[static_cast<size_t>(a)], out[static_cast<size_t>(b)]))
                throw std::invalid_argument("monotone_completion: partial data admits no monotone extension");
    return out;
}

template std::vector<int> monotone_completion<int>(int, const std::function<bool(int, int)>&,
                                                   const std::vector<bool>&, const std::vector<int>&,
                                                   const std::function<int(const int&, const int&)>&, const int&,
                                                   const std::function<bool(const int&, const int&)>&);
template std::vector<Word> monotone_completion<Word>(int, const std::function<bool(int, int)>&,
                                                     const std::vector<bool>&, const std::vector<Word>&,
                                                     const std::function<Word(const Word&, const Word&)>&, const Word&,
                                                     const std::function<bool(const Word&, const Word&)>&);

TruthTable mealy_encoding(const MealyTable& m, const Encoding& enc) {
    const Lattice& l = *m.lattice;
    const int base = l.size();
    const int k = enc.width();
    if (static_cast<size_t>(k) != m.rows.size())
        throw std::invalid_argument("mealy_encoding: encoding does not cover the states");
    const int in_w = k + m.input_width;
    const int out_w = k + m.output_width;
    const size_t domain = word_count(in_w, base);
    if (domain > (1u << 22)) throw budget_error("mealy_encoding: completion domain too large");

    std::vector<bool> defined(domain, false);
    std::vector<Word> partial(domain);
    for (size_t s = 0; s < m.rows.size(); ++s) {
        for (size_t u = 0; u < m.rows[s].size(); ++u) {
            Word key = enc.code[s];
            Word in = word_at(u, m.input_width, base);
            key.insert(key.end(), in.begin(), in.end());
            const auto& [next, outw] = m.rows[s][u];
            Word val = enc.code[next];
            val.insert(val.end(), outw.begin(), outw.end());
            size_t idx = word_index(key, base);
            if (defined[idx] && partial[idx] != val)
                throw std::invalid_argument("mealy_encoding: state codes collide");
            defined[idx] = true;
            partial[idx] = std::move(val);
        }
    }

    // Specialized completion over the word lattice: walking downward covers
    // reaches exactly the join over everything strictly below.
    std::vector<int> depth(static_cast<size_t>(base), 0);
    {
        // Longest chain below each value.
        bool changed = true;
        while (changed) {
            changed = false;
            for (int v = 0; v < base; ++v)
                for (int u = 0; u < base; ++u)
                    if (u != v && l.leq(Value{u}, Value{v}) &&
                        depth[static_cast<size_t>(v)] < depth[static_cast<size_t>(u)] + 1) {
                        depth[static_cast<size_t>(v)] = depth[static_cast<size_t>(u)] + 1;
                        changed = true;
                    }
        }
    }
    std::vector<size_t> order(domain);
    for (size_t i = 0; i < domain; ++i) order[i] = i;
    std::vector<int> rank(domain, 0);
    for (size_t i = 0; i < domain; ++i) {
        Word w = word_at(i, in_w, base);
        for (Value v : w) rank[i] += depth[v.index];
    }
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return rank[a] < rank[b]; });

    std::vector<std::vector<Value>> lower(static_cast<size_t>(base));
    for (int a = 0; a < base; ++a)
        for (int b = 0; b < base; ++b) {
            if (a == b || !l.leq(Value{a}, Value{b})) continue;
            bool direct = true;
            for (int c = 0; c < base; ++c)
                if (c != a && c != b && l.leq(Value{a}, Value{c}) && l.leq(Value{c}, Value{b})) {
                    direct = false;
                    break;
                }
            if (direct) lower[static_cast<size_t>(b)].push_back(Value{a});
        }

    std::vector<Word> rows(domain);
    for (size_t idx : order) {
        if (defined[idx]) {
            rows[idx] = partial[idx];
            continue;
        }
        Word acc = l.bottom_word(out_w);
        Word w = word_at(idx, in_w, base);
        long long place = 1;
        for (int pos = in_w - 1; pos >= 0; --pos) {
            for (Value dn : lower[w[static_cast<size_t>(pos)].index]) {
                long long delta = place * (static_cast<long long>(dn.index) - w[static_cast<size_t>(pos)].index);
                acc = l.join_word(acc, rows[static_cast<size_t>(static_cast<long long>(idx) + delta)]);
            }
            place *= base;
        }
        rows[idx] = std::move(acc);
    }

    TruthTable t;
    t.lattice = m.lattice;
    t.inputs = in_w;
    t.outputs = out_w;
    t.rows = std::move(rows);
    if (!t.is_monotone())
        throw std::invalid_argument("mealy_encoding: machine data admits no monotone completion");
    return t;
}

const Value kTranslatorTable[4][4] = {
    // value index order: bot, f, t, top
    {kBot, kF, kBot, kF},  // falsy signal, reported in {bot, f}
    {kBot, kBot, kF, kF},  // truthy signal, reported in {bot, f}
    {kBot, kT, kBot, kT},  // falsy signal, reported in {bot, t}
    {kBot, kBot, kT, kT},  // truthy signal, reported in {bot, t}
};

const std::vector<TermPtr>& translator_terms() {
    static const std::vector<TermPtr> terms = [] {
        auto interp = belnap();
        const auto& sig = interp->signature();
        // Bounded search over single-use gate chains applied to the input:
        // negation, meet with bottom, join with bottom.
        enum Op { Not, AndBot, OrBot };
        auto apply_chain = [&](const std::vector<Op>& ops, Value v) {
            Word w{v};
            for (Op op : ops) {
                switch (op) {
                    case Not: w = interp->apply(*sig.find("not"), w); break;
                    case AndBot: w = interp->apply(*sig.find("and"), {w[0], kBot}); break;
                    case OrBot: w = interp->apply(*sig.find("or"), {w[0], kBot}); break;
                }
            }
            return w[0];
        };
        auto build_chain = [&](const std::vector<Op>& ops) {
            TermPtr t = identity(1);
            for (Op op : ops) {
                switch (op) {
                    case Not: t = compose(t, prim(sig, "not")); break;
                    case AndBot: t = compose(t, compose(tensor(identity(1), intro()), prim(sig, "and"))); break;
                    case OrBot: t = compose(t, compose(tensor(identity(1), intro()), prim(sig, "or"))); break;
                }
            }
            return t;
        };

        std::vector<TermPtr> found(4);
        std::vector<std::vector<Op>> frontier = {{}};
        for (int len = 0; len <= 3; ++len) {
            for (const auto& chain : frontier) {
                for (int target = 0; target < 4; ++target) {
                    if (found[static_cast<size_t>(target)]) continue;
                    bool ok = true;
                    for (int v = 0; v < 4; ++v)
                        if (apply_chain(chain, Value{v}) != kTranslatorTable[target][v]) { ok = false; break; }
                    if (ok) found[static_cast<size_t>(target)] = build_chain(chain);
                }
            }
            std::vector<std::vector<Op>> next;
            for (const auto& chain : frontier)
                for (Op op : {Not, AndBot, OrBot}) {
                    auto c2 = chain;
                    c2.push_back(op);
                    next.push_back(std::move(c2));
                }
            frontier = std::move(next);
        }
        for (const auto& t : found)
            if (!t) throw std::logic_error("translator search failed to realize a table");
        return found;
    }();
    return terms;
}

namespace {

void require_belnap(const Lattice& l) {
    if (l.size() != 4 || l.bottom() != kBot || !l.leq(kF, kTop) || !l.leq(kT, kTop) || l.leq(kF, kT) || l.leq(kT, kF))
        throw std::invalid_argument("synthesis is defined for the four-valued interpretation only");
}

/// Monotone Boolean normal form over the defined rows, realized with the
/// gates that simulate Boolean operations on the chosen signal subset. The
/// truthy side simulates directly; the falsy side swaps the two gates.
TermPtr dnf_side(const std::vector<std::pair<std::vector<char>, bool>>& defined_rows, int width, bool truthy) {
    const auto& sig = belnap()->signature();
    const char* conj_gate = truthy ? "and" : "or";
    const char* disj_gate = truthy ? "or" : "and";
    const Value unit = truthy ? kT : kF;

    std::vector<std::vector<int>> clauses;
    for (const auto& [bits, out] : defined_rows) {
        if (!out) continue;
        std::vector<int> c;
        for (int j = 0; j < width; ++j)
            if (bits[static_cast<size_t>(j)]) c.push_back(j);
        if (std::find(clauses.begin(), clauses.end(), c) == clauses.end()) clauses.push_back(c);
    }
    // Absorption: a clause over a subset of another's variables makes the
    // larger clause redundant on every monotone row.
    {
        std::vector<std::vector<int>> kept;
        for (const auto& c : clauses) {
            bool redundant = false;
            for (const auto& other : clauses) {
                if (&other == &c || other.size() >= c.size()) continue;
                if (std::includes(c.begin(), c.end(), other.begin(), other.end())) {
                    redundant = true;
                    break;
                }
            }
            if (!redundant) kept.push_back(c);
        }
        clauses = std::move(kept);
    }

    if (clauses.empty()) return tensor(elim_n(width), intro());

    TermPtr t = block_fork(width, static_cast<int>(clauses.size()));
    TermPtr per_clause = identity(0);
    for (const auto& c : clauses) {
        TermPtr sel = identity(0);
        for (int j = 0; j < width; ++j) {
            bool keep = std::find(c.begin(), c.end(), j) != c.end();
            sel = tensor(sel, keep ? identity(1) : elim());
        }
        TermPtr conj = sel;
        if (c.empty()) {
            conj = compose(sel, constant_term({unit}));
        } else {
            for (size_t j = 1; j < c.size(); ++j)
                conj = compose(conj, tensor(prim(sig, conj_gate), identity(static_cast<int>(c.size() - j - 1))));
        }
        per_clause = tensor(per_clause, conj);
    }
    t = compose(t, per_clause);
    for (size_t j = 1; j < clauses.size(); ++j)
        t = compose(t, tensor(prim(sig, disj_gate), identity(static_cast<int>(clauses.size() - j - 1))));
    return t;
}

}  // namespace

TermPtr belnap_express(const TruthTable& f) {
    require_belnap(*f.lattice);
    if (f.outputs != 1) throw std::invalid_argument("belnap_express: single-output tables only");
    if (!f.is_monotone()) throw std::invalid_argument("belnap_express: table is not monotone");

    const int m = f.inputs;
    const size_t rows = f.rows.size();

    // Boolean views of the table: bit j is "input j carries a falsy
    // signal", bit m+j is "input j carries a truthy signal". The falsy and
    // truthy sides of the output are synthesized separately and joined.
    std::vector<std::pair<std::vector<char>, bool>> falsy_rows, truthy_rows;
    auto falsy = [](Value v) { return v == kF || v == kTop; };
    auto truthy = [](Value v) { return v == kT || v == kTop; };
    for (size_t r = 0; r < rows; ++r) {
        Word in = word_at(r, m, 4);
        std::vector<char> bits(static_cast<size_t>(2 * m), 0);
        for (int j = 0; j < m; ++j) {
            bits[static_cast<size_t>(j)] = falsy(in[static_cast<size_t>(j)]) ? 1 : 0;
            bits[static_cast<size_t>(m + j)] = truthy(in[static_cast<size_t>(j)]) ? 1 : 0;
        }
        Value out = f.rows[r][0];
        falsy_rows.emplace_back(bits, falsy(out));
        truthy_rows.emplace_back(std::move(bits), truthy(out));
    }

    TermPtr falsy_dnf = dnf_side(falsy_rows, 2 * m, false);
    TermPtr truthy_dnf = dnf_side(truthy_rows, 2 * m, true);

    const auto& psi = translator_terms();
    TermPtr t = block_fork(m, 4);
    TermPtr translate = identity(0);
    for (int block = 0; block < 4; ++block)
        for (int j = 0; j < m; ++j) translate = tensor(translate, psi[static_cast<size_t>(block)]);
    t = compose(t, translate);
    t = compose(t, tensor(falsy_dnf, truthy_dnf));
    return compose(t, join_wires());
}

TermPtr normalised_circuit(const TruthTable& f) {
    require_belnap(*f.lattice);
    if (!f.is_monotone()) throw std::invalid_argument("normalised_circuit: table is not monotone");
    if (f.outputs == 0) return elim_n(f.inputs);

    TermPtr body = identity(0);
    for (int o = 0; o < f.outputs; ++o) {
        TruthTable single;
        single.lattice = f.lattice;
        single.inputs = f.inputs;
        single.outputs = 1;
        single.rows.reserve(f.rows.size());
        for (const Word& row : f.rows) single.rows.push_back({row[static_cast<size_t>(o)]});
        body = tensor(body, belnap_express(single));
    }
    return compose(block_fork(f.inputs, f.outputs), body);
}

TermPtr mealy_to_circuit(const MealyMachine& m, const std::vector<int>& value_order, size_t budget) {
    require_belnap(m.lattice());
    ReachableResult r = reachable(m, budget);
    auto order = chosen_state_order(r.table, value_order);
    Encoding enc = encoding(r.table, order);
    TruthTable tt = mealy_encoding(r.table, enc);
    TermPtr core = normalised_circuit(tt);
    const int k = enc.width();
    TermPtr body = compose(tensor(register_term(enc.code[r.table.initial]), identity(m.input_width())), core);
    return trace(k, body);
}

}  // namespace circ
