#include "circ/opsem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace circ {

namespace {

/// Permutation term moving whole blocks: block `order[j]` of the input
/// becomes the j-th output block.
TermPtr block_perm(const std::vector<int>& sizes, const std::vector<int>& order) {
    std::vector<int> offsets(sizes.size(), 0);
    for (size_t b = 1; b < sizes.size(); ++b)
        offsets[b] = offsets[b - 1] + sizes[b - 1];
    std::vector<int> p;
    for (int b : order)
        for (int k = 0; k < sizes[static_cast<size_t>(b)]; ++k)
            p.push_back(offsets[static_cast<size_t>(b)] + k);
    return perm_term(p);
}

}  // namespace

TermPtr GlobalTraceDelayForm::to_term() const {
    TermPtr pre = tensor(tensor(tensor(identity(bare_width), delay(delay_width)),
                                value_word(values)),
                         identity(m));
    return trace(trace_width(), compose(pre, core));
}

TermPtr PreMealyForm::to_term() const {
    TermPtr pre = tensor(tensor(identity(bare_width), register_term(state)), identity(m));
    return trace(trace_width(), compose(pre, core));
}

TermPtr MealyForm::to_term() const {
    TermPtr pre = tensor(register_term(state), identity(m));
    return trace(state_width(), compose(pre, core));
}

GlobalTraceDelayForm global_trace_delay_form(const TermPtr& t) {
    GlobalTraceDelayForm g;
    g.m = t->inputs;
    g.n = t->outputs;

    switch (t->kind) {
        case TermKind::Delay: {
            g.delay_width = t->m;
            g.core = symmetry(t->m, t->m);
            return g;
        }
        case TermKind::Value: {
            g.value_width = static_cast<int>(t->letters.size());
            g.values = t->letters;
            g.core = identity(g.value_width);
            return g;
        }
        case TermKind::Uncertain:
            throw std::invalid_argument("global_trace_delay_form: uncertain values are not plain circuits");
        case TermKind::Seq: {
            GlobalTraceDelayForm acc = global_trace_delay_form(t->children[0]);
            for (size_t idx = 1; idx < t->children.size(); ++idx) {
                GlobalTraceDelayForm b = global_trace_delay_form(t->children[idx]);
                GlobalTraceDelayForm out;
                out.bare_width = acc.bare_width + b.bare_width;
                out.delay_width = acc.delay_width + b.delay_width;
                out.value_width = acc.value_width + b.value_width;
                out.values = acc.values;
                out.values.insert(out.values.end(), b.values.begin(), b.values.end());
                out.m = acc.m;
                out.n = b.n;
                // blocks in: Xa Xb Ya Yb Za Zb M
                TermPtr core = block_perm({acc.bare_width, b.bare_width, acc.delay_width, b.delay_width,
                                           acc.value_width, b.value_width, acc.m},
                                          {0, 2, 4, 6, 1, 3, 5});
                core = compose(core, tensor(acc.core, identity(b.bare_width + b.delay_width + b.value_width)));
                // now: Xa Ya K Xb Yb Zb
                core = compose(core, block_perm({acc.bare_width, acc.delay_width, acc.n, b.bare_width,
                                                 b.delay_width, b.value_width},
                                                {3, 4, 5, 2, 0, 1}));
                // now: Xb Yb Zb K Xa Ya
                core = compose(core, tensor(b.core, identity(acc.bare_width + acc.delay_width)));
                // now: Xb Yb N Xa Ya
                core = compose(core, block_perm({b.bare_width, b.delay_width, b.n, acc.bare_width, acc.delay_width},
                                                {3, 0, 4, 1, 2}));
                out.core = core;
                acc = std::move(out);
            }
            return acc;
        }
        case TermKind::Par: {
            GlobalTraceDelayForm acc = global_trace_delay_form(t->children[0]);
            for (size_t idx = 1; idx < t->children.size(); ++idx) {
                GlobalTraceDelayForm b = global_trace_delay_form(t->children[idx]);
                GlobalTraceDelayForm out;
                out.bare_width = acc.bare_width + b.bare_width;
                out.delay_width = acc.delay_width + b.delay_width;
                out.value_width = acc.value_width + b.value_width;
                out.values = acc.values;
                out.values.insert(out.values.end(), b.values.begin(), b.values.end());
                out.m = acc.m + b.m;
                out.n = acc.n + b.n;
                // blocks in: Xa Xb Ya Yb Za Zb Ma Mb
                TermPtr core = block_perm({acc.bare_width, b.bare_width, acc.delay_width, b.delay_width,
                                           acc.value_width, b.value_width, acc.m, b.m},
                                          {0, 2, 4, 6, 1, 3, 5, 7});
                core = compose(core, tensor(acc.core, b.core));
                // now: Xa Ya Na Xb Yb Nb
                core = compose(core, block_perm({acc.bare_width, acc.delay_width, acc.n, b.bare_width,
                                                 b.delay_width, b.n},
                                                {0, 3, 1, 4, 2, 5}));
                out.core = core;
                acc = std::move(out);
            }
            return acc;
        }
        case TermKind::Trace: {
            const int w = t->trace_width;
            GlobalTraceDelayForm a = global_trace_delay_form(t->children[0]);
            GlobalTraceDelayForm out;
            out.bare_width = w + a.bare_width;
            out.delay_width = a.delay_width;
            out.value_width = a.value_width;
            out.values = a.values;
            out.m = t->inputs;
            out.n = t->outputs;
            // blocks in: W Xa Ya Za M; the body core wants Xa Ya Za (W M)
            TermPtr core = block_perm({w, a.bare_width, a.delay_width, a.value_width, out.m},
                                      {1, 2, 3, 0, 4});
            core = compose(core, a.core);
            // now: Xa Ya (W N); pull the loop block back to the front
            core = compose(core, block_perm({a.bare_width, a.delay_width, w, out.n}, {2, 0, 1, 3}));
            out.core = core;
            return out;
        }
        default:
            g.core = t;
            return g;
    }
}

PreMealyForm mealy_rule(const GlobalTraceDelayForm& g) {
    PreMealyForm p;
    p.bare_width = g.bare_width;
    p.m = g.m;
    p.n = g.n;
    p.state = Word(static_cast<size_t>(g.delay_width), Value{0});
    p.state.insert(p.state.end(), g.values.begin(), g.values.end());

    // The value registers need a feed; extend the core with bottom outputs
    // in the value positions: [bare | delays | n] -> [bare | delays | values | n].
    TermPtr core = compose(g.core, tensor(identity(g.bare_width + g.delay_width + g.n), intro_n(g.value_width)));
    core = compose(core, block_perm({g.bare_width, g.delay_width, g.n, g.value_width}, {0, 1, 3, 2}));
    p.core = core;
    return p;
}

MealyForm instant_feedback(const PreMealyForm& p, const Interpretation& i) {
    MealyForm mf;
    mf.state = p.state;
    mf.m = p.m;
    mf.n = p.n;

    const int x = p.bare_width;
    const int big_m = static_cast<int>(p.state.size()) + p.m;  // register wires + inputs
    const int big_n = static_cast<int>(p.state.size()) + p.n;
    if (x == 0) {
        mf.core = p.core;
        return mf;
    }

    const int c = x * i.lattice().height();
    // g applies the core j+1 times; copy zero sees bottoms on the feedback
    // inputs, each next copy sees the previous copy's feedback outputs, and
    // the shared inputs are forked to every copy.
    TermPtr g = compose(tensor(intro_n(x), identity(big_m)), p.core);
    for (int j = 0; j < c; ++j) {
        TermPtr drop = compose(g, tensor(identity(x), elim_n(big_n)));
        g = compose(block_fork(big_m, 2), compose(tensor(drop, identity(big_m)), p.core));
    }
    mf.core = compose(g, tensor(elim_n(x), identity(big_n)));
    return mf;
}

MealyForm to_mealy_form(const TermPtr& t, const Interpretation& i) {
    return instant_feedback(mealy_rule(global_trace_delay_form(t)), i);
}

std::pair<Word, MealyForm> productivity_step(const MealyForm& mf, const Word& input, const Interpretation& i) {
    if (static_cast<int>(input.size()) != mf.m)
        throw std::invalid_argument("productivity_step: input width mismatch");
    Word full = mf.state;
    full.insert(full.end(), input.begin(), input.end());
    Word all = eval_combinational(mf.core, i, full);
    Word next(all.begin(), all.begin() + mf.state_width());
    Word out(all.begin() + mf.state_width(), all.end());
    MealyForm succ = mf;
    succ.state = std::move(next);
    return {std::move(out), std::move(succ)};
}

Waveform run_waveform(const TermPtr& t, const Waveform& w, const Interpretation& i) {
    if (w.width != t->inputs) throw std::invalid_argument("run_waveform: width mismatch");
    MealyForm mf = to_mealy_form(t, i);
    Waveform out;
    out.width = t->outputs;
    for (const Word& in : w.values) {
        auto [o, next] = productivity_step(mf, in, i);
        out.values.push_back(std::move(o));
        mf = std::move(next);
    }
    return out;
}

EquivResult obs_equiv(const TermPtr& t1, const TermPtr& t2, EquivMode mode, InterpPtr interp,
                      size_t budget) {
    if (t1->inputs != t2->inputs || t1->outputs != t2->outputs)
        throw std::invalid_argument("obs_equiv: arities differ");
    EquivResult res;
    if (mode == EquivMode::Oracle) {
        auto w = bisimulation_witness(circuit_to_mealy(t1, interp), circuit_to_mealy(t2, interp), budget);
        res.equivalent = !w.has_value();
        if (w) {
            Waveform wf;
            wf.width = t1->inputs;
            wf.values = *w;
            res.witness = std::move(wf);
        }
        return res;
    }

    const Lattice& l = interp->lattice();
    const int m = t1->inputs;
    const int c = std::max(stats(t1).delay_count, stats(t2).delay_count);
    // Waveforms of length |V|^c + 1 exercise every reachable register word.
    double len_d = std::pow(static_cast<double>(l.size()), c) + 1;
    double count_d = std::pow(static_cast<double>(word_count(m, l.size())), len_d);
    if (!(count_d <= static_cast<double>(budget)))
        throw budget_error("obs_equiv: exhaustive waveform count exceeds the budget");
    const size_t len = static_cast<size_t>(len_d);
    const size_t per_tick = word_count(m, l.size());
    size_t total = 1;
    for (size_t k = 0; k < len; ++k) total *= per_tick;

    MealyForm f1 = to_mealy_form(t1, *interp);
    MealyForm f2 = to_mealy_form(t2, *interp);
    for (size_t wi = 0; wi < total; ++wi) {
        Waveform in;
        in.width = m;
        size_t rest = wi;
        for (size_t k = 0; k < len; ++k) {
            in.push(word_at(rest % per_tick, m, l.size()));
            rest /= per_tick;
        }
        MealyForm a = f1, b = f2;
        for (size_t k = 0; k < len; ++k) {
            auto [oa, na] = productivity_step(a, in.values[k], *interp);
            auto [ob, nb] = productivity_step(b, in.values[k], *interp);
            if (oa != ob) {
                res.equivalent = false;
                in.values.resize(k + 1);
                res.witness = std::move(in);
                return res;
            }
            a = std::move(na);
            b = std::move(nb);
        }
    }
    res.equivalent = true;
    return res;
}

// ----- value rules -----------------------------------------------------------

namespace {

/// Flat view of a term for local rewriting: atoms connected by wires, in
/// traversal order. Identities and symmetries dissolve into the wiring.
struct FlatTerm {
    struct Atom {
        TermPtr node;
        std::vector<int> ins;
        std::vector<int> outs;
    };
    std::vector<Atom> atoms;
    int n_wires = 0;
    std::vector<int> inputs, outputs;
    std::vector<std::pair<int, int>> loops;  // traced (in wire, out wire) pairs

    int fresh() { return n_wires++; }
};

std::vector<int> flatten_into(FlatTerm& f, const TermPtr& t, const std::vector<int>& ins) {
    switch (t->kind) {
        case TermKind::Id:
            return ins;
        case TermKind::Symmetry: {
            std::vector<int> out(ins.begin() + t->m, ins.end());
            out.insert(out.end(), ins.begin(), ins.begin() + t->m);
            return out;
        }
        case TermKind::Seq: {
            std::vector<int> w = ins;
            for (const auto& c : t->children) w = flatten_into(f, c, w);
            return w;
        }
        case TermKind::Par: {
            std::vector<int> out;
            size_t off = 0;
            for (const auto& c : t->children) {
                std::vector<int> part(ins.begin() + static_cast<long>(off),
                                      ins.begin() + static_cast<long>(off + static_cast<size_t>(c->inputs)));
                off += static_cast<size_t>(c->inputs);
                auto r = flatten_into(f, c, part);
                out.insert(out.end(), r.begin(), r.end());
            }
            return out;
        }
        case TermKind::Trace: {
            std::vector<int> loop_ins;
            for (int k = 0; k < t->trace_width; ++k) loop_ins.push_back(f.fresh());
            std::vector<int> body_ins = loop_ins;
            body_ins.insert(body_ins.end(), ins.begin(), ins.end());
            auto outs = flatten_into(f, t->children[0], body_ins);
            for (int k = 0; k < t->trace_width; ++k)
                f.loops.push_back({loop_ins[static_cast<size_t>(k)], outs[static_cast<size_t>(k)]});
            return {outs.begin() + t->trace_width, outs.end()};
        }
        default: {
            FlatTerm::Atom a;
            a.node = t;
            a.ins = ins;
            for (int k = 0; k < t->outputs; ++k) a.outs.push_back(f.fresh());
            f.atoms.push_back(a);
            return f.atoms.back().outs;
        }
    }
}

FlatTerm flatten(const TermPtr& t) {
    FlatTerm f;
    for (int k = 0; k < t->inputs; ++k) f.inputs.push_back(f.fresh());
    f.outputs = flatten_into(f, t, f.inputs);
    return f;
}

/// Rebuild a term from the flat form, keeping atom order; traced wires
/// become a single outer trace.
TermPtr rebuild(const FlatTerm& f, Value bottom) {
    // A closed loop-free term whose atoms are all values is a value word.
    bool all_values = f.inputs.empty() && f.loops.empty();
    for (const auto& a : f.atoms)
        if (a.node->kind != TermKind::Value && a.node->kind != TermKind::Intro) {
            all_values = false;
            break;
        }
    if (all_values) {
        std::vector<Value> by_wire(static_cast<size_t>(f.n_wires));
        for (const auto& a : f.atoms)
            for (size_t k = 0; k < a.outs.size(); ++k)
                by_wire[static_cast<size_t>(a.outs[k])] =
                    a.node->kind == TermKind::Intro ? bottom : a.node->letters[k];
        Word letters;
        for (int w : f.outputs) letters.push_back(by_wire[static_cast<size_t>(w)]);
        return value_word(letters);
    }

    std::vector<DataflowPiece> pieces;
    for (const auto& a : f.atoms) pieces.push_back({a.node, a.ins, a.outs});
    std::vector<int> body_inputs, body_outputs;
    for (auto [in, out] : f.loops) body_inputs.push_back(in);
    body_inputs.insert(body_inputs.end(), f.inputs.begin(), f.inputs.end());
    for (auto [in, out] : f.loops) body_outputs.push_back(out);
    body_outputs.insert(body_outputs.end(), f.outputs.begin(), f.outputs.end());
    TermPtr body = assemble_term(pieces, body_inputs, body_outputs, f.n_wires);
    return trace(static_cast<int>(f.loops.size()), body);
}

struct Redex {
    size_t atom;
    std::vector<size_t> sources;
    std::vector<int> letter_index;
};

bool is_value_atom(const TermPtr& t) { return t->kind == TermKind::Value || t->kind == TermKind::Intro; }

std::vector<Redex> find_redexes(const FlatTerm& f) {
    std::vector<std::pair<int, int>> prov(static_cast<size_t>(f.n_wires), {-1, -1});
    for (size_t a = 0; a < f.atoms.size(); ++a) {
        if (!is_value_atom(f.atoms[a].node)) continue;
        for (size_t k = 0; k < f.atoms[a].outs.size(); ++k)
            prov[static_cast<size_t>(f.atoms[a].outs[k])] = {static_cast<int>(a), static_cast<int>(k)};
    }
    std::vector<Redex> out;
    for (size_t a = 0; a < f.atoms.size(); ++a) {
        const auto& atom = f.atoms[a];
        auto kind = atom.node->kind;
        if (kind != TermKind::Primitive && kind != TermKind::Fork && kind != TermKind::Join &&
            kind != TermKind::Elim)
            continue;
        Redex r;
        r.atom = a;
        bool ok = true;
        for (int w : atom.ins) {
            auto [src, letter] = prov[static_cast<size_t>(w)];
            if (src < 0) { ok = false; break; }
            r.sources.push_back(static_cast<size_t>(src));
            r.letter_index.push_back(letter);
        }
        if (ok) out.push_back(std::move(r));
    }
    return out;
}

Value letter_of(const TermPtr& value_atom, int letter, const Interpretation& i) {
    if (value_atom->kind == TermKind::Intro) return i.lattice().bottom();
    return value_atom->letters[static_cast<size_t>(letter)];
}

TermPtr apply_redex(const FlatTerm& f, const Redex& r, const Interpretation& i) {
    const auto& atom = f.atoms[r.atom];
    Word in;
    for (size_t k = 0; k < r.sources.size(); ++k)
        in.push_back(letter_of(f.atoms[r.sources[k]].node, r.letter_index[k], i));

    Word result;
    switch (atom.node->kind) {
        case TermKind::Primitive: {
            auto id = i.signature().find(atom.node->prim_name);
            if (!id) throw std::invalid_argument("value rule: unknown primitive '" + atom.node->prim_name + "'");
            result = i.apply(*id, in);
            break;
        }
        case TermKind::Fork:
            result = {in[0], in[0]};
            break;
        case TermKind::Join:
            result = {i.lattice().join(in[0], in[1])};
            break;
        case TermKind::Elim:
            result = {};
            break;
        default:
            throw std::logic_error("not a value redex");
    }

    FlatTerm next;
    next.n_wires = f.n_wires;
    next.inputs = f.inputs;
    next.outputs = f.outputs;
    next.loops = f.loops;
    for (size_t a = 0; a < f.atoms.size(); ++a) {
        if (a == r.atom) {
            if (!result.empty()) {
                FlatTerm::Atom v;
                v.node = value_word(result);
                v.outs = atom.outs;
                next.atoms.push_back(std::move(v));
            }
            continue;
        }
        FlatTerm::Atom copy = f.atoms[a];
        if (is_value_atom(copy.node)) {
            Word letters;
            std::vector<int> outs;
            for (size_t k = 0; k < copy.outs.size(); ++k) {
                bool consumed = false;
                for (size_t j = 0; j < r.sources.size(); ++j)
                    if (r.sources[j] == a && r.letter_index[j] == static_cast<int>(k)) consumed = true;
                if (consumed) continue;
                letters.push_back(letter_of(copy.node, static_cast<int>(k), i));
                outs.push_back(copy.outs[k]);
            }
            if (outs.empty()) continue;
            if (outs.size() != copy.outs.size()) {
                copy.node = value_word(letters);
                copy.outs = outs;
                copy.ins.clear();
            }
        }
        next.atoms.push_back(std::move(copy));
    }
    return rebuild(next, i.lattice().bottom());
}

}  // namespace

std::vector<int> value_redexes(const TermPtr& t, const Interpretation& i) {
    (void)i;
    auto f = flatten(t);
    auto r = find_redexes(f);
    std::vector<int> out;
    for (size_t k = 0; k < r.size(); ++k) out.push_back(static_cast<int>(k));
    return out;
}

std::vector<ValueRedexInfo> value_redex_info(const TermPtr& t, const Interpretation& i) {
    auto f = flatten(t);
    std::vector<ValueRedexInfo> out;
    for (const auto& r : find_redexes(f)) {
        ValueRedexInfo info;
        const auto& atom = f.atoms[r.atom];
        switch (atom.node->kind) {
            case TermKind::Primitive: info.kind = atom.node->prim_name; break;
            case TermKind::Fork: info.kind = "fork"; break;
            case TermKind::Join: info.kind = "join"; break;
            case TermKind::Elim: info.kind = "elim"; break;
            default: info.kind = "?"; break;
        }
        for (size_t k = 0; k < r.sources.size(); ++k)
            info.letters.push_back(letter_of(f.atoms[r.sources[k]].node, r.letter_index[k], i));
        out.push_back(std::move(info));
    }
    return out;
}

TermPtr value_rule_apply(const TermPtr& t, const Interpretation& i, int redex) {
    auto f = flatten(t);
    auto r = find_redexes(f);
    if (redex < 0 || redex >= static_cast<int>(r.size()))
        throw std::invalid_argument("value_rule_apply: no such redex");
    return apply_redex(f, r[static_cast<size_t>(redex)], i);
}

std::optional<TermPtr> value_rule_step(const TermPtr& t, const Interpretation& i) {
    auto f = flatten(t);
    auto r = find_redexes(f);
    if (r.empty()) return std::nullopt;
    return apply_redex(f, r[0], i);
}

TermPtr value_rule_normal_form(const TermPtr& t, const Interpretation& i) {
    TermPtr cur = t;
    for (;;) {
        auto next = value_rule_step(cur, i);
        if (!next) return cur;
        cur = *next;
    }
}

}  // namespace circ
