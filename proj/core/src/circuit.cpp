#include "circ/circuit.hpp"

#include <algorithm>
#include <sstream>

namespace circ {

namespace {

[[noreturn]] void arity_error(const std::string& what, int a, int b) {
    throw std::invalid_argument(what + ": widths " + std::to_string(a) + " and " + std::to_string(b) + " do not match");
}

}  // namespace

TermPtr prim(const std::string& name, int arity, int coarity) {
    Term t;
    t.kind = TermKind::Primitive;
    t.prim_name = name;
    t.inputs = arity;
    t.outputs = coarity;
    return Term::make(std::move(t));
}

TermPtr prim(const Signature& sig, const std::string& name) {
    auto id = sig.find(name);
    if (!id) throw std::invalid_argument("unknown primitive '" + name + "'");
    const Primitive& p = sig.prim(*id);
    return prim(p.name, p.arity, p.coarity);
}

TermPtr identity(int n) {
    Term t;
    t.kind = TermKind::Id;
    t.m = n;
    t.inputs = t.outputs = n;
    return Term::make(std::move(t));
}

TermPtr symmetry(int m, int n) {
    Term t;
    t.kind = TermKind::Symmetry;
    t.m = m;
    t.n = n;
    t.inputs = t.outputs = m + n;
    return Term::make(std::move(t));
}

TermPtr fork() {
    Term t;
    t.kind = TermKind::Fork;
    t.inputs = 1;
    t.outputs = 2;
    return Term::make(std::move(t));
}

TermPtr join_wires() {
    Term t;
    t.kind = TermKind::Join;
    t.inputs = 2;
    t.outputs = 1;
    return Term::make(std::move(t));
}

TermPtr intro() {
    Term t;
    t.kind = TermKind::Intro;
    t.inputs = 0;
    t.outputs = 1;
    return Term::make(std::move(t));
}

TermPtr elim() {
    Term t;
    t.kind = TermKind::Elim;
    t.inputs = 1;
    t.outputs = 0;
    return Term::make(std::move(t));
}

TermPtr value_word(Word letters) {
    Term t;
    t.kind = TermKind::Value;
    t.outputs = static_cast<int>(letters.size());
    t.letters = std::move(letters);
    return Term::make(std::move(t));
}

TermPtr delay(int n) {
    Term t;
    t.kind = TermKind::Delay;
    t.m = n;
    t.inputs = t.outputs = n;
    return Term::make(std::move(t));
}

TermPtr waveform(Word letters) {
    Term t;
    t.kind = TermKind::Waveform;
    t.outputs = static_cast<int>(letters.size());
    t.letters = std::move(letters);
    return Term::make(std::move(t));
}

TermPtr uncertain(std::vector<Word> alternatives) {
    if (alternatives.empty()) throw std::invalid_argument("uncertain value needs at least one alternative");
    const size_t w = alternatives[0].size();
    for (const Word& a : alternatives)
        if (a.size() != w) throw std::invalid_argument("uncertain value: alternative widths differ");
    Term t;
    t.kind = TermKind::Uncertain;
    t.outputs = static_cast<int>(w);
    t.alternatives = std::move(alternatives);
    return Term::make(std::move(t));
}

TermPtr compose(TermPtr f, TermPtr g) {
    if (f->outputs != g->inputs) arity_error("compose", f->outputs, g->inputs);
    if (f->kind == TermKind::Id) return g;
    if (g->kind == TermKind::Id) return f;
    Term t;
    t.kind = TermKind::Seq;
    t.inputs = f->inputs;
    t.outputs = g->outputs;
    auto push = [&](const TermPtr& c) {
        if (c->kind == TermKind::Seq)
            t.children.insert(t.children.end(), c->children.begin(), c->children.end());
        else
            t.children.push_back(c);
    };
    push(f);
    push(g);
    if (t.children.size() == 1) return t.children[0];
    return Term::make(std::move(t));
}

TermPtr tensor(TermPtr f, TermPtr g) {
    if (f->kind == TermKind::Id && f->m == 0) return g;
    if (g->kind == TermKind::Id && g->m == 0) return f;
    Term t;
    t.kind = TermKind::Par;
    t.inputs = f->inputs + g->inputs;
    t.outputs = f->outputs + g->outputs;
    auto push = [&](const TermPtr& c) {
        if (c->kind == TermKind::Par)
            t.children.insert(t.children.end(), c->children.begin(), c->children.end());
        else
            t.children.push_back(c);
    };
    push(f);
    push(g);
    if (t.children.size() == 1) return t.children[0];
    return Term::make(std::move(t));
}

TermPtr trace(int x, TermPtr f) {
    if (x < 0 || f->inputs < x || f->outputs < x)
        throw std::invalid_argument("trace: width " + std::to_string(x) + " exceeds body arity " +
                                    std::to_string(f->inputs) + "->" + std::to_string(f->outputs));
    if (x == 0) return f;
    Term t;
    t.kind = TermKind::Trace;
    t.trace_width = x;
    t.inputs = f->inputs - x;
    t.outputs = f->outputs - x;
    t.children.push_back(std::move(f));
    return Term::make(std::move(t));
}

TermPtr fork_n(int n) {
    // n -> 2n, copy i lands at positions i and n+i.
    if (n == 0) return identity(0);
    TermPtr t = fork();
    for (int k = 1; k < n; ++k) {
        // t : k -> 2k with block layout; extend by one wire.
        // (t x fork) : k+1 -> 2k+2 as [a..., a..., b, b]; reorder to [a,b | a,b].
        TermPtr wide = tensor(t, fork());
        std::vector<int> p(static_cast<size_t>(2 * k + 2));
        for (int j = 0; j <= k; ++j) {
            p[static_cast<size_t>(j)] = j < k ? j : 2 * k;
            p[static_cast<size_t>(k + 1 + j)] = j < k ? k + j : 2 * k + 1;
        }
        t = compose(wide, perm_term(p));
    }
    return t;
}

TermPtr join_n(int n) {
    // 2n -> n, joining wire i with wire n+i.
    if (n == 0) return identity(0);
    TermPtr t = join_wires();
    for (int k = 1; k < n; ++k) {
        std::vector<int> p(static_cast<size_t>(2 * k + 2));
        // inputs [a0..ak, b0..bk] -> pairs [a0..a(k-1), b0..b(k-1) | ak, bk]
        for (int j = 0; j < k; ++j) {
            p[static_cast<size_t>(j)] = j;
            p[static_cast<size_t>(k + j)] = k + 1 + j;
        }
        p[static_cast<size_t>(2 * k)] = k;
        p[static_cast<size_t>(2 * k + 1)] = 2 * k + 1;
        t = compose(perm_term(p), tensor(t, join_wires()));
    }
    return t;
}

TermPtr elim_n(int n) {
    TermPtr t = identity(0);
    for (int i = 0; i < n; ++i) t = tensor(t, elim());
    return t;
}

TermPtr intro_n(int n) {
    TermPtr t = identity(0);
    for (int i = 0; i < n; ++i) t = tensor(t, intro());
    return t;
}

TermPtr perm_term(const std::vector<int>& p) {
    const int n = static_cast<int>(p.size());
    {
        std::vector<char> seen(static_cast<size_t>(n), 0);
        for (int v : p) {
            if (v < 0 || v >= n || seen[static_cast<size_t>(v)])
                throw std::invalid_argument("perm_term: not a permutation");
            seen[static_cast<size_t>(v)] = 1;
        }
    }
    // Sort with adjacent transpositions; record the swaps.
    std::vector<int> cur(p);
    TermPtr t = identity(n);
    bool moved = true;
    while (moved) {
        moved = false;
        for (int i = 0; i + 1 < n; ++i) {
            if (cur[static_cast<size_t>(i)] > cur[static_cast<size_t>(i + 1)]) {
                std::swap(cur[static_cast<size_t>(i)], cur[static_cast<size_t>(i + 1)]);
                TermPtr layer = identity(i);
                layer = tensor(layer, symmetry(1, 1));
                layer = tensor(layer, identity(n - i - 2));
                t = compose(layer, t);
                moved = true;
            }
        }
    }
    return t;
}

TermPtr register_term(const Word& initial) {
    const int m = static_cast<int>(initial.size());
    // Joins the instantaneous word onto the delayed input, wire by wire.
    return compose(tensor(value_word(initial), delay(m)), join_n(m));
}

TermPtr constant_term(const Word& w) {
    TermPtr t = identity(0);
    for (Value v : w) {
        // One-wire register fed its own output.
        TermPtr body = compose(register_term({v}), fork());
        t = tensor(t, trace(1, body));
    }
    return t;
}

TermPtr block_fork(int n, int k) {
    if (k == 0) return elim_n(n);
    TermPtr t = identity(n);
    for (int c = 1; c < k; ++c) {
        // t : n -> c*n. Fork the original block once more and route it first.
        // fork_n(n) : n -> [copy0 | copy1]; feed copy1 to t.
        t = compose(fork_n(n), tensor(identity(n), t));
    }
    return t;
}

namespace {

void stats_rec(const TermPtr& t, TermStats& s) {
    switch (t->kind) {
        case TermKind::Primitive:
            s.gate_count += 1;
            break;
        case TermKind::Delay:
            s.delay_count += t->m;
            if (t->m > 0) s.is_combinational = false;
            break;
        case TermKind::Value:
            s.value_count += static_cast<int>(t->letters.size());
            for (Value v : t->letters)
                if (v.index != 0) s.is_combinational = false;  // non-bottom letter
            break;
        case TermKind::Trace:
            s.is_combinational = false;
            stats_rec(t->children[0], s);
            break;
        case TermKind::Waveform:
        case TermKind::Uncertain:
            s.is_extended = true;
            s.is_combinational = false;
            break;
        case TermKind::Seq:
        case TermKind::Par:
            for (const auto& c : t->children) stats_rec(c, s);
            break;
        default:
            break;
    }
}

}  // namespace

TermStats stats(const TermPtr& t) {
    TermStats s;
    stats_rec(t, s);
    return s;
}

TermPtr substitute(const TermPtr& t, const std::string& name, const TermPtr& replacement) {
    switch (t->kind) {
        case TermKind::Primitive:
            if (t->prim_name == name) {
                if (replacement->inputs != t->inputs || replacement->outputs != t->outputs)
                    throw std::invalid_argument("substitute: replacement arity does not match '" + name + "'");
                return replacement;
            }
            return t;
        case TermKind::Seq: {
            TermPtr acc;
            for (const auto& c : t->children) {
                TermPtr sc = substitute(c, name, replacement);
                acc = acc ? compose(acc, sc) : sc;
            }
            return acc;
        }
        case TermKind::Par: {
            TermPtr acc;
            for (const auto& c : t->children) {
                TermPtr sc = substitute(c, name, replacement);
                acc = acc ? tensor(acc, sc) : sc;
            }
            return acc;
        }
        case TermKind::Trace:
            return trace(t->trace_width, substitute(t->children[0], name, replacement));
        default:
            return t;
    }
}

std::pair<int, int> recompute_arity(const TermPtr& t) {
    switch (t->kind) {
        case TermKind::Primitive:
            return {t->inputs, t->outputs};
        case TermKind::Id:
            return {t->m, t->m};
        case TermKind::Symmetry:
            return {t->m + t->n, t->m + t->n};
        case TermKind::Fork:
            return {1, 2};
        case TermKind::Join:
            return {2, 1};
        case TermKind::Intro:
            return {0, 1};
        case TermKind::Elim:
            return {1, 0};
        case TermKind::Value:
        case TermKind::Waveform:
            return {0, static_cast<int>(t->letters.size())};
        case TermKind::Uncertain:
            return {0, static_cast<int>(t->alternatives[0].size())};
        case TermKind::Delay:
            return {t->m, t->m};
        case TermKind::Seq: {
            auto first = recompute_arity(t->children.front());
            int prev = first.second;
            for (size_t i = 1; i < t->children.size(); ++i) {
                auto a = recompute_arity(t->children[i]);
                if (a.first != prev) throw std::logic_error("inconsistent sequence arities");
                prev = a.second;
            }
            return {first.first, prev};
        }
        case TermKind::Par: {
            int in = 0, out = 0;
            for (const auto& c : t->children) {
                auto a = recompute_arity(c);
                in += a.first;
                out += a.second;
            }
            return {in, out};
        }
        case TermKind::Trace: {
            auto a = recompute_arity(t->children[0]);
            return {a.first - t->trace_width, a.second - t->trace_width};
        }
    }
    throw std::logic_error("unknown term kind");
}

Word eval_combinational(const TermPtr& t, const Interpretation& i, const Word& input) {
    if (static_cast<int>(input.size()) != t->inputs)
        arity_error("eval", static_cast<int>(input.size()), t->inputs);
    const Lattice& l = i.lattice();
    switch (t->kind) {
        case TermKind::Primitive: {
            auto id = i.signature().find(t->prim_name);
            if (!id) throw std::invalid_argument("unknown primitive '" + t->prim_name + "'");
            return i.apply(*id, input);
        }
        case TermKind::Id:
            return input;
        case TermKind::Symmetry: {
            Word out(input.begin() + t->m, input.end());
            out.insert(out.end(), input.begin(), input.begin() + t->m);
            return out;
        }
        case TermKind::Fork:
            return {input[0], input[0]};
        case TermKind::Join:
            return {l.join(input[0], input[1])};
        case TermKind::Intro:
            return {l.bottom()};
        case TermKind::Elim:
            return {};
        case TermKind::Value: {
            for (Value v : t->letters)
                if (v != l.bottom()) throw std::invalid_argument("eval: term is not combinational (value)");
            return t->letters;
        }
        case TermKind::Seq: {
            Word w = input;
            for (const auto& c : t->children) w = eval_combinational(c, i, w);
            return w;
        }
        case TermKind::Par: {
            Word out;
            out.reserve(static_cast<size_t>(t->outputs));
            size_t off = 0;
            for (const auto& c : t->children) {
                Word part(input.begin() + static_cast<long>(off), input.begin() + static_cast<long>(off + static_cast<size_t>(c->inputs)));
                off += static_cast<size_t>(c->inputs);
                Word r = eval_combinational(c, i, part);
                out.insert(out.end(), r.begin(), r.end());
            }
            return out;
        }
        case TermKind::Delay:
        case TermKind::Trace:
        case TermKind::Waveform:
        case TermKind::Uncertain:
            throw std::invalid_argument("eval: term is not combinational");
    }
    throw std::logic_error("unknown term kind");
}

TermPtr assemble_term(const std::vector<DataflowPiece>& pieces, const std::vector<int>& body_inputs,
                      const std::vector<int>& body_outputs, int n_wires) {
    std::vector<int> uses(static_cast<size_t>(n_wires), 0);
    for (const auto& p : pieces)
        for (int w : p.ins) ++uses[static_cast<size_t>(w)];
    for (int w : body_outputs) ++uses[static_cast<size_t>(w)];

    std::vector<int> boundary = body_inputs;
    TermPtr t = identity(static_cast<int>(boundary.size()));

    auto grab = [&](const std::vector<int>& wanted) {
        // Fork boundary entries that stay in demand, then bring one copy of
        // each wanted wire to the front, in order.
        for (int w : wanted) {
            --uses[static_cast<size_t>(w)];
            if (uses[static_cast<size_t>(w)] > 0) {
                auto it = std::find(boundary.begin(), boundary.end(), w);
                if (it == boundary.end()) throw std::logic_error("assemble_term: wire not on the boundary");
                int idx = static_cast<int>(it - boundary.begin());
                TermPtr layer = tensor(tensor(identity(idx), fork()),
                                       identity(static_cast<int>(boundary.size()) - idx - 1));
                t = compose(t, layer);
                boundary.insert(boundary.begin() + idx, w);
            }
        }
        std::vector<int> perm;
        std::vector<char> taken(boundary.size(), 0);
        for (int w : wanted) {
            size_t pos = 0;
            while (pos < boundary.size() && (taken[pos] || boundary[pos] != w)) ++pos;
            if (pos == boundary.size()) throw std::logic_error("assemble_term: wire not on the boundary");
            taken[pos] = 1;
            perm.push_back(static_cast<int>(pos));
        }
        for (size_t k = 0; k < boundary.size(); ++k)
            if (!taken[k]) perm.push_back(static_cast<int>(k));
        std::vector<int> next;
        for (int idx : perm) next.push_back(boundary[static_cast<size_t>(idx)]);
        t = compose(t, perm_term(perm));
        boundary = next;
    };

    for (const auto& p : pieces) {
        grab(p.ins);
        t = compose(t, tensor(p.atom, identity(static_cast<int>(boundary.size()) - p.atom->inputs)));
        std::vector<int> next = p.outs;
        next.insert(next.end(), boundary.begin() + p.atom->inputs, boundary.end());
        boundary = next;
        // Outputs that nothing ever reads vanish immediately.
        for (size_t k = p.outs.size(); k-- > 0;) {
            int w = p.outs[k];
            if (uses[static_cast<size_t>(w)] == 0) {
                TermPtr layer = tensor(tensor(identity(static_cast<int>(k)), elim()),
                                       identity(static_cast<int>(boundary.size()) - static_cast<int>(k) - 1));
                t = compose(t, layer);
                boundary.erase(boundary.begin() + static_cast<long>(k));
            }
        }
    }
    // Unused inputs (and loop leftovers) fall off the end.
    for (size_t k = boundary.size(); k-- > 0;) {
        if (uses[static_cast<size_t>(boundary[k])] == 0) {
            TermPtr layer = tensor(tensor(identity(static_cast<int>(k)), elim()),
                                   identity(static_cast<int>(boundary.size()) - static_cast<int>(k) - 1));
            t = compose(t, layer);
            boundary.erase(boundary.begin() + static_cast<long>(k));
        }
    }
    grab(body_outputs);
    // Anything still trailing is an error in the bookkeeping.
    if (boundary.size() != body_outputs.size()) throw std::logic_error("assemble_term: leftover wires");
    return t;
}


namespace {

void show_rec(const TermPtr& t, const Lattice* l, std::ostringstream& os) {
    auto letters = [&](const Word& w) {
        os << "(";
        for (size_t i = 0; i < w.size(); ++i) {
            if (i) os << ",";
            if (l) os << l->name(w[i]);
            else os << static_cast<int>(w[i].index);
        }
        os << ")";
    };
    switch (t->kind) {
        case TermKind::Primitive: os << t->prim_name; break;
        case TermKind::Id: os << "id" << t->m; break;
        case TermKind::Symmetry: os << "swap" << t->m << "," << t->n; break;
        case TermKind::Fork: os << "fork"; break;
        case TermKind::Join: os << "join"; break;
        case TermKind::Intro: os << "intro"; break;
        case TermKind::Elim: os << "elim"; break;
        case TermKind::Value: os << "val"; letters(t->letters); break;
        case TermKind::Waveform: os << "wave"; letters(t->letters); break;
        case TermKind::Uncertain:
            os << "unc{";
            for (size_t k = 0; k < t->alternatives.size(); ++k) {
                if (k) os << "|";
                letters(t->alternatives[k]);
            }
            os << "}";
            break;
        case TermKind::Delay: os << "delay" << t->m; break;
        case TermKind::Seq:
            os << "(";
            for (size_t k = 0; k < t->children.size(); ++k) {
                if (k) os << " ; ";
                show_rec(t->children[k], l, os);
            }
            os << ")";
            break;
        case TermKind::Par:
            os << "[";
            for (size_t k = 0; k < t->children.size(); ++k) {
                if (k) os << " | ";
                show_rec(t->children[k], l, os);
            }
            os << "]";
            break;
        case TermKind::Trace:
            os << "tr" << t->trace_width << "(";
            show_rec(t->children[0], l, os);
            os << ")";
            break;
    }
}

}  // namespace

std::string show_term(const TermPtr& t, const Lattice* l) {
    std::ostringstream os;
    show_rec(t, l, os);
    return os.str();
}

}  // namespace circ
