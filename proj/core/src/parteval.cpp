#include "circ/parteval.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace circ {

namespace {

struct NetBuilder {
    InterfacedHypergraph g;

    int fresh() { return g.graph.n_vertices++; }

    std::vector<int> build(const TermPtr& t, const std::vector<int>& ins) {
        switch (t->kind) {
            case TermKind::Id:
                return ins;
            case TermKind::Symmetry: {
                std::vector<int> out(ins.begin() + t->m, ins.end());
                out.insert(out.end(), ins.begin(), ins.begin() + t->m);
                return out;
            }
            case TermKind::Fork:
                return {ins[0], ins[0]};
            case TermKind::Elim:
                return {};
            case TermKind::Join: {
                Hyperedge e;
                e.label = EdgeLabel::join_edge();
                e.sources = ins;
                e.targets = {fresh()};
                g.graph.edges.push_back(e);
                return e.targets;
            }
            case TermKind::Intro: {
                // A permanent bottom source.
                Hyperedge e;
                e.label = EdgeLabel::waveform_edge(Value{0});
                e.targets = {fresh()};
                g.graph.edges.push_back(e);
                return e.targets;
            }
            case TermKind::Primitive: {
                Hyperedge e;
                e.label = EdgeLabel::gate(t->prim_name, t->inputs, t->outputs);
                e.sources = ins;
                for (int k = 0; k < t->outputs; ++k) e.targets.push_back(fresh());
                g.graph.edges.push_back(e);
                return g.graph.edges.back().targets;
            }
            case TermKind::Delay: {
                std::vector<int> outs;
                for (int k = 0; k < t->m; ++k) {
                    Hyperedge e;
                    e.label = EdgeLabel::delay_edge();
                    e.sources = {ins[static_cast<size_t>(k)]};
                    e.targets = {fresh()};
                    g.graph.edges.push_back(e);
                    outs.push_back(e.targets[0]);
                }
                return outs;
            }
            case TermKind::Value:
            case TermKind::Waveform: {
                std::vector<int> outs;
                for (Value v : t->letters) {
                    Hyperedge e;
                    e.label = t->kind == TermKind::Value ? EdgeLabel::value_edge(v)
                                                         : EdgeLabel::waveform_edge(v);
                    e.targets = {fresh()};
                    g.graph.edges.push_back(e);
                    outs.push_back(e.targets[0]);
                }
                return outs;
            }
            case TermKind::Uncertain: {
                std::vector<int> outs;
                const int w = t->outputs;
                for (int k = 0; k < w; ++k) {
                    std::vector<Word> alts;
                    for (const Word& a : t->alternatives) alts.push_back({a[static_cast<size_t>(k)]});
                    Hyperedge e;
                    e.label = EdgeLabel::uncertain_edge(std::move(alts));
                    e.targets = {fresh()};
                    g.graph.edges.push_back(e);
                    outs.push_back(e.targets[0]);
                }
                return outs;
            }
            case TermKind::Seq: {
                std::vector<int> w = ins;
                for (const auto& c : t->children) w = build(c, w);
                return w;
            }
            case TermKind::Par: {
                std::vector<int> out;
                size_t off = 0;
                for (const auto& c : t->children) {
                    std::vector<int> part(ins.begin() + static_cast<long>(off),
                                          ins.begin() + static_cast<long>(off + static_cast<size_t>(c->inputs)));
                    off += static_cast<size_t>(c->inputs);
                    auto r = build(c, part);
                    out.insert(out.end(), r.begin(), r.end());
                }
                return out;
            }
            case TermKind::Trace: {
                const int x = t->trace_width;
                std::vector<int> loop;
                for (int k = 0; k < x; ++k) loop.push_back(fresh());
                std::vector<int> body_ins = loop;
                body_ins.insert(body_ins.end(), ins.begin(), ins.end());
                auto outs = build(t->children[0], body_ins);
                std::vector<std::pair<int, int>> merges;
                for (int k = 0; k < x; ++k) merges.push_back({loop[static_cast<size_t>(k)], outs[static_cast<size_t>(k)]});
                // Merge the loop wires in place. Freshly created ids are
                // always absorbed into older ones, so wire lists held by
                // enclosing recursion frames stay canonical.
                std::vector<int> remap(static_cast<size_t>(g.graph.n_vertices));
                for (int v = 0; v < g.graph.n_vertices; ++v) remap[static_cast<size_t>(v)] = v;
                std::function<int(int)> find = [&](int v) {
                    while (remap[static_cast<size_t>(v)] != v) v = remap[static_cast<size_t>(v)] = remap[static_cast<size_t>(remap[static_cast<size_t>(v)])];
                    return v;
                };
                for (auto [x1, y1] : merges) {
                    int a = find(x1), b = find(y1);
                    if (a != b) remap[static_cast<size_t>(std::max(a, b))] = std::min(a, b);
                }
                for (auto& e : g.graph.edges) {
                    for (int& s : e.sources) s = find(s);
                    for (int& tt : e.targets) tt = find(tt);
                }
                std::vector<int> rest(outs.begin() + x, outs.end());
                for (int& v : rest) v = find(v);
                for (int& v : g.inputs) v = find(v);
                return rest;
            }
        }
        throw std::logic_error("unknown term kind");
    }
};

/// Dense renumbering of a net's vertices (drops unused ids).
Net compact(Net n) {
    std::vector<int> used(static_cast<size_t>(n.graph.graph.n_vertices), 0);
    auto touch = [&](int v) { used[static_cast<size_t>(v)] = 1; };
    for (const auto& e : n.graph.graph.edges) {
        for (int s : e.sources) touch(s);
        for (int t : e.targets) touch(t);
    }
    for (int v : n.graph.inputs) touch(v);
    for (int v : n.graph.outputs) touch(v);
    std::vector<int> renum(static_cast<size_t>(n.graph.graph.n_vertices), -1);
    int next = 0;
    for (int v = 0; v < n.graph.graph.n_vertices; ++v)
        if (used[static_cast<size_t>(v)]) renum[static_cast<size_t>(v)] = next++;
    for (auto& e : n.graph.graph.edges) {
        for (int& s : e.sources) s = renum[static_cast<size_t>(s)];
        for (int& t : e.targets) t = renum[static_cast<size_t>(t)];
    }
    for (int& v : n.graph.inputs) v = renum[static_cast<size_t>(v)];
    for (int& v : n.graph.outputs) v = renum[static_cast<size_t>(v)];
    n.graph.graph.n_vertices = next;
    return n;
}

/// Producer edge of each vertex, or -1.
std::vector<int> producers(const InterfacedHypergraph& g) {
    std::vector<int> prod(static_cast<size_t>(g.graph.n_vertices), -1);
    for (size_t e = 0; e < g.graph.edges.size(); ++e)
        for (int t : g.graph.edges[e].targets) prod[static_cast<size_t>(t)] = static_cast<int>(e);
    return prod;
}

std::optional<Value> held_constant(const InterfacedHypergraph& g, const std::vector<int>& prod, int v) {
    int p = prod[static_cast<size_t>(v)];
    if (p < 0) return std::nullopt;
    const auto& lbl = g.graph.edges[static_cast<size_t>(p)].label;
    if (lbl.kind != EdgeLabel::Kind::WaveformE) return std::nullopt;
    return lbl.letters[0];
}

/// One tidying sweep: drop everything that cannot reach an output.
bool tidy_pass(Net& n) {
    const auto& g = n.graph.graph;
    std::vector<char> live_v(static_cast<size_t>(g.n_vertices), 0);
    for (int v : n.graph.outputs) live_v[static_cast<size_t>(v)] = 1;
    std::vector<char> live_e(g.edges.size(), 0);
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t e = 0; e < g.edges.size(); ++e) {
            if (live_e[e]) continue;
            bool feeds = false;
            for (int t : g.edges[e].targets)
                if (live_v[static_cast<size_t>(t)]) feeds = true;
            if (!feeds) continue;
            live_e[e] = 1;
            changed = true;
            for (int s : g.edges[e].sources)
                if (!live_v[static_cast<size_t>(s)]) live_v[static_cast<size_t>(s)] = 1;
        }
    }
    bool any_dead = false;
    for (char e : live_e)
        if (!e) any_dead = true;
    if (!any_dead) return false;
    Net out = n;
    out.graph.graph.edges.clear();
    for (size_t e = 0; e < g.edges.size(); ++e)
        if (live_e[e]) out.graph.graph.edges.push_back(g.edges[e]);
    n = compact(std::move(out));
    return true;
}

int net_worlds(const InterfacedHypergraph& g) {
    int w = 1;
    for (const auto& e : g.graph.edges)
        if (e.label.kind == EdgeLabel::Kind::UncertainE)
            w = std::max(w, static_cast<int>(e.label.alternatives.size()));
    return w;
}

/// Letter of a constant-per-world source in the given world, if the vertex
/// is driven by one.
std::optional<Value> world_letter(const InterfacedHypergraph& g, const std::vector<int>& prod, int v,
                                  int world, Value bottom) {
    int p = prod[static_cast<size_t>(v)];
    if (p < 0) return std::nullopt;
    const auto& lbl = g.graph.edges[static_cast<size_t>(p)].label;
    if (lbl.kind == EdgeLabel::Kind::WaveformE) return lbl.letters[0];
    if (lbl.kind == EdgeLabel::Kind::UncertainE) {
        const auto& alts = lbl.alternatives;
        if (world < static_cast<int>(alts.size())) return alts[static_cast<size_t>(world)][0];
        return bottom;  // shorter alternative lists pad with bottom
    }
    return std::nullopt;
}

bool waveform_pass(Net& n, const Interpretation& i) {
    auto prod = producers(n.graph);
    const Lattice& l = i.lattice();
    auto& edges = n.graph.graph.edges;
    for (size_t e = 0; e < edges.size(); ++e) {
        const auto& edge = edges[e];
        if (edge.label.kind == EdgeLabel::Kind::Gate) {
            Word in;
            bool all = true;
            for (int s : edge.sources) {
                auto c = held_constant(n.graph, prod, s);
                if (!c) { all = false; break; }
                in.push_back(*c);
            }
            if (!all) continue;
            auto id = i.signature().find(edge.label.name);
            if (!id) continue;
            const Word& out = i.apply(*id, in);
            std::vector<Hyperedge> repl;
            for (size_t k = 0; k < edge.targets.size(); ++k) {
                Hyperedge we;
                we.label = EdgeLabel::waveform_edge(out[k]);
                we.targets = {edge.targets[k]};
                repl.push_back(std::move(we));
            }
            edges.erase(edges.begin() + static_cast<long>(e));
            for (auto& we : repl) edges.push_back(std::move(we));
            return true;
        }
        if (edge.label.kind == EdgeLabel::Kind::JoinE) {
            auto a = held_constant(n.graph, prod, edge.sources[0]);
            auto b = held_constant(n.graph, prod, edge.sources[1]);
            if (a && b) {
                Hyperedge we;
                we.label = EdgeLabel::waveform_edge(l.join(*a, *b));
                we.targets = edge.targets;
                edges.erase(edges.begin() + static_cast<long>(e));
                edges.push_back(std::move(we));
                return true;
            }
            // Joining with a held bottom is the identity on the other arm.
            if (a && *a == l.bottom()) {
                int other = edge.sources[1], tgt = edge.targets[0];
                edges.erase(edges.begin() + static_cast<long>(e));
                n.graph = merge_vertices(n.graph, {{other, tgt}});
                return true;
            }
            if (b && *b == l.bottom()) {
                int other = edge.sources[0], tgt = edge.targets[0];
                edges.erase(edges.begin() + static_cast<long>(e));
                n.graph = merge_vertices(n.graph, {{other, tgt}});
                return true;
            }
        }
        if (edge.label.kind == EdgeLabel::Kind::DelayE) {
            auto a = held_constant(n.graph, prod, edge.sources[0]);
            if (a && *a == l.bottom()) {
                // Delaying a held bottom changes nothing.
                Hyperedge we;
                we.label = EdgeLabel::waveform_edge(l.bottom());
                we.targets = edge.targets;
                edges.erase(edges.begin() + static_cast<long>(e));
                edges.push_back(std::move(we));
                return true;
            }
        }
    }
    return false;
}

bool shortcut_pass(Net& n, const Interpretation& i) {
    // The dominance rules hold for the built-in four-valued gates.
    const Lattice& l = i.lattice();
    auto f_val = l.value_of("f");
    auto t_val = l.value_of("t");
    if (!f_val || !t_val) return false;
    auto prod = producers(n.graph);
    auto& edges = n.graph.graph.edges;
    for (size_t e = 0; e < edges.size(); ++e) {
        const auto& edge = edges[e];
        if (edge.label.kind != EdgeLabel::Kind::Gate) continue;
        bool is_and = edge.label.name == "and";
        bool is_or = edge.label.name == "or";
        if (!is_and && !is_or) continue;
        for (int side = 0; side < 2; ++side) {
            auto c = held_constant(n.graph, prod, edge.sources[static_cast<size_t>(side)]);
            if (!c) continue;
            Value dominator = is_and ? *f_val : *t_val;
            Value unit = is_and ? *t_val : *f_val;
            if (*c == dominator) {
                Hyperedge we;
                we.label = EdgeLabel::waveform_edge(dominator);
                we.targets = edge.targets;
                edges.erase(edges.begin() + static_cast<long>(e));
                edges.push_back(std::move(we));
                return true;
            }
            if (*c == unit) {
                int other = edge.sources[static_cast<size_t>(1 - side)], tgt = edge.targets[0];
                edges.erase(edges.begin() + static_cast<long>(e));
                n.graph = merge_vertices(n.graph, {{other, tgt}});
                return true;
            }
        }
    }
    return false;
}

bool uncertain_pass(Net& n, const Interpretation& i) {
    const Lattice& l = i.lattice();
    const int worlds = net_worlds(n.graph);
    auto prod = producers(n.graph);
    auto& edges = n.graph.graph.edges;

    // Collapse: a source whose worlds all agree is a plain constant.
    for (size_t e = 0; e < edges.size(); ++e) {
        if (edges[e].label.kind != EdgeLabel::Kind::UncertainE) continue;
        const auto& alts = edges[e].label.alternatives;
        bool same = true;
        for (size_t k = 1; k < alts.size(); ++k)
            if (alts[k] != alts[0]) same = false;
        if (same) {
            Value v = alts[0][0];
            edges[e].label = EdgeLabel::waveform_edge(v);
            return true;
        }
    }

    for (size_t e = 0; e < edges.size(); ++e) {
        const auto& edge = edges[e];
        bool is_gate = edge.label.kind == EdgeLabel::Kind::Gate;
        bool is_join = edge.label.kind == EdgeLabel::Kind::JoinE;
        if (!is_gate && !is_join) continue;
        bool any_uncertain = false;
        for (int s : edge.sources) {
            int p = prod[static_cast<size_t>(s)];
            if (p >= 0 && edges[static_cast<size_t>(p)].label.kind == EdgeLabel::Kind::UncertainE)
                any_uncertain = true;
        }
        if (!any_uncertain) continue;
        bool all_const = true;
        std::vector<Word> per_world(static_cast<size_t>(worlds));
        for (int w = 0; w < worlds && all_const; ++w) {
            Word in;
            for (int s : edge.sources) {
                auto c = world_letter(n.graph, prod, s, w, l.bottom());
                if (!c) { all_const = false; break; }
                in.push_back(*c);
            }
            if (!all_const) break;
            if (is_join)
                per_world[static_cast<size_t>(w)] = {l.join(in[0], in[1])};
            else {
                auto id = i.signature().find(edge.label.name);
                if (!id) { all_const = false; break; }
                per_world[static_cast<size_t>(w)] = i.apply(*id, in);
            }
        }
        if (!all_const) continue;
        std::vector<Hyperedge> repl;
        for (size_t k = 0; k < edge.targets.size(); ++k) {
            std::vector<Word> alts;
            bool same = true;
            for (int w = 0; w < worlds; ++w) {
                alts.push_back({per_world[static_cast<size_t>(w)][k]});
                if (alts.back() != alts.front()) same = false;
            }
            Hyperedge ne;
            ne.label = same ? EdgeLabel::waveform_edge(alts[0][0]) : EdgeLabel::uncertain_edge(std::move(alts));
            ne.targets = {edge.targets[k]};
            repl.push_back(std::move(ne));
        }
        edges.erase(edges.begin() + static_cast<long>(e));
        for (auto& ne : repl) edges.push_back(std::move(ne));
        return true;
    }
    return false;
}

}  // namespace

int Net::worlds() const { return net_worlds(graph); }

Net term_to_net(const TermPtr& t) {
    NetBuilder b;
    for (int k = 0; k < t->inputs; ++k) b.g.inputs.push_back(b.fresh());
    b.g.outputs = b.build(t, b.g.inputs);
    Net n;
    n.graph = std::move(b.g);
    return compact(std::move(n));
}

TermPtr net_to_term(const Net& n) { return extract_term(n.graph, ExtractMode::TracedComonoid); }

TermPtr tidy(const TermPtr& t) {
    Net n = term_to_net(t);
    while (tidy_pass(n)) {
    }
    return net_to_term(n);
}

TermPtr propagate_waveforms(const TermPtr& t, const Interpretation& i) {
    Net n = term_to_net(t);
    while (waveform_pass(n, i)) {
    }
    return net_to_term(n);
}

TermPtr apply_shortcuts(const TermPtr& t, const Interpretation& i) {
    Net n = term_to_net(t);
    while (shortcut_pass(n, i)) {
    }
    return net_to_term(n);
}

TermPtr propagate_uncertain(const TermPtr& t, const Interpretation& i) {
    Net n = term_to_net(t);
    while (uncertain_pass(n, i)) {
    }
    return net_to_term(n);
}

PartialEvalResult partial_evaluate(const TermPtr& t, const std::map<int, Binding>& bindings,
                                   const Interpretation& i, size_t step_budget) {
    for (const auto& [wire, b] : bindings)
        if (wire < 0 || wire >= t->inputs)
            throw std::invalid_argument("partial_evaluate: binding names a missing input wire");

    Net n = term_to_net(t);
    std::vector<int> kept_inputs;
    for (int k = 0; k < static_cast<int>(n.graph.inputs.size()); ++k) {
        auto it = bindings.find(k);
        if (it == bindings.end()) {
            kept_inputs.push_back(n.graph.inputs[static_cast<size_t>(k)]);
            continue;
        }
        Hyperedge e;
        if (std::holds_alternative<Value>(it->second)) {
            e.label = EdgeLabel::waveform_edge(std::get<Value>(it->second));
        } else {
            const auto& alts = std::get<std::vector<Value>>(it->second);
            std::vector<Word> words;
            for (Value v : alts) words.push_back({v});
            e.label = words.size() == 1 ? EdgeLabel::waveform_edge(alts[0])
                                        : EdgeLabel::uncertain_edge(std::move(words));
        }
        e.targets = {n.graph.inputs[static_cast<size_t>(k)]};
        n.graph.graph.edges.push_back(std::move(e));
    }
    n.graph.inputs = kept_inputs;

    PartialEvalResult res;
    size_t steps = 0;
    bool progress = true;
    while (progress) {
        progress = false;
        if (tidy_pass(n)) progress = true;
        else if (waveform_pass(n, i)) progress = true;
        else if (shortcut_pass(n, i)) progress = true;
        else if (uncertain_pass(n, i)) progress = true;
        if (progress && ++steps > step_budget) {
            res.complete = false;
            break;
        }
    }
    res.term = net_to_term(n);
    return res;
}

namespace {

TermPtr map_uncertain(const TermPtr& t, const std::function<TermPtr(const TermPtr&)>& f) {
    switch (t->kind) {
        case TermKind::Uncertain:
            return f(t);
        case TermKind::Seq: {
            TermPtr acc;
            for (const auto& c : t->children) {
                TermPtr sc = map_uncertain(c, f);
                acc = acc ? compose(acc, sc) : sc;
            }
            return acc;
        }
        case TermKind::Par: {
            TermPtr acc;
            for (const auto& c : t->children) {
                TermPtr sc = map_uncertain(c, f);
                acc = acc ? tensor(acc, sc) : sc;
            }
            return acc;
        }
        case TermKind::Trace:
            return trace(t->trace_width, map_uncertain(t->children[0], f));
        default:
            return t;
    }
}

}  // namespace

TermPtr fix_world(const TermPtr& t, int world) {
    return map_uncertain(t, [world](const TermPtr& u) -> TermPtr {
        Word letters;
        const int w = u->outputs;
        for (int k = 0; k < w; ++k) {
            if (world < static_cast<int>(u->alternatives.size()))
                letters.push_back(u->alternatives[static_cast<size_t>(world)][static_cast<size_t>(k)]);
            else
                letters.push_back(Value{0});
        }
        return waveform(letters);
    });
}

int term_worlds(const TermPtr& t) {
    int w = 1;
    if (t->kind == TermKind::Uncertain) w = std::max(w, static_cast<int>(t->alternatives.size()));
    for (const auto& c : t->children) w = std::max(w, term_worlds(c));
    return w;
}

}  // namespace circ
