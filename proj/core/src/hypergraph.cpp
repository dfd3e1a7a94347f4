#include "circ/hypergraph.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace circ {

EdgeLabel EdgeLabel::gate(const std::string& n, int a, int c) {
    EdgeLabel l;
    l.kind = Kind::Gate;
    l.name = n;
    l.arity = a;
    l.coarity = c;
    return l;
}
EdgeLabel EdgeLabel::delay_edge() {
    EdgeLabel l;
    l.kind = Kind::DelayE;
    l.arity = l.coarity = 1;
    return l;
}
EdgeLabel EdgeLabel::value_edge(Value v) {
    EdgeLabel l;
    l.kind = Kind::ValueE;
    l.arity = 0;
    l.coarity = 1;
    l.letters = {v};
    return l;
}
EdgeLabel EdgeLabel::waveform_edge(Value v) {
    EdgeLabel l;
    l.kind = Kind::WaveformE;
    l.arity = 0;
    l.coarity = 1;
    l.letters = {v};
    return l;
}
EdgeLabel EdgeLabel::uncertain_edge(std::vector<Word> alts) {
    EdgeLabel l;
    l.kind = Kind::UncertainE;
    l.arity = 0;
    l.coarity = 1;
    l.alternatives = std::move(alts);
    return l;
}
EdgeLabel EdgeLabel::join_edge() {
    EdgeLabel l;
    l.kind = Kind::JoinE;
    l.arity = 2;
    l.coarity = 1;
    return l;
}

bool EdgeLabel::operator==(const EdgeLabel& o) const {
    return kind == o.kind && name == o.name && arity == o.arity && coarity == o.coarity &&
           letters == o.letters && alternatives == o.alternatives;
}

std::string EdgeLabel::display(const Lattice* l) const {
    auto letter = [&](Value v) { return l ? l->name(v) : std::to_string(static_cast<int>(v.index)); };
    switch (kind) {
        case Kind::Gate: return name;
        case Kind::DelayE: return "delay";
        case Kind::ValueE: return "value " + letter(letters[0]);
        case Kind::WaveformE: return "wave " + letter(letters[0]);
        case Kind::UncertainE: {
            std::string s = "unc ";
            for (size_t k = 0; k < alternatives.size(); ++k) {
                if (k) s += "|";
                s += letter(alternatives[k][0]);
            }
            return s;
        }
        case Kind::JoinE: return "join";
    }
    return "?";
}

Degree degree(const Hypergraph& g, int v) {
    Degree d;
    for (const auto& e : g.edges) {
        for (int t : e.targets)
            if (t == v) ++d.in_degree;
        for (int s : e.sources)
            if (s == v) ++d.out_degree;
    }
    return d;
}

std::vector<Degree> degrees(const Hypergraph& g) {
    std::vector<Degree> out(static_cast<size_t>(g.n_vertices));
    for (const auto& e : g.edges) {
        for (int t : e.targets) ++out[static_cast<size_t>(t)].in_degree;
        for (int s : e.sources) ++out[static_cast<size_t>(s)].out_degree;
    }
    return out;
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(static_cast<size_t>(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int a) {
        while (parent[static_cast<size_t>(a)] != a) {
            parent[static_cast<size_t>(a)] = parent[static_cast<size_t>(parent[static_cast<size_t>(a)])];
            a = parent[static_cast<size_t>(a)];
        }
        return a;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        // deterministic representative: the smaller id wins
        if (a > b) std::swap(a, b);
        parent[static_cast<size_t>(b)] = a;
    }
};

/// Rebuild a cospan after union-find merging, renumbering representatives
/// densely in original vertex order.
InterfacedHypergraph quotient(const InterfacedHypergraph& c, UnionFind& uf) {
    std::vector<int> renum(static_cast<size_t>(c.graph.n_vertices), -1);
    int next = 0;
    auto id_of = [&](int v) {
        int r = uf.find(v);
        if (renum[static_cast<size_t>(r)] < 0) renum[static_cast<size_t>(r)] = next++;
        return renum[static_cast<size_t>(r)];
    };
    InterfacedHypergraph out;
    for (int v = 0; v < c.graph.n_vertices; ++v) id_of(v);
    out.graph.n_vertices = next;
    for (const auto& e : c.graph.edges) {
        Hyperedge ne;
        ne.label = e.label;
        ne.marked = e.marked;
        for (int s : e.sources) ne.sources.push_back(id_of(s));
        for (int t : e.targets) ne.targets.push_back(id_of(t));
        out.graph.edges.push_back(std::move(ne));
    }
    for (int v : c.inputs) out.inputs.push_back(id_of(v));
    for (int v : c.outputs) out.outputs.push_back(id_of(v));
    return out;
}

}  // namespace

InterfacedHypergraph tensor_cospans(const InterfacedHypergraph& a, const InterfacedHypergraph& b) {
    InterfacedHypergraph out = a;
    const int off = a.graph.n_vertices;
    out.graph.n_vertices += b.graph.n_vertices;
    for (const auto& e : b.graph.edges) {
        Hyperedge ne;
        ne.label = e.label;
        ne.marked = e.marked;
        for (int s : e.sources) ne.sources.push_back(s + off);
        for (int t : e.targets) ne.targets.push_back(t + off);
        out.graph.edges.push_back(std::move(ne));
    }
    for (int v : b.inputs) out.inputs.push_back(v + off);
    for (int v : b.outputs) out.outputs.push_back(v + off);
    return out;
}

InterfacedHypergraph compose_cospans(const InterfacedHypergraph& a, const InterfacedHypergraph& b) {
    if (a.n_outputs() != b.n_inputs())
        throw std::invalid_argument("compose_cospans: interface width mismatch");
    InterfacedHypergraph big = tensor_cospans(a, b);
    UnionFind uf(big.graph.n_vertices);
    const int off = a.graph.n_vertices;
    for (size_t k = 0; k < a.outputs.size(); ++k)
        uf.unite(a.outputs[k], b.inputs[k] + off);
    InterfacedHypergraph glued;
    glued.graph = big.graph;
    glued.inputs = a.inputs;
    for (int v : b.outputs) glued.outputs.push_back(v + off);
    return quotient(glued, uf);
}

InterfacedHypergraph trace_cospan(int x, const InterfacedHypergraph& c) {
    if (x < 0 || c.n_inputs() < x || c.n_outputs() < x)
        throw std::invalid_argument("trace_cospan: width exceeds the interfaces");
    UnionFind uf(c.graph.n_vertices);
    for (int k = 0; k < x; ++k) uf.unite(c.inputs[static_cast<size_t>(k)], c.outputs[static_cast<size_t>(k)]);
    InterfacedHypergraph cut;
    cut.graph = c.graph;
    cut.inputs = std::vector<int>(c.inputs.begin() + x, c.inputs.end());
    cut.outputs = std::vector<int>(c.outputs.begin() + x, c.outputs.end());
    return quotient(cut, uf);
}

InterfacedHypergraph merge_vertices(const InterfacedHypergraph& c,
                                    const std::vector<std::pair<int, int>>& pairs) {
    UnionFind uf(c.graph.n_vertices);
    for (auto [a, b] : pairs) uf.unite(a, b);
    return quotient(c, uf);
}

InterfacedHypergraph term_to_cospan(const TermPtr& t) {
    switch (t->kind) {
        case TermKind::Primitive: {
            InterfacedHypergraph c;
            c.graph.n_vertices = t->inputs + t->outputs;
            Hyperedge e;
            e.label = EdgeLabel::gate(t->prim_name, t->inputs, t->outputs);
            for (int k = 0; k < t->inputs; ++k) {
                e.sources.push_back(k);
                c.inputs.push_back(k);
            }
            for (int k = 0; k < t->outputs; ++k) {
                e.targets.push_back(t->inputs + k);
                c.outputs.push_back(t->inputs + k);
            }
            c.graph.edges.push_back(std::move(e));
            return c;
        }
        case TermKind::Id: {
            InterfacedHypergraph c;
            c.graph.n_vertices = t->m;
            for (int k = 0; k < t->m; ++k) {
                c.inputs.push_back(k);
                c.outputs.push_back(k);
            }
            return c;
        }
        case TermKind::Symmetry: {
            InterfacedHypergraph c;
            c.graph.n_vertices = t->m + t->n;
            for (int k = 0; k < t->m + t->n; ++k) c.inputs.push_back(k);
            for (int k = 0; k < t->n; ++k) c.outputs.push_back(t->m + k);
            for (int k = 0; k < t->m; ++k) c.outputs.push_back(k);
            return c;
        }
        case TermKind::Fork: {
            InterfacedHypergraph c;
            c.graph.n_vertices = 1;
            c.inputs = {0};
            c.outputs = {0, 0};
            return c;
        }
        case TermKind::Join: {
            InterfacedHypergraph c;
            c.graph.n_vertices = 1;
            c.inputs = {0, 0};
            c.outputs = {0};
            return c;
        }
        case TermKind::Intro: {
            InterfacedHypergraph c;
            c.graph.n_vertices = 1;
            c.outputs = {0};
            return c;
        }
        case TermKind::Elim: {
            InterfacedHypergraph c;
            c.graph.n_vertices = 1;
            c.inputs = {0};
            return c;
        }
        case TermKind::Value:
        case TermKind::Waveform: {
            InterfacedHypergraph c;
            c.graph.n_vertices = static_cast<int>(t->letters.size());
            for (size_t k = 0; k < t->letters.size(); ++k) {
                Hyperedge e;
                e.label = t->kind == TermKind::Value ? EdgeLabel::value_edge(t->letters[k])
                                                     : EdgeLabel::waveform_edge(t->letters[k]);
                e.targets = {static_cast<int>(k)};
                c.graph.edges.push_back(std::move(e));
                c.outputs.push_back(static_cast<int>(k));
            }
            return c;
        }
        case TermKind::Uncertain: {
            InterfacedHypergraph c;
            const int w = t->outputs;
            c.graph.n_vertices = w;
            for (int k = 0; k < w; ++k) {
                std::vector<Word> alts;
                for (const Word& a : t->alternatives) alts.push_back({a[static_cast<size_t>(k)]});
                Hyperedge e;
                e.label = EdgeLabel::uncertain_edge(std::move(alts));
                e.targets = {k};
                c.graph.edges.push_back(std::move(e));
                c.outputs.push_back(k);
            }
            return c;
        }
        case TermKind::Delay: {
            InterfacedHypergraph c;
            c.graph.n_vertices = 2 * t->m;
            for (int k = 0; k < t->m; ++k) {
                Hyperedge e;
                e.label = EdgeLabel::delay_edge();
                e.sources = {k};
                e.targets = {t->m + k};
                c.graph.edges.push_back(std::move(e));
                c.inputs.push_back(k);
                c.outputs.push_back(t->m + k);
            }
            return c;
        }
        case TermKind::Seq: {
            InterfacedHypergraph c = term_to_cospan(t->children[0]);
            for (size_t k = 1; k < t->children.size(); ++k)
                c = compose_cospans(c, term_to_cospan(t->children[k]));
            return c;
        }
        case TermKind::Par: {
            InterfacedHypergraph c = term_to_cospan(t->children[0]);
            for (size_t k = 1; k < t->children.size(); ++k)
                c = tensor_cospans(c, term_to_cospan(t->children[k]));
            return c;
        }
        case TermKind::Trace:
            return trace_cospan(t->trace_width, term_to_cospan(t->children[0]));
    }
    throw std::logic_error("unknown term kind");
}

namespace {

bool injective(const std::vector<int>& xs) {
    std::vector<int> s = xs;
    std::sort(s.begin(), s.end());
    return std::adjacent_find(s.begin(), s.end()) == s.end();
}

}  // namespace

ValidatorReport check_partial_monogamous(const InterfacedHypergraph& c) {
    ValidatorReport r;
    if (!injective(c.inputs)) return {false, "input map is not injective"};
    if (!injective(c.outputs)) return {false, "output map is not injective"};
    auto deg = degrees(c.graph);
    std::vector<char> is_in(static_cast<size_t>(c.graph.n_vertices), 0), is_out(is_in);
    for (int v : c.inputs) is_in[static_cast<size_t>(v)] = 1;
    for (int v : c.outputs) is_out[static_cast<size_t>(v)] = 1;
    for (int v = 0; v < c.graph.n_vertices; ++v) {
        Degree d = deg[static_cast<size_t>(v)];
        bool ok;
        if (is_in[static_cast<size_t>(v)] && is_out[static_cast<size_t>(v)]) ok = d == Degree{0, 0};
        else if (is_in[static_cast<size_t>(v)]) ok = d == Degree{0, 1};
        else if (is_out[static_cast<size_t>(v)]) ok = d == Degree{1, 0};
        else ok = d == Degree{0, 0} || d == Degree{1, 1};
        if (!ok)
            return {false, "vertex " + std::to_string(v) + " has degree (" + std::to_string(d.in_degree) + "," +
                               std::to_string(d.out_degree) + ")"};
    }
    return r;
}

ValidatorReport check_monogamous_acyclic(const InterfacedHypergraph& c) {
    ValidatorReport r = check_partial_monogamous(c);
    if (!r.ok) return r;
    auto deg = degrees(c.graph);
    std::vector<char> interfaced(static_cast<size_t>(c.graph.n_vertices), 0);
    for (int v : c.inputs) interfaced[static_cast<size_t>(v)] = 1;
    for (int v : c.outputs) interfaced[static_cast<size_t>(v)] = 1;
    for (int v = 0; v < c.graph.n_vertices; ++v)
        if (!interfaced[static_cast<size_t>(v)] && deg[static_cast<size_t>(v)] == Degree{0, 0})
            return {false, "vertex " + std::to_string(v) + " is disconnected from the interfaces"};
    if (has_cycle(c.graph)) return {false, "graph contains a cycle"};
    return r;
}

ValidatorReport check_partial_left_monogamous(const InterfacedHypergraph& c) {
    if (!injective(c.inputs)) return {false, "input map is not injective"};
    auto deg = degrees(c.graph);
    std::vector<char> is_in(static_cast<size_t>(c.graph.n_vertices), 0);
    for (int v : c.inputs) is_in[static_cast<size_t>(v)] = 1;
    for (int v = 0; v < c.graph.n_vertices; ++v) {
        int in_deg = deg[static_cast<size_t>(v)].in_degree;
        int limit = is_in[static_cast<size_t>(v)] ? 0 : 1;
        if (in_deg > limit)
            return {false, "vertex " + std::to_string(v) + " has in-degree " + std::to_string(in_deg)};
    }
    return {};
}

bool has_cycle(const Hypergraph& g) {
    // An edge feeds another when one of its targets is the other's source.
    const size_t n = g.edges.size();
    std::vector<std::vector<size_t>> succ(n);
    for (size_t a = 0; a < n; ++a)
        for (size_t b = 0; b < n; ++b) {
            bool feeds = false;
            for (int t : g.edges[a].targets) {
                for (int s : g.edges[b].sources)
                    if (s == t) { feeds = true; break; }
                if (feeds) break;
            }
            if (feeds) succ[a].push_back(b);
        }
    std::vector<int> state(n, 0);
    std::vector<std::pair<size_t, size_t>> stack;
    for (size_t start = 0; start < n; ++start) {
        if (state[start]) continue;
        stack.push_back({start, 0});
        state[start] = 1;
        while (!stack.empty()) {
            auto& [e, idx] = stack.back();
            if (idx < succ[e].size()) {
                size_t nxt = succ[e][idx++];
                if (state[nxt] == 1) return true;
                if (state[nxt] == 0) {
                    state[nxt] = 1;
                    stack.push_back({nxt, 0});
                }
            } else {
                state[e] = 2;
                stack.pop_back();
            }
        }
    }
    return false;
}

std::optional<CospanIso> cospan_iso(const InterfacedHypergraph& a, const InterfacedHypergraph& b,
                                    size_t budget) {
    if (a.graph.n_vertices != b.graph.n_vertices || a.graph.edges.size() != b.graph.edges.size() ||
        a.inputs.size() != b.inputs.size() || a.outputs.size() != b.outputs.size())
        return std::nullopt;

    const int nv = a.graph.n_vertices;
    const size_t ne = a.graph.edges.size();
    std::vector<int> vmap(static_cast<size_t>(nv), -1);
    std::vector<char> vused(static_cast<size_t>(nv), 0);
    std::vector<int> emap(ne, -1);
    std::vector<char> eused(ne, 0);

    auto assign = [&](int va, int vb, std::vector<std::pair<int, int>>& undo) {
        if (vmap[static_cast<size_t>(va)] >= 0) return vmap[static_cast<size_t>(va)] == vb;
        if (vused[static_cast<size_t>(vb)]) return false;
        vmap[static_cast<size_t>(va)] = vb;
        vused[static_cast<size_t>(vb)] = 1;
        undo.push_back({va, vb});
        return true;
    };

    // Interfaces are matched pointwise, so they seed the vertex map.
    std::vector<std::pair<int, int>> seed_undo;
    for (size_t k = 0; k < a.inputs.size(); ++k)
        if (!assign(a.inputs[k], b.inputs[k], seed_undo)) return std::nullopt;
    for (size_t k = 0; k < a.outputs.size(); ++k)
        if (!assign(a.outputs[k], b.outputs[k], seed_undo)) return std::nullopt;

    size_t steps = 0;
    std::function<bool(size_t)> match_edges = [&](size_t ea) -> bool {
        if (++steps > budget) throw budget_error("cospan_iso: search budget exceeded");
        if (ea == ne) {
            // Leftover vertices are isolated on both sides; pair them in order.
            std::vector<int> free_b;
            for (int vb = 0; vb < nv; ++vb)
                if (!vused[static_cast<size_t>(vb)]) free_b.push_back(vb);
            size_t k = 0;
            for (int va = 0; va < nv; ++va)
                if (vmap[static_cast<size_t>(va)] < 0) vmap[static_cast<size_t>(va)] = free_b[k++];
            return true;
        }
        const auto& edge_a = a.graph.edges[ea];
        for (size_t eb = 0; eb < ne; ++eb) {
            if (eused[eb]) continue;
            const auto& edge_b = b.graph.edges[eb];
            if (!(edge_a.label == edge_b.label) || edge_a.marked != edge_b.marked) continue;
            std::vector<std::pair<int, int>> undo;
            bool ok = true;
            for (size_t k = 0; k < edge_a.sources.size() && ok; ++k)
                ok = assign(edge_a.sources[k], edge_b.sources[k], undo);
            for (size_t k = 0; k < edge_a.targets.size() && ok; ++k)
                ok = assign(edge_a.targets[k], edge_b.targets[k], undo);
            if (ok) {
                eused[eb] = 1;
                emap[ea] = static_cast<int>(eb);
                if (match_edges(ea + 1)) return true;
                eused[eb] = 0;
                emap[ea] = -1;
            }
            for (auto [va, vb] : undo) {
                vmap[static_cast<size_t>(va)] = -1;
                vused[static_cast<size_t>(vb)] = 0;
            }
        }
        return false;
    };

    if (!match_edges(0)) return std::nullopt;
    CospanIso iso;
    iso.vertex_map = vmap;
    iso.edge_map = emap;
    return iso;
}

std::string to_dot(const InterfacedHypergraph& c, const Lattice* l) {
    std::ostringstream os;
    os << "// circ graph format v1\n";
    os << "digraph circuit {\n";
    os << "  rankdir=LR;\n";
    os << "  node [fontname=\"monospace\"];\n";
    for (int v = 0; v < c.graph.n_vertices; ++v)
        os << "  v" << v << " [shape=point, label=\"\"];\n";
    for (size_t e = 0; e < c.graph.edges.size(); ++e) {
        const auto& edge = c.graph.edges[e];
        os << "  e" << e << " [shape=box, label=\"" << edge.label.display(l) << "\"";
        if (edge.marked) os << ", color=red";
        os << "];\n";
        for (size_t k = 0; k < edge.sources.size(); ++k)
            os << "  v" << edge.sources[k] << " -> e" << e << " [headlabel=\"" << k
               << "\", arrowsize=0.5];\n";
        for (size_t k = 0; k < edge.targets.size(); ++k)
            os << "  e" << e << " -> v" << edge.targets[k] << " [taillabel=\"" << k
               << "\", arrowsize=0.5];\n";
    }
    for (size_t k = 0; k < c.inputs.size(); ++k) {
        os << "  in" << k << " [shape=plaintext, label=\"" << k << "\"];\n";
        os << "  in" << k << " -> v" << c.inputs[k] << " [style=dashed, arrowsize=0.5];\n";
    }
    for (size_t k = 0; k < c.outputs.size(); ++k) {
        os << "  out" << k << " [shape=plaintext, label=\"" << c.inputs.size() + k << "\"];\n";
        os << "  v" << c.outputs[k] << " -> out" << k << " [style=dashed, arrowsize=0.5];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace circ
