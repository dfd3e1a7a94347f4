#include "circ/dpo.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>

#include "circ/opsem.hpp"

namespace circ {

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
        if (a > b) std::swap(a, b);
        parent[static_cast<size_t>(b)] = a;
    }
};

/// All set partitions of {0..n-1}, in a deterministic order (restricted
/// growth strings).
std::vector<std::vector<int>> set_partitions(int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> block(static_cast<size_t>(n), 0);
    std::function<void(int, int)> rec = [&](int k, int max_used) {
        if (k == n) {
            out.push_back(block);
            return;
        }
        for (int b = 0; b <= max_used + 1 && b < n; ++b) {
            block[static_cast<size_t>(k)] = b;
            rec(k + 1, std::max(max_used, b));
        }
    };
    if (n == 0)
        out.push_back({});
    else
        rec(0, -1);
    return out;
}

}  // namespace

InterfacedHypergraph fold(const InterfacedHypergraph& c) {
    InterfacedHypergraph out;
    out.graph = c.graph;
    out.outputs = c.inputs;
    out.outputs.insert(out.outputs.end(), c.outputs.begin(), c.outputs.end());
    return out;
}

InterfacedHypergraph unfold(const InterfacedHypergraph& c, int m) {
    if (!c.inputs.empty() || static_cast<int>(c.outputs.size()) < m)
        throw std::invalid_argument("unfold: cospan is not folded as expected");
    InterfacedHypergraph out;
    out.graph = c.graph;
    out.inputs = std::vector<int>(c.outputs.begin(), c.outputs.begin() + m);
    out.outputs = std::vector<int>(c.outputs.begin() + m, c.outputs.end());
    return out;
}

DpoRule make_rule(const TermPtr& l, const TermPtr& r) {
    if (l->inputs != r->inputs || l->outputs != r->outputs)
        throw std::invalid_argument("make_rule: rule sides must share an arity");
    DpoRule rule;
    rule.i = l->inputs;
    rule.j = l->outputs;
    rule.left = fold(term_to_cospan(l));
    rule.right = fold(term_to_cospan(r));
    return rule;
}

std::vector<Matching> find_matchings(const DpoRule& rule, const InterfacedHypergraph& host,
                                     size_t budget) {
    const auto& L = rule.left.graph;
    const auto& G = host.graph;
    std::vector<Matching> out;
    std::vector<int> vmap(static_cast<size_t>(L.n_vertices), -1);
    std::vector<int> emap(L.edges.size(), -1);
    size_t steps = 0;

    std::function<bool(int, int, std::vector<int>&)> assign = [&](int lv, int gv, std::vector<int>& undo) {
        if (vmap[static_cast<size_t>(lv)] >= 0) return vmap[static_cast<size_t>(lv)] == gv;
        vmap[static_cast<size_t>(lv)] = gv;
        undo.push_back(lv);
        return true;
    };

    std::function<void(size_t)> rec = [&](size_t le) {
        if (++steps > budget) throw budget_error("find_matchings: enumeration budget exceeded");
        if (le == L.edges.size()) {
            // Isolated left vertices can land anywhere: enumerate them too.
            std::vector<int> frees;
            for (int v = 0; v < L.n_vertices; ++v)
                if (vmap[static_cast<size_t>(v)] < 0) frees.push_back(v);
            std::function<void(size_t)> fill = [&](size_t k) {
                if (k == frees.size()) {
                    Matching m;
                    m.vertex_map = vmap;
                    m.edge_map = emap;
                    out.push_back(std::move(m));
                    return;
                }
                for (int gv = 0; gv < G.n_vertices; ++gv) {
                    vmap[static_cast<size_t>(frees[k])] = gv;
                    fill(k + 1);
                }
                vmap[static_cast<size_t>(frees[k])] = -1;
            };
            fill(0);
            return;
        }
        const auto& ledge = L.edges[le];
        for (size_t ge = 0; ge < G.edges.size(); ++ge) {
            const auto& gedge = G.edges[ge];
            if (!(ledge.label == gedge.label)) continue;
            std::vector<int> undo;
            bool ok = true;
            for (size_t k = 0; k < ledge.sources.size() && ok; ++k)
                ok = assign(ledge.sources[k], gedge.sources[k], undo);
            for (size_t k = 0; k < ledge.targets.size() && ok; ++k)
                ok = assign(ledge.targets[k], gedge.targets[k], undo);
            if (ok) {
                emap[le] = static_cast<int>(ge);
                rec(le + 1);
                emap[le] = -1;
            }
            for (int lv : undo) vmap[static_cast<size_t>(lv)] = -1;
        }
    };
    rec(0);
    return out;
}

std::vector<Complement> pushout_complements(const DpoRule& rule, const Matching& m,
                                            const InterfacedHypergraph& folded_host,
                                            size_t budget) {
    const auto& L = rule.left.graph;
    const auto& G = folded_host.graph;
    const auto& boundary = rule.left.outputs;  // rule boundary slots in L

    // No-identification: merged vertices must come from the boundary, and
    // edges may never merge.
    {
        std::vector<char> in_boundary(static_cast<size_t>(L.n_vertices), 0);
        for (int v : boundary) in_boundary[static_cast<size_t>(v)] = 1;
        for (int u = 0; u < L.n_vertices; ++u)
            for (int w = u + 1; w < L.n_vertices; ++w)
                if (m.vertex_map[static_cast<size_t>(u)] == m.vertex_map[static_cast<size_t>(w)] &&
                    !(in_boundary[static_cast<size_t>(u)] && in_boundary[static_cast<size_t>(w)]))
                    return {};
        for (size_t e = 0; e < L.edges.size(); ++e)
            for (size_t e2 = e + 1; e2 < L.edges.size(); ++e2)
                if (m.edge_map[e] == m.edge_map[e2]) return {};
    }

    std::vector<char> edge_matched(G.edges.size(), 0);
    for (int ge : m.edge_map) edge_matched[static_cast<size_t>(ge)] = 1;
    std::vector<char> v_matched(static_cast<size_t>(G.n_vertices), 0);
    for (int gv : m.vertex_map) v_matched[static_cast<size_t>(gv)] = 1;
    std::vector<char> v_boundary_img(static_cast<size_t>(G.n_vertices), 0);
    for (int slot : boundary) v_boundary_img[static_cast<size_t>(m.vertex_map[static_cast<size_t>(slot)])] = 1;

    // No-dangling: surviving edges may only touch matched vertices through
    // the boundary image.
    for (size_t ge = 0; ge < G.edges.size(); ++ge) {
        if (edge_matched[ge]) continue;
        auto touches_bad = [&](int v) {
            return v_matched[static_cast<size_t>(v)] && !v_boundary_img[static_cast<size_t>(v)];
        };
        for (int v : G.edges[ge].sources)
            if (touches_bad(v)) return {};
        for (int v : G.edges[ge].targets)
            if (touches_bad(v)) return {};
    }

    // Interface anchoring requires a preimage for every outer vertex.
    for (int v : folded_host.outputs)
        if (v_matched[static_cast<size_t>(v)] && !v_boundary_img[static_cast<size_t>(v)]) return {};

    // The exploded context: kept vertices survive unchanged; boundary-image
    // vertices shatter into one element per boundary slot and per surviving
    // incidence, to be re-glued by a per-fiber quotient.
    std::vector<int> fiber_vertices;  // boundary-image vertices, ascending
    for (int v = 0; v < G.n_vertices; ++v)
        if (v_boundary_img[static_cast<size_t>(v)]) fiber_vertices.push_back(v);

    struct FiberElem {
        enum class Kind { BoundarySlot, Incidence } kind;
        int slot = -1;          // boundary slot index
        size_t edge = 0;        // surviving edge (context index into G)
        bool is_source = false;
        size_t tentacle = 0;
    };
    std::vector<std::vector<FiberElem>> fibers(fiber_vertices.size());
    auto fiber_of = [&](int gv) -> int {
        auto it = std::lower_bound(fiber_vertices.begin(), fiber_vertices.end(), gv);
        if (it == fiber_vertices.end() || *it != gv) return -1;
        return static_cast<int>(it - fiber_vertices.begin());
    };
    for (size_t slot = 0; slot < boundary.size(); ++slot) {
        int gv = m.vertex_map[static_cast<size_t>(boundary[slot])];
        FiberElem fe;
        fe.kind = FiberElem::Kind::BoundarySlot;
        fe.slot = static_cast<int>(slot);
        fibers[static_cast<size_t>(fiber_of(gv))].push_back(fe);
    }
    for (size_t ge = 0; ge < G.edges.size(); ++ge) {
        if (edge_matched[ge]) continue;
        for (size_t k = 0; k < G.edges[ge].sources.size(); ++k) {
            int fb = fiber_of(G.edges[ge].sources[k]);
            if (fb >= 0) fibers[static_cast<size_t>(fb)].push_back({FiberElem::Kind::Incidence, -1, ge, true, k});
        }
        for (size_t k = 0; k < G.edges[ge].targets.size(); ++k) {
            int fb = fiber_of(G.edges[ge].targets[k]);
            if (fb >= 0) fibers[static_cast<size_t>(fb)].push_back({FiberElem::Kind::Incidence, -1, ge, false, k});
        }
    }

    // Enumerate quotients fiber by fiber.
    std::vector<std::vector<std::vector<int>>> fiber_partitions;
    size_t combos = 1;
    for (const auto& fb : fibers) {
        fiber_partitions.push_back(set_partitions(static_cast<int>(fb.size())));
        combos *= fiber_partitions.back().size();
        if (combos > budget) throw budget_error("pushout_complements: quotient budget exceeded");
    }

    std::vector<Complement> out;
    std::vector<size_t> choice(fibers.size(), 0);
    const std::vector<int>& outer = folded_host.outputs;

    auto emit_candidate = [&]() {
        // Vertex layout of C: kept host vertices first (ascending), then
        // the chosen classes fiber by fiber.
        std::vector<int> kept_id(static_cast<size_t>(G.n_vertices), -1);
        int next_id = 0;
        for (int v = 0; v < G.n_vertices; ++v)
            if (!v_matched[static_cast<size_t>(v)]) kept_id[static_cast<size_t>(v)] = next_id++;

        std::vector<std::vector<int>> class_id(fibers.size());  // per fiber elem -> class vertex
        std::vector<int> class_host;                            // class vertex -> host vertex (offset by kept)
        for (size_t fb = 0; fb < fibers.size(); ++fb) {
            const auto& part = fiber_partitions[fb][choice[fb]];
            int max_block = -1;
            for (int b : part) max_block = std::max(max_block, b);
            class_id[fb].resize(part.size());
            std::vector<int> block_vertex(static_cast<size_t>(max_block + 1), -1);
            for (size_t e = 0; e < part.size(); ++e) {
                int b = part[e];
                if (block_vertex[static_cast<size_t>(b)] < 0) {
                    block_vertex[static_cast<size_t>(b)] = next_id++;
                    class_host.push_back(fiber_vertices[fb]);
                }
                class_id[fb][e] = block_vertex[static_cast<size_t>(b)];
            }
        }

        Complement c;
        c.context.graph.n_vertices = next_id;
        c.vertex_to_host.assign(static_cast<size_t>(next_id), -1);
        for (int v = 0; v < G.n_vertices; ++v)
            if (kept_id[static_cast<size_t>(v)] >= 0) c.vertex_to_host[static_cast<size_t>(kept_id[static_cast<size_t>(v)])] = v;
        {
            int kept_count = 0;
            for (int v = 0; v < G.n_vertices; ++v)
                if (!v_matched[static_cast<size_t>(v)]) ++kept_count;
            for (size_t k = 0; k < class_host.size(); ++k)
                c.vertex_to_host[static_cast<size_t>(kept_count) + k] = class_host[k];
        }

        // Context edges: the surviving host edges with re-anchored tentacles.
        for (size_t ge = 0; ge < G.edges.size(); ++ge) {
            if (edge_matched[ge]) continue;
            Hyperedge e;
            e.label = G.edges[ge].label;
            e.marked = G.edges[ge].marked;
            auto anchor = [&](int gv, bool is_source, size_t tent) -> int {
                int fb = fiber_of(gv);
                if (fb < 0 || !v_matched[static_cast<size_t>(gv)]) return kept_id[static_cast<size_t>(gv)];
                for (size_t k = 0; k < fibers[static_cast<size_t>(fb)].size(); ++k) {
                    const auto& fe = fibers[static_cast<size_t>(fb)][k];
                    if (fe.kind == FiberElem::Kind::Incidence && fe.edge == ge && fe.is_source == is_source &&
                        fe.tentacle == tent)
                        return class_id[static_cast<size_t>(fb)][k];
                }
                throw std::logic_error("pushout_complements: incidence not found in its fiber");
            };
            for (size_t k = 0; k < G.edges[ge].sources.size(); ++k)
                e.sources.push_back(anchor(G.edges[ge].sources[k], true, k));
            for (size_t k = 0; k < G.edges[ge].targets.size(); ++k)
                e.targets.push_back(anchor(G.edges[ge].targets[k], false, k));
            c.context.graph.edges.push_back(std::move(e));
            c.edge_to_host.push_back(static_cast<int>(ge));
        }

        // Boundary map from the slot elements.
        c.boundary_map.assign(boundary.size(), -1);
        for (size_t fb = 0; fb < fibers.size(); ++fb)
            for (size_t k = 0; k < fibers[fb].size(); ++k)
                if (fibers[fb][k].kind == FiberElem::Kind::BoundarySlot)
                    c.boundary_map[static_cast<size_t>(fibers[fb][k].slot)] = class_id[fb][k];

        // Verify the square is a pushout: gluing L onto C along the
        // boundary must reproduce the host exactly.
        {
            const int off = L.n_vertices;
            UnionFind uf(off + c.context.graph.n_vertices);
            for (size_t slot = 0; slot < boundary.size(); ++slot)
                uf.unite(boundary[slot], off + c.boundary_map[slot]);
            // Each glued class must map to a single host vertex, and the
            // classes must biject with the host vertices.
            std::vector<int> class_to_host(static_cast<size_t>(off + c.context.graph.n_vertices), -1);
            auto host_of = [&](int p) { return p < off ? m.vertex_map[static_cast<size_t>(p)] : c.vertex_to_host[static_cast<size_t>(p - off)]; };
            std::set<int> reps;
            bool ok = true;
            for (int p = 0; p < off + c.context.graph.n_vertices && ok; ++p) {
                int r = uf.find(p);
                int hv = host_of(p);
                if (class_to_host[static_cast<size_t>(r)] < 0) {
                    class_to_host[static_cast<size_t>(r)] = hv;
                    reps.insert(r);
                } else if (class_to_host[static_cast<size_t>(r)] != hv) {
                    ok = false;
                }
            }
            if (!ok) return;
            // Injectivity: distinct classes, distinct host vertices.
            std::set<int> images;
            for (int r : reps)
                if (!images.insert(class_to_host[static_cast<size_t>(r)]).second) return;
            if (images.size() != static_cast<size_t>(G.n_vertices)) return;
        }

        // Anchor the host's outer interface; every choice of preimage is a
        // distinct complement.
        std::vector<std::vector<int>> options(outer.size());
        for (size_t s = 0; s < outer.size(); ++s) {
            int gv = outer[s];
            if (!v_matched[static_cast<size_t>(gv)]) {
                options[s] = {kept_id[static_cast<size_t>(gv)]};
            } else {
                int fb = fiber_of(gv);
                std::set<int> classes;
                for (size_t k = 0; k < fibers[static_cast<size_t>(fb)].size(); ++k)
                    classes.insert(class_id[static_cast<size_t>(fb)][k]);
                options[s].assign(classes.begin(), classes.end());
            }
        }
        std::vector<int> pick(outer.size(), 0);
        for (;;) {
            Complement full = c;
            for (size_t s = 0; s < outer.size(); ++s)
                full.interface_map.push_back(options[s][static_cast<size_t>(pick[s])]);
            out.push_back(std::move(full));
            if (out.size() > budget) throw budget_error("pushout_complements: complement budget exceeded");
            size_t s = 0;
            while (s < outer.size() && ++pick[s] == static_cast<int>(options[s].size())) {
                pick[s] = 0;
                ++s;
            }
            if (s == outer.size()) break;
        }
    };

    for (;;) {
        emit_candidate();
        size_t fb = 0;
        while (fb < fibers.size() && ++choice[fb] == fiber_partitions[fb].size()) {
            choice[fb] = 0;
            ++fb;
        }
        if (fb == fibers.size()) break;
    }
    return out;
}

namespace {

/// Monogamy without the closed-loop allowance: every vertex is connected
/// according to its interface membership.
ValidatorReport check_monogamous(const InterfacedHypergraph& c) {
    ValidatorReport r = check_partial_monogamous(c);
    if (!r.ok) return r;
    auto deg = degrees(c.graph);
    std::vector<char> interfaced(static_cast<size_t>(c.graph.n_vertices), 0);
    for (int v : c.inputs) interfaced[static_cast<size_t>(v)] = 1;
    for (int v : c.outputs) interfaced[static_cast<size_t>(v)] = 1;
    for (int v = 0; v < c.graph.n_vertices; ++v)
        if (!interfaced[static_cast<size_t>(v)] && deg[static_cast<size_t>(v)] == Degree{0, 0})
            return {false, "vertex " + std::to_string(v) + " is disconnected"};
    return r;
}

bool injective(const std::vector<int>& xs) {
    std::vector<int> s = xs;
    std::sort(s.begin(), s.end());
    return std::adjacent_find(s.begin(), s.end()) == s.end();
}

}  // namespace

std::vector<Complement> filter_boundary(const DpoRule& rule, const std::vector<Complement>& cs,
                                        int host_m, int host_n, RewriteMode mode) {
    std::vector<Complement> out;
    for (const auto& c : cs) {
        std::vector<int> c1(c.boundary_map.begin(), c.boundary_map.begin() + rule.i);
        std::vector<int> c2(c.boundary_map.begin() + rule.i, c.boundary_map.end());
        std::vector<int> d1(c.interface_map.begin(), c.interface_map.begin() + host_m);
        std::vector<int> d2(c.interface_map.begin() + host_m, c.interface_map.end());

        if (!injective(c2)) continue;
        if (mode != RewriteMode::TracedComonoid && !injective(c1)) continue;

        InterfacedHypergraph rotated;
        rotated.graph = c.context.graph;
        rotated.inputs = c2;
        rotated.inputs.insert(rotated.inputs.end(), d1.begin(), d1.end());
        rotated.outputs = d2;
        rotated.outputs.insert(rotated.outputs.end(), c1.begin(), c1.end());

        ValidatorReport rep;
        switch (mode) {
            case RewriteMode::Smc: rep = check_monogamous(rotated); break;
            case RewriteMode::Traced: rep = check_partial_monogamous(rotated); break;
            case RewriteMode::TracedComonoid: rep = check_partial_left_monogamous(rotated); break;
        }
        if (rep.ok) out.push_back(c);
    }
    return out;
}

InterfacedHypergraph rewrite(const DpoRule& rule, const Complement& c, int host_m, int host_n) {
    (void)host_n;
    // Glue the right side onto the context along the shared boundary,
    // phrased as a cospan composition.
    InterfacedHypergraph ctx;
    ctx.graph = c.context.graph;
    ctx.inputs = c.interface_map;
    ctx.outputs = c.boundary_map;

    InterfacedHypergraph rhs;
    rhs.graph = rule.right.graph;
    rhs.inputs = rule.right.outputs;

    InterfacedHypergraph glued = compose_cospans(ctx, rhs);
    InterfacedHypergraph out;
    out.graph = glued.graph;
    out.inputs = std::vector<int>(glued.inputs.begin(), glued.inputs.begin() + host_m);
    out.outputs = std::vector<int>(glued.inputs.begin() + host_m, glued.inputs.end());
    return out;
}

bool fork_rewrite_productive(const DpoRule& rule, const Matching& m,
                             const InterfacedHypergraph& folded_host) {
    // Shared boundary vertices mark the forking wire of the rule.
    const auto& boundary = rule.left.outputs;
    auto deg = degrees(folded_host.graph);
    for (size_t a = 0; a < boundary.size(); ++a)
        for (size_t b = a + 1; b < boundary.size(); ++b) {
            if (boundary[a] != boundary[b]) continue;
            int host_v = m.vertex_map[static_cast<size_t>(boundary[a])];
            int fanout = deg[static_cast<size_t>(host_v)].out_degree;
            for (int v : folded_host.outputs)
                if (v == host_v) ++fanout;
            if (fanout <= 1) return false;
        }
    return true;
}

std::vector<RewriteResult> rewrite_all(const DpoRule& rule, const InterfacedHypergraph& host,
                                       RewriteMode mode, size_t budget, bool keep_unproductive_forks) {
    InterfacedHypergraph folded = fold(host);
    std::vector<RewriteResult> out;
    for (const auto& m : find_matchings(rule, folded, budget * 10)) {
        if (!keep_unproductive_forks && !fork_rewrite_productive(rule, m, folded)) continue;
        std::vector<Complement> cs = pushout_complements(rule, m, folded, budget);
        for (const auto& c : filter_boundary(rule, cs, host.n_inputs(), host.n_outputs(), mode)) {
            RewriteResult r;
            r.match = m;
            r.complement = c;
            r.result = rewrite(rule, c, host.n_inputs(), host.n_outputs());
            out.push_back(std::move(r));
        }
    }
    return out;
}

bool verify_rule_sound(const TermPtr& l, const TermPtr& r, InterpPtr interp, size_t budget) {
    return bisimilar(circuit_to_mealy(l, interp), circuit_to_mealy(r, interp), budget);
}

std::vector<NamedRule> value_rule_bank(const Interpretation& i) {
    std::vector<NamedRule> out;
    const Lattice& l = i.lattice();
    const int base = l.size();
    for (int p = 0; p < i.signature().size(); ++p) {
        const Primitive& prim_sym = i.signature().prim(p);
        for (size_t w = 0; w < word_count(prim_sym.arity, base); ++w) {
            Word in = word_at(w, prim_sym.arity, base);
            NamedRule r;
            r.name = "value-" + prim_sym.name + "-" + show_word(l, in);
            r.left = compose(value_word(in), prim(i.signature(), prim_sym.name));
            r.right = value_word(i.apply(p, in));
            out.push_back(std::move(r));
        }
    }
    for (int v = 0; v < base; ++v) {
        NamedRule fork_rule;
        fork_rule.name = "value-fork-" + l.name(Value{v});
        fork_rule.left = compose(value_word({Value{v}}), fork());
        fork_rule.right = value_word({Value{v}, Value{v}});
        out.push_back(std::move(fork_rule));

        NamedRule elim_rule;
        elim_rule.name = "value-elim-" + l.name(Value{v});
        elim_rule.left = compose(value_word({Value{v}}), elim());
        elim_rule.right = identity(0);
        out.push_back(std::move(elim_rule));

        for (int u = 0; u < base; ++u) {
            NamedRule join_rule;
            join_rule.name = "value-join-" + l.name(Value{v}) + "-" + l.name(Value{u});
            join_rule.left = compose(value_word({Value{v}, Value{u}}), join_wires());
            join_rule.right = value_word({l.join(Value{v}, Value{u})});
            out.push_back(std::move(join_rule));
        }
    }
    return out;
}

std::vector<NamedRule> cartesian_rule_bank(const Signature& sig) {
    std::vector<NamedRule> out;
    for (int p = 0; p < sig.size(); ++p) {
        const Primitive& g = sig.prim(p);
        NamedRule copy_rule;
        copy_rule.name = "copy-" + g.name;
        copy_rule.left = compose(prim(sig, g.name), fork_n(g.coarity));
        copy_rule.right = compose(block_fork(g.arity, 2), tensor(prim(sig, g.name), prim(sig, g.name)));
        out.push_back(std::move(copy_rule));

        NamedRule discard_rule;
        discard_rule.name = "discard-" + g.name;
        discard_rule.left = compose(prim(sig, g.name), elim_n(g.coarity));
        discard_rule.right = elim_n(g.arity);
        out.push_back(std::move(discard_rule));
    }
    return out;
}

NamedRule streaming_rule(const TermPtr& combinational_core, const Word& now) {
    const int m = combinational_core->inputs;
    const int n = combinational_core->outputs;
    if (static_cast<int>(now.size()) != m)
        throw std::invalid_argument("streaming_rule: word width must match the core");
    NamedRule r;
    r.name = "streaming";
    r.left = compose(compose(tensor(value_word(now), delay(m)), join_n(m)), combinational_core);
    r.right = compose(tensor(compose(value_word(now), combinational_core),
                             compose(combinational_core, delay(n))),
                      join_n(n));
    return r;
}

InterfacedHypergraph graph_mealy_transform(const TermPtr& t) {
    PreMealyForm p = mealy_rule(global_trace_delay_form(t));
    InterfacedHypergraph c = term_to_cospan(p.to_term());
    // The register's delay edges are the chosen feedback wires.
    for (auto& e : c.graph.edges)
        if (e.label.kind == EdgeLabel::Kind::DelayE) e.marked = true;
    return c;
}

InterfacedHypergraph graph_instant_feedback(const TermPtr& t, const Interpretation& i) {
    MealyForm mf = to_mealy_form(t, i);
    InterfacedHypergraph c = term_to_cospan(mf.to_term());
    for (auto& e : c.graph.edges)
        if (e.label.kind == EdgeLabel::Kind::DelayE) e.marked = true;
    return c;
}

}  // namespace circ
