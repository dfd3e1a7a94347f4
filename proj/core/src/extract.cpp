#include <algorithm>
#include <stdexcept>

#include "circ/hypergraph.hpp"

namespace circ {

namespace {

TermPtr atom_for_label(const EdgeLabel& l) {
    switch (l.kind) {
        case EdgeLabel::Kind::Gate: return prim(l.name, l.arity, l.coarity);
        case EdgeLabel::Kind::DelayE: return delay(1);
        case EdgeLabel::Kind::ValueE: return value_word(l.letters);
        case EdgeLabel::Kind::WaveformE: return waveform(l.letters);
        case EdgeLabel::Kind::UncertainE: return uncertain(l.alternatives);
        case EdgeLabel::Kind::JoinE: return join_wires();
    }
    throw std::logic_error("unknown edge label");
}

}  // namespace

TermPtr extract_term(const InterfacedHypergraph& c, ExtractMode mode) {
    if (mode != ExtractMode::Frobenius) {
        ValidatorReport rep = mode == ExtractMode::Traced ? check_partial_monogamous(c)
                                                          : check_partial_left_monogamous(c);
        if (!rep.ok)
            throw std::invalid_argument("extract_term: cospan is outside the requested fragment (" +
                                        rep.detail + ")");
    }

    const auto& g = c.graph;
    const int nv = g.n_vertices;
    auto deg = degrees(g);
    std::vector<char> is_input(static_cast<size_t>(nv), 0);
    for (int v : c.inputs) is_input[static_cast<size_t>(v)] = 1;

    // Producer tentacles per vertex, in (edge, tentacle) order.
    std::vector<std::vector<std::pair<size_t, size_t>>> producers(static_cast<size_t>(nv));
    for (size_t e = 0; e < g.edges.size(); ++e)
        for (size_t k = 0; k < g.edges[e].targets.size(); ++k)
            producers[static_cast<size_t>(g.edges[e].targets[k])].push_back({e, k});

    // Schedule the edges, cutting a feedback vertex whenever nothing is
    // emittable; source-free non-input vertices are loops in the traced
    // fragments and bottom sources otherwise.
    std::vector<char> feedback(static_cast<size_t>(nv), 0);
    std::vector<char> intro_v(static_cast<size_t>(nv), 0);
    for (int v = 0; v < nv; ++v)
        if (deg[static_cast<size_t>(v)].in_degree == 0 && !is_input[static_cast<size_t>(v)]) {
            if (mode == ExtractMode::Frobenius)
                intro_v[static_cast<size_t>(v)] = 1;
            else
                feedback[static_cast<size_t>(v)] = 1;
        }

    std::vector<size_t> emission_order;
    {
        std::vector<char> avail(static_cast<size_t>(nv), 0);
        std::vector<int> produced(static_cast<size_t>(nv), 0);
        for (int v = 0; v < nv; ++v)
            avail[static_cast<size_t>(v)] =
                is_input[static_cast<size_t>(v)] || feedback[static_cast<size_t>(v)] || intro_v[static_cast<size_t>(v)];
        std::vector<char> emitted(g.edges.size(), 0);
        size_t remaining = g.edges.size();
        while (remaining > 0) {
            bool progress = false;
            for (size_t e = 0; e < g.edges.size(); ++e) {
                if (emitted[e]) continue;
                bool ready = true;
                for (int s : g.edges[e].sources)
                    if (!avail[static_cast<size_t>(s)]) ready = false;
                if (!ready) continue;
                emitted[e] = 1;
                emission_order.push_back(e);
                --remaining;
                progress = true;
                for (int tv : g.edges[e].targets) {
                    ++produced[static_cast<size_t>(tv)];
                    if (!feedback[static_cast<size_t>(tv)] &&
                        produced[static_cast<size_t>(tv)] ==
                            static_cast<int>(producers[static_cast<size_t>(tv)].size()))
                        avail[static_cast<size_t>(tv)] = 1;
                }
            }
            if (!progress) {
                for (size_t e = 0; e < g.edges.size() && !progress; ++e) {
                    if (emitted[e]) continue;
                    for (int s : g.edges[e].sources) {
                        if (!avail[static_cast<size_t>(s)]) {
                            feedback[static_cast<size_t>(s)] = 1;
                            avail[static_cast<size_t>(s)] = 1;
                            progress = true;
                            break;
                        }
                    }
                }
                if (!progress) throw std::logic_error("extract_term: scheduling got stuck");
            }
        }
    }

    // Wire assignment. Feedback vertices read from the trace; everything
    // else is the (joined) output of its producers.
    int n_wires = 0;
    auto fresh = [&]() { return n_wires++; };
    std::vector<int> value_wire(static_cast<size_t>(nv), -1);

    std::vector<int> loop_vertices;
    for (int v = 0; v < nv; ++v)
        if (feedback[static_cast<size_t>(v)]) loop_vertices.push_back(v);

    std::vector<int> body_inputs;
    for (int v : loop_vertices) {
        value_wire[static_cast<size_t>(v)] = fresh();
        body_inputs.push_back(value_wire[static_cast<size_t>(v)]);
    }
    for (int v : c.inputs) {
        value_wire[static_cast<size_t>(v)] = fresh();
        body_inputs.push_back(value_wire[static_cast<size_t>(v)]);
    }

    std::vector<DataflowPiece> pieces;
    for (int v = 0; v < nv; ++v)
        if (intro_v[static_cast<size_t>(v)]) {
            DataflowPiece p;
            p.atom = intro();
            p.outs = {fresh()};
            value_wire[static_cast<size_t>(v)] = p.outs[0];
            pieces.push_back(std::move(p));
        }

    // Tentacle wires per (edge, tentacle).
    std::vector<std::vector<int>> tentacle_wire(g.edges.size());
    for (size_t e = 0; e < g.edges.size(); ++e) tentacle_wire[e].assign(g.edges[e].targets.size(), -1);

    std::vector<int> produced(static_cast<size_t>(nv), 0);
    auto finish_vertex = [&](int v) {
        // All producers have run; join their tentacles into the value wire.
        const auto& prods = producers[static_cast<size_t>(v)];
        int acc = tentacle_wire[prods[0].first][prods[0].second];
        for (size_t k = 1; k < prods.size(); ++k) {
            DataflowPiece p;
            p.atom = join_wires();
            p.ins = {acc, tentacle_wire[prods[k].first][prods[k].second]};
            p.outs = {fresh()};
            acc = p.outs[0];
            pieces.push_back(std::move(p));
        }
        return acc;
    };

    std::vector<int> loop_returns(loop_vertices.size(), -1);
    for (size_t e : emission_order) {
        DataflowPiece p;
        p.atom = atom_for_label(g.edges[e].label);
        for (int s : g.edges[e].sources) p.ins.push_back(value_wire[static_cast<size_t>(s)]);
        for (size_t k = 0; k < g.edges[e].targets.size(); ++k) {
            tentacle_wire[e][k] = fresh();
            p.outs.push_back(tentacle_wire[e][k]);
        }
        pieces.push_back(std::move(p));
        for (int tv : g.edges[e].targets) {
            ++produced[static_cast<size_t>(tv)];
            if (produced[static_cast<size_t>(tv)] ==
                static_cast<int>(producers[static_cast<size_t>(tv)].size())) {
                int joined = finish_vertex(tv);
                if (feedback[static_cast<size_t>(tv)]) {
                    for (size_t k = 0; k < loop_vertices.size(); ++k)
                        if (loop_vertices[k] == tv) loop_returns[k] = joined;
                } else {
                    value_wire[static_cast<size_t>(tv)] = joined;
                }
            }
        }
    }
    for (size_t k = 0; k < loop_vertices.size(); ++k)
        if (loop_returns[k] < 0)  // a loop with no producers returns itself
            loop_returns[k] = value_wire[static_cast<size_t>(loop_vertices[k])];

    std::vector<int> body_outputs;
    for (int w : loop_returns) body_outputs.push_back(w);
    for (int v : c.outputs) body_outputs.push_back(value_wire[static_cast<size_t>(v)]);

    TermPtr body = assemble_term(pieces, body_inputs, body_outputs, n_wires);
    return trace(static_cast<int>(loop_vertices.size()), body);
}

}  // namespace circ
