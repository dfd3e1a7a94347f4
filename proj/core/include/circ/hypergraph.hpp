#ifndef CIRC_HYPERGRAPH_HPP
#define CIRC_HYPERGRAPH_HPP

#include <optional>
#include <string>
#include <vector>

#include "circ/circuit.hpp"

namespace circ {

/// Hyperedge labels. Gates carry their name and wire counts; the wire
/// bookkeeping generators of circuit terms (fork, join, ...) dissolve into
/// vertices and never appear as edges, but delays, values and the extended
/// partial-evaluation nodes do. JoinE marks an explicit join edge used by
/// the partial evaluator's wire-sharing representation.
struct EdgeLabel {
    enum class Kind { Gate, DelayE, ValueE, WaveformE, UncertainE, JoinE };
    Kind kind = Kind::Gate;
    std::string name;                // Gate
    int arity = 0, coarity = 0;
    Word letters;                    // ValueE / WaveformE (one output per letter)
    std::vector<Word> alternatives;  // UncertainE

    static EdgeLabel gate(const std::string& n, int a, int c);
    static EdgeLabel delay_edge();
    static EdgeLabel value_edge(Value v);
    static EdgeLabel waveform_edge(Value v);
    static EdgeLabel uncertain_edge(std::vector<Word> alts);
    static EdgeLabel join_edge();

    bool operator==(const EdgeLabel& o) const;
    std::string display(const Lattice* l = nullptr) const;
};

struct Hyperedge {
    EdgeLabel label;
    std::vector<int> sources;
    std::vector<int> targets;
    bool marked = false;  // optional annotation for chosen feedback wires
};

struct Hypergraph {
    int n_vertices = 0;
    std::vector<Hyperedge> edges;
};

/// A hypergraph with ordered input and output vertex lists. Interface
/// lists may repeat or omit vertices; the fragment validators decide what
/// is representable.
struct InterfacedHypergraph {
    Hypergraph graph;
    std::vector<int> inputs;
    std::vector<int> outputs;

    int n_inputs() const { return static_cast<int>(inputs.size()); }
    int n_outputs() const { return static_cast<int>(outputs.size()); }
};

struct Degree {
    int in_degree = 0;
    int out_degree = 0;
    bool operator==(const Degree& o) const { return in_degree == o.in_degree && out_degree == o.out_degree; }
};

Degree degree(const Hypergraph& g, int v);
std::vector<Degree> degrees(const Hypergraph& g);

/// Translate a term to its cospan. Structural generators share vertices,
/// so arbitrary circuit terms land in the unrestricted cospan category.
InterfacedHypergraph term_to_cospan(const TermPtr& t);

struct ValidatorReport {
    bool ok = true;
    std::string detail;  // names the first offending vertex or interface
};

/// Inputs and outputs injective, every vertex of degree (0,0) or (1,1)
/// with interface vertices losing the corresponding connection.
ValidatorReport check_partial_monogamous(const InterfacedHypergraph& c);
/// As above plus no cycles; isolated non-interface vertices are also ruled out.
ValidatorReport check_monogamous_acyclic(const InterfacedHypergraph& c);
/// Only the input map is injective; in-degrees at most one (zero on input
/// vertices); out-degrees unrestricted.
ValidatorReport check_partial_left_monogamous(const InterfacedHypergraph& c);

bool has_cycle(const Hypergraph& g);

InterfacedHypergraph compose_cospans(const InterfacedHypergraph& a, const InterfacedHypergraph& b);
InterfacedHypergraph tensor_cospans(const InterfacedHypergraph& a, const InterfacedHypergraph& b);
/// Merge the first x input vertices with the first x output vertices.
InterfacedHypergraph trace_cospan(int x, const InterfacedHypergraph& c);
/// Identify the given vertex pairs and renumber densely.
InterfacedHypergraph merge_vertices(const InterfacedHypergraph& c,
                                    const std::vector<std::pair<int, int>>& pairs);

struct CospanIso {
    std::vector<int> vertex_map;  // a-vertex -> b-vertex
    std::vector<int> edge_map;
};

/// Interface-, label- and incidence-preserving bijection, or nothing.
std::optional<CospanIso> cospan_iso(const InterfacedHypergraph& a, const InterfacedHypergraph& b,
                                    size_t budget = 1000000);

enum class ExtractMode { Traced, TracedComonoid, Frobenius };

/// Rebuild a term whose cospan is isomorphic to the given one. Traced mode
/// requires partial monogamy and emits only permutations in the wiring;
/// comonoid mode also emits forks and eliminators; the unrestricted mode
/// accepts any cospan and may emit joins and bottom sources as well.
TermPtr extract_term(const InterfacedHypergraph& c, ExtractMode mode);

/// Graphviz rendering: vertices as points, hyperedges as boxes with ordered
/// ports, interfaces as numbered external nodes.
std::string to_dot(const InterfacedHypergraph& c, const Lattice* l = nullptr);

}  // namespace circ

#endif
