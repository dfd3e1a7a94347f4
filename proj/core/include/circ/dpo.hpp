#ifndef CIRC_DPO_HPP
#define CIRC_DPO_HPP

#include <string>
#include <vector>

#include "circ/hypergraph.hpp"
#include "circ/mealy.hpp"

namespace circ {

/// A rewrite rule as a span of folded cospans: both sides share the same
/// boundary of i + j vertices, positionally.
struct DpoRule {
    InterfacedHypergraph left;   // inputs empty, outputs = boundary
    InterfacedHypergraph right;  // likewise
    int i = 0, j = 0;

    int boundary_size() const { return i + j; }
};

/// Move a cospan's inputs onto the output side: m -> F <- n becomes
/// 0 -> F <- m+n. The graph itself is untouched.
InterfacedHypergraph fold(const InterfacedHypergraph& c);
/// Undo fold, splitting the single boundary back into m inputs.
InterfacedHypergraph unfold(const InterfacedHypergraph& c, int m);

DpoRule make_rule(const TermPtr& l, const TermPtr& r);

/// A label-preserving homomorphism from a rule's left side into a host
/// graph. Neither map need be injective.
struct Matching {
    std::vector<int> vertex_map;
    std::vector<int> edge_map;
};

/// All matchings of the rule's left side into the folded host, enumerated
/// deterministically (edges in insertion order, candidates in host order).
std::vector<Matching> find_matchings(const DpoRule& rule, const InterfacedHypergraph& host,
                                     size_t budget = 100000);

/// A context completing the double pushout: the host minus the matched
/// pattern, with a boundary map for the rule interface and an anchoring of
/// the host's outer interface.
struct Complement {
    InterfacedHypergraph context;       // interfaces unused; maps below
    std::vector<int> boundary_map;      // rule boundary slot -> context vertex
    std::vector<int> interface_map;     // host outer slot -> context vertex
    std::vector<int> vertex_to_host;    // context vertex -> host vertex
    std::vector<int> edge_to_host;      // context edge -> host edge
};

/// Enumerate every pushout complement for the matching: candidates come
/// from per-fiber quotients of the exploded context and every anchoring of
/// the host interface, and each one is re-verified as a genuine pushout.
/// Returns an empty list when the no-dangling or no-identification
/// condition fails.
std::vector<Complement> pushout_complements(const DpoRule& rule, const Matching& m,
                                            const InterfacedHypergraph& folded_host,
                                            size_t budget = 10000);

enum class RewriteMode { Smc, Traced, TracedComonoid };

/// Keep the complements whose rotated interface cospan lies in the chosen
/// fragment.
std::vector<Complement> filter_boundary(const DpoRule& rule, const std::vector<Complement>& cs,
                                        int host_m, int host_n, RewriteMode mode);

/// Glue the rule's right side into the context; the result is an m -> n
/// cospan over the host's outer interface.
InterfacedHypergraph rewrite(const DpoRule& rule, const Complement& c, int host_m, int host_n);

struct RewriteResult {
    Matching match;
    Complement complement;
    InterfacedHypergraph result;
};

/// A fork-shaped rule (one whose left boundary repeats a vertex) only makes
/// progress when the matched shared vertex actually fans out; applying it
/// elsewhere merely shuffles counit structure. True when the matching is
/// worth pursuing.
bool fork_rewrite_productive(const DpoRule& rule, const Matching& m,
                             const InterfacedHypergraph& folded_host);

/// Full driver: fold the host, enumerate matchings and complements, filter
/// by mode, and rewrite each survivor. Unproductive fork matchings are
/// skipped unless `keep_unproductive_forks` is set.
std::vector<RewriteResult> rewrite_all(const DpoRule& rule, const InterfacedHypergraph& host,
                                       RewriteMode mode, size_t budget = 10000,
                                       bool keep_unproductive_forks = false);

/// Semantic soundness of a rule pair: both sides denote the same machine.
bool verify_rule_sound(const TermPtr& l, const TermPtr& r, InterpPtr interp, size_t budget = 1000000);

struct NamedRule {
    std::string name;
    TermPtr left, right;
};

/// Local value-propagation rules as graph rewrites: a value word into each
/// gate, plus the fork, join and eliminator cases per value.
std::vector<NamedRule> value_rule_bank(const Interpretation& i);

/// Copy and discard rules for each primitive of the signature.
std::vector<NamedRule> cartesian_rule_bank(const Signature& sig);

/// The streaming schema instantiated for a combinational core and a word:
/// pushing the core across a register splits it into a copy for the
/// current tick and a delayed copy for the rest.
NamedRule streaming_rule(const TermPtr& combinational_core, const Word& now);

/// Whole-graph register-forming and loop-unrolling transformations. The
/// chosen feedback wires are communicated through the `marked` edge
/// annotation: both functions mark the delay edges of the register they
/// produce or consume.
InterfacedHypergraph graph_mealy_transform(const TermPtr& t);
InterfacedHypergraph graph_instant_feedback(const TermPtr& t, const Interpretation& i);

}  // namespace circ

#endif
