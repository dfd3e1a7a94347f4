#ifndef CIRC_PARTEVAL_HPP
#define CIRC_PARTEVAL_HPP

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "circ/hypergraph.hpp"

namespace circ {

/// A wire-sharing view of an extended term used by the rewrite driver:
/// gates, delays, joins and (possibly uncertain) constant sources are
/// hyperedges; forked wires are shared vertices. Every vertex has at most
/// one producer.
struct Net {
    InterfacedHypergraph graph;

    /// Number of worlds the uncertain sources range over (1 when none).
    int worlds() const;
};

Net term_to_net(const TermPtr& t);
TermPtr net_to_term(const Net& n);

/// Remove structure that cannot reach any output, including feedback loops
/// that feed nothing.
TermPtr tidy(const TermPtr& t);

/// Push held constants through gates, joins and bottom-fed delays.
TermPtr propagate_waveforms(const TermPtr& t, const Interpretation& i);

/// The four-valued dominance rules: a held false absorbs a conjunction, a
/// held true absorbs a disjunction, and the opposite constants vanish.
TermPtr apply_shortcuts(const TermPtr& t, const Interpretation& i);

/// Push uncertain constants through gates world by world, collapsing them
/// to plain constants when every world agrees.
TermPtr propagate_uncertain(const TermPtr& t, const Interpretation& i);

/// A binding for one input wire: either a held constant or a set of
/// alternative held values selected by the shared world index.
using Binding = std::variant<Value, std::vector<Value>>;

struct PartialEvalResult {
    TermPtr term;
    bool complete = true;  // false when the step budget ran out
};

/// Bind the given input wires and run the rewrite families to a joint
/// fixpoint. Bound wires disappear from the input interface.
PartialEvalResult partial_evaluate(const TermPtr& t, const std::map<int, Binding>& bindings,
                                   const Interpretation& i, size_t step_budget = 10000);

/// Replace every uncertain source by its value in the given world; used by
/// the per-alternative soundness oracle and the evaluator.
TermPtr fix_world(const TermPtr& t, int world);

/// Number of worlds an extended term ranges over.
int term_worlds(const TermPtr& t);

}  // namespace circ

#endif
