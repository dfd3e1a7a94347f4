#ifndef CIRC_SYNTH_HPP
#define CIRC_SYNTH_HPP

#include <functional>
#include <vector>

#include "circ/circuit.hpp"
#include "circ/mealy.hpp"

namespace circ {

/// A total function on value words, tabulated row by row in lexicographic
/// input order.
struct TruthTable {
    LatticePtr lattice;
    int inputs = 0;
    int outputs = 0;
    std::vector<Word> rows;  // indexed by word_index of the input

    const Word& at(const Word& in) const { return rows.at(word_index(in, lattice->size())); }
    bool is_monotone() const;
};

/// Tabulate a Mealy machine step, a combinational term, or any word function.
TruthTable tabulate(const LatticePtr& l, int inputs, int outputs,
                    const std::function<Word(const Word&)>& f);

/// The order-respecting state code: state s maps to the word whose i-th
/// letter is top iff the i-th state in the chosen total order lies below s.
struct Encoding {
    std::vector<uint32_t> order;  // states, in the chosen total order
    std::vector<Word> code;       // per state id (indexed like the machine's table)
    int width() const { return static_cast<int>(order.size()); }
};

/// Build the encoding for an explicitly tabulated machine's states.
/// `total_order` lists the state ids; the machine's partial order supplies
/// the below-relation. Requires the lattice to have a greatest element.
Encoding encoding(const MealyTable& states, const std::vector<uint32_t>& total_order);

/// Total order on reachable states by length-then-lexicographic minimal
/// access word. `value_order` permutes value indices (defaults to index
/// order when empty).
std::vector<uint32_t> chosen_state_order(const MealyTable& reachable_table,
                                         const std::vector<int>& value_order = {});

/// Least monotone extension of a partial monotone map on a finite poset.
/// Elements are indices 0..size-1; `defined[i]` marks the partial domain.
/// C-values are abstract: supply join, bottom and (for the result check) leq.
template <typename C>
std::vector<C> monotone_completion(int size,
                                   const std::function<bool(int, int)>& leq_b,
                                   const std::vector<bool>& defined,
                                   const std::vector<C>& partial,
                                   const std::function<C(const C&, const C&)>& join_c,
                                   const C& bottom_c,
                                   const std::function<bool(const C&, const C&)>& leq_c);

/// Encode a machine's step function as a total monotone table over
/// code-words and inputs, filling the gaps by monotone completion.
TruthTable mealy_encoding(const MealyTable& m, const Encoding& enc);

/// Synthesize a single-output monotone table over the four-valued
/// interpretation as a term built from gates, constants and joins.
TermPtr belnap_express(const TruthTable& f);

/// Multi-output synthesis: one expression per output behind a shared fork.
TermPtr normalised_circuit(const TruthTable& f);

/// Full machine-to-circuit synthesis; the result is bisimilar to the
/// machine it came from.
TermPtr mealy_to_circuit(const MealyMachine& m, const std::vector<int>& value_order = {},
                         size_t budget = 100000);

/// Gate expressions for the four input translators used by the synthesizer,
/// found by bounded search over small gate terms and verified against the
/// fixed tables. Index: 0 = falsy-of-value, 1 = falsy-of-negation,
/// 2 = truthy-of-negation, 3 = truthy-of-value.
const std::vector<TermPtr>& translator_terms();

/// The fixed translator tables (four entries each, indexed by value).
extern const Value kTranslatorTable[4][4];

}  // namespace circ

#endif
