#ifndef CIRC_MEALY_HPP
#define CIRC_MEALY_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "circ/circuit.hpp"
#include "circ/compile.hpp"

namespace circ {

/// A finite prefix of an input or output stream.
struct Waveform {
    int width = 0;
    std::vector<Word> values;

    size_t length() const { return values.size(); }
    void push(Word w);
};

/// An initialised Mealy machine over words of lattice values. State spaces
/// may be lazily materialized (register-word machines are exponential in
/// the number of registers), so states are opaque ids interned on demand.
///
/// Machines may carry a partial order on states; monotonicity is the
/// caller's obligation and is checked only where an operation depends on
/// it (the traced step detects non-monotone machines by divergence).
class MealyMachine {
public:
    using State = uint32_t;

    struct Impl;

    int input_width() const;
    int output_width() const;
    const Lattice& lattice() const;
    LatticePtr lattice_ptr() const;
    State initial() const;
    std::pair<State, Word> step(State s, const Word& input) const;
    std::string state_name(State s) const;

    bool has_order() const;
    bool state_leq(State a, State b) const;

    /// Number of states materialized so far; for table machines this is the
    /// total state count.
    size_t state_count() const;
    bool is_table() const;

    explicit MealyMachine(std::shared_ptr<Impl> impl) : impl_(std::move(impl)) {}
    const std::shared_ptr<Impl>& impl() const { return impl_; }

private:
    std::shared_ptr<Impl> impl_;
};

/// An explicit machine given by transition rows. Row (s, input index) holds
/// the successor and output word. `order` may be empty (no order known).
struct MealyTable {
    LatticePtr lattice;
    int input_width = 0;
    int output_width = 0;
    std::vector<std::string> state_names;
    std::vector<std::vector<std::pair<uint32_t, Word>>> rows;  // [state][input index]
    uint32_t initial = 0;
    std::vector<char> order;  // row-major state x state, empty if unknown

    MealyMachine machine() const;
};

/// Denotational semantics of a term: the register-word machine whose step
/// solves all feedback wires as a least fixed point.
MealyMachine circuit_to_mealy(const TermPtr& t, InterpPtr interp);

/// Composition in sequence: the second machine consumes the first machine's
/// output within the same tick. State space is the product.
MealyMachine cascade(const MealyMachine& m1, const MealyMachine& m2);

/// Parallel composition: widths add, components step independently.
MealyMachine direct(const MealyMachine& m1, const MealyMachine& m2);

/// Feed the first x outputs back into the first x inputs, solving them per
/// step by iteration from bottom.
MealyMachine mealy_trace(const MealyMachine& m, int x);

struct ReachableResult {
    MealyTable table;
    std::vector<MealyMachine::State> source_states;  // table state -> source state
};

/// Restrict to the states reachable from the initial state, exploring
/// inputs in lexicographic value order. `budget` caps explored states.
ReachableResult reachable(const MealyMachine& m, size_t budget = 100000);

/// Quotient the reachable states by output-and-transition bisimilarity.
MealyTable minimize(const MealyMachine& m, size_t budget = 100000);

/// Largest-bisimulation check on the initial states. Throws budget_error
/// when more than `budget` state pairs would be explored.
bool bisimilar(const MealyMachine& m1, const MealyMachine& m2, size_t budget = 1000000);

/// Like bisimilar, but reports a distinguishing input sequence on failure.
std::optional<std::vector<Word>> bisimulation_witness(const MealyMachine& m1, const MealyMachine& m2,
                                                      size_t budget = 1000000);

Waveform run(const MealyMachine& m, const Waveform& w);

MealyMachine table_machine(MealyTable table);

}  // namespace circ

#endif
