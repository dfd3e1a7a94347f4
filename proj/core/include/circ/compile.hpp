#ifndef CIRC_COMPILE_HPP
#define CIRC_COMPILE_HPP

#include <utility>
#include <vector>

#include "circ/circuit.hpp"

namespace circ {

/// A circuit term flattened into an evaluable netlist: combinational ops in
/// dependency order, registers (one per delay wire and per value letter),
/// and feedback wires solved per step by iteration from bottom.
///
/// The state of the compiled circuit is the word of register contents,
/// delay registers first, then value registers, each block in traversal
/// order. Delay registers start at bottom and latch their input; value
/// registers start at their letter and are fed bottom forever.
class Compiled {
public:
    struct Op {
        enum class Kind { Gate, Join2, Const };
        Kind kind;
        int prim = -1;    // Gate
        Word cval;        // Const
        std::vector<int> ins;
        std::vector<int> outs;
    };
    struct Reg {
        int out_wire = -1;
        int in_wire = -1;  // -1 for value registers (fed bottom)
        Value init;
    };

    InterpPtr interp;
    int n_inputs = 0;
    int n_outputs = 0;
    int n_wires = 0;
    std::vector<Op> ops;
    std::vector<int> input_wires;
    std::vector<int> output_wires;
    std::vector<Reg> regs;
    std::vector<std::pair<int, int>> feedback;  // (read wire, produced wire)

    Word initial_state() const;
    int state_width() const { return static_cast<int>(regs.size()); }
    int feedback_width() const { return static_cast<int>(feedback.size()); }

    /// One synchronous step: solve feedback wires by iteration from bottom,
    /// then read outputs and next register contents. Throws std::logic_error
    /// if the iteration fails to converge within the lattice bound (which
    /// signals a non-monotone primitive).
    std::pair<Word, Word> step(const Word& state, const Word& input) const;  // (next state, outputs)

    /// Evaluate all wires at the fixpoint for the given state and input.
    /// Exposed for diagnostics.
    std::vector<Value> wire_values(const Word& state, const Word& input) const;
};

/// Flatten a term. Throws on unknown primitives or extended (waveform /
/// uncertain) nodes; waveforms are accepted and become constant ops.
Compiled compile(const TermPtr& t, InterpPtr interp);

}  // namespace circ

#endif
