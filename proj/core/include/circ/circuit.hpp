#ifndef CIRC_CIRCUIT_HPP
#define CIRC_CIRCUIT_HPP

#include <memory>
#include <string>
#include <vector>

#include "circ/interp.hpp"

namespace circ {

/// Node kinds of the circuit term IR. Terms are immutable trees; sharing
/// subterms is safe and encouraged.
///
/// Waveform and Uncertain extend the plain circuit syntax for partial
/// evaluation: a Waveform holds its value on every cycle, an Uncertain
/// value is one of several words selected by a hidden world index shared
/// by all Uncertain nodes of a term.
enum class TermKind {
    Primitive,
    Id,
    Symmetry,
    Fork,
    Join,
    Intro,
    Elim,
    Value,     // instantaneous value word: emits its letters once, then bottom
    Delay,
    Seq,
    Par,
    Trace,
    Waveform,  // constant value word held forever
    Uncertain, // one constant word per world
};

class Term;
using TermPtr = std::shared_ptr<const Term>;

/// A circuit term with cached wire counts. Use the free functions below to
/// build terms; they check arities and flatten nested compositions.
class Term {
public:
    TermKind kind;
    int inputs = 0;
    int outputs = 0;

    // Primitive
    std::string prim_name;
    // Id / Delay widths and Symmetry(m, n) use these:
    int m = 0, n = 0;
    // Value / Waveform letters; Uncertain holds one word per world.
    Word letters;
    std::vector<Word> alternatives;
    // Seq / Par children; Trace body is children[0].
    std::vector<TermPtr> children;
    // Trace width
    int trace_width = 0;

    static TermPtr make(Term t) { return std::make_shared<const Term>(std::move(t)); }
};

// ----- constructors ---------------------------------------------------------

TermPtr prim(const std::string& name, int arity, int coarity);
TermPtr prim(const Signature& sig, const std::string& name);
TermPtr identity(int n);
TermPtr symmetry(int m, int n);
TermPtr fork();
TermPtr join_wires();
TermPtr intro();
TermPtr elim();
TermPtr value_word(Word letters);
TermPtr delay(int n);
/// f then g; throws on arity mismatch, flattens nested sequences.
TermPtr compose(TermPtr f, TermPtr g);
TermPtr tensor(TermPtr f, TermPtr g);
/// Feed the first x outputs of f back into its first x inputs.
TermPtr trace(int x, TermPtr f);
TermPtr waveform(Word letters);
TermPtr uncertain(std::vector<Word> alternatives);

// ----- derived constructions -------------------------------------------------

/// Wide fork/join/elim/intro on n wires, defined wire-by-wire.
TermPtr fork_n(int n);
TermPtr join_n(int n);
TermPtr elim_n(int n);
TermPtr intro_n(int n);
/// A term realizing the permutation p (output j reads input p[j]).
TermPtr perm_term(const std::vector<int>& p);
/// Delay with an initial value: emits the word once, then previous inputs.
TermPtr register_term(const Word& initial);
/// Constant emitter: holds each letter of the word forever, built as a
/// self-feeding register.
TermPtr constant_term(const Word& w);
/// Fork a block of n wires into k copies (n -> k*n).
TermPtr block_fork(int n, int k);

// ----- queries ---------------------------------------------------------------

struct TermStats {
    int delay_count = 0;       // delay wires, summed over widths
    int value_count = 0;       // value letters, summed over words
    int gate_count = 0;        // primitive nodes
    bool is_combinational = true;
    bool is_extended = false;  // contains Waveform or Uncertain nodes
};

TermStats stats(const TermPtr& t);

/// Replace every Primitive node with the given name by a term of matching
/// arity. Throws on arity mismatch.
TermPtr substitute(const TermPtr& t, const std::string& name, const TermPtr& replacement);

/// Recompute wire counts by traversal, ignoring the cached values.
/// Used by property tests.
std::pair<int, int> recompute_arity(const TermPtr& t);

/// Evaluate a combinational term as a function on value words.
/// Throws if the term is not combinational (or contains extended nodes).
Word eval_combinational(const TermPtr& t, const Interpretation& i, const Word& input);

/// A dataflow node for assemble_term: an atom with named wires.
struct DataflowPiece {
    TermPtr atom;
    std::vector<int> ins;
    std::vector<int> outs;
};

/// Linearize dataflow pieces into a term. Pieces must be ordered so wires
/// are produced before use; wires used repeatedly are forked and unused
/// wires eliminated. Body inputs and outputs are wire lists.
TermPtr assemble_term(const std::vector<DataflowPiece>& pieces, const std::vector<int>& body_inputs,
                      const std::vector<int>& body_outputs, int n_wires);

std::string show_term(const TermPtr& t, const Lattice* l = nullptr);

}  // namespace circ

#endif
