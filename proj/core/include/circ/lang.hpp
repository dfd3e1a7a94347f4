#ifndef CIRC_LANG_HPP
#define CIRC_LANG_HPP

#include <map>
#include <string>
#include <vector>

#include "circ/circuit.hpp"
#include "circ/parteval.hpp"

namespace circ {

/// A parse or elaboration failure, annotated with its source position.
struct parse_error : std::runtime_error {
    int line, column;
    parse_error(const std::string& msg, int l, int c)
        : std::runtime_error(msg + " at " + std::to_string(l) + ":" + std::to_string(c)),
          line(l),
          column(c) {}
};

/// One elaborated circuit definition.
struct CircuitDef {
    std::string name;
    std::vector<std::string> input_names;
    std::vector<std::string> output_names;
    TermPtr term;
};

/// Parse a circuit-language file. Circuits may call earlier circuits in the
/// same file; wires must be defined before use except declared feedback
/// wires, which are bound exactly once later.
std::vector<CircuitDef> parse_circuits(const std::string& source, const Interpretation& interp);

/// Find one circuit by name (the last definition when absent picks the
/// final circuit of the file).
CircuitDef parse_circuit(const std::string& source, const Interpretation& interp,
                         const std::string& name = "");

/// Render a term back into circuit-language source. Feedback wires are
/// introduced wherever the wiring is cyclic.
std::string print_circuit(const TermPtr& t, const std::string& name, const Interpretation& interp);

}  // namespace circ

#endif
