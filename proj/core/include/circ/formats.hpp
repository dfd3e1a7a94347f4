#ifndef CIRC_FORMATS_HPP
#define CIRC_FORMATS_HPP

#include <string>
#include <vector>

#include "circ/lang.hpp"
#include "circ/mealy.hpp"
#include "circ/synth.hpp"

namespace circ {

/// Waveform files are CSV with a version comment and a header row naming
/// the wires; column order defines wire order.
std::string write_waveform_csv(const Waveform& w, const Lattice& l,
                               const std::vector<std::string>& wire_names = {});
Waveform read_waveform_csv(const std::string& text, const Lattice& l);

/// Machines serialize as JSON: widths, value names, state names, the order
/// relation as pairs, the initial state, and one transition row per
/// (state, input word).
std::string write_mealy_json(const MealyTable& t);
MealyTable read_mealy_json(const std::string& text, LatticePtr lattice_hint = nullptr);

/// Truth tables are CSV rows in lexicographic input order.
std::string write_table_csv(const TruthTable& t);
TruthTable read_table_csv(const std::string& text, const LatticePtr& l);

/// Rule files hold two circuit definitions named `left` and `right` with
/// the same arity.
struct RuleFile {
    std::string name;
    TermPtr left, right;
};
RuleFile read_rule_file(const std::string& text, const Interpretation& interp);

/// Interpretation description: value names in order, the order relation as
/// pairs of names, and one row-major output table per primitive.
InterpPtr read_interpretation_json(const std::string& text);
std::string write_interpretation_json(const Interpretation& i);

}  // namespace circ

#endif
