#ifndef CIRC_OPSEM_HPP
#define CIRC_OPSEM_HPP

#include <optional>
#include <vector>

#include "circ/circuit.hpp"
#include "circ/mealy.hpp"

namespace circ {

/// A circuit rearranged so that every loop passes through one outer trace:
/// bare feedback wires first, then delay-guarded wires, with instantaneous
/// values pulled out as sources. The core is combinational with inputs
/// [bare | delays | values | m] and outputs [bare | delays | n].
struct GlobalTraceDelayForm {
    int bare_width = 0;   // feedback wires with no delay on them
    int delay_width = 0;  // feedback wires guarded by a delay
    int value_width = 0;
    Word values;
    int m = 0, n = 0;
    TermPtr core;

    int trace_width() const { return bare_width + delay_width; }
    /// Reassemble into a term equal to the one this form came from.
    TermPtr to_term() const;
};

/// After the register-forming step: delays and values fused into one
/// register word. Core inputs [bare | state | m], outputs [bare | state | n].
struct PreMealyForm {
    int bare_width = 0;
    Word state;  // bottoms for former delays, then the value letters
    int m = 0, n = 0;
    TermPtr core;

    int trace_width() const { return bare_width + static_cast<int>(state.size()); }
    TermPtr to_term() const;
};

/// Register word feeding a trace-free combinational core; the first outputs
/// of the core loop back through the register.
struct MealyForm {
    Word state;
    int m = 0, n = 0;
    TermPtr core;  // (k + m) -> (k + n), combinational

    int state_width() const { return static_cast<int>(state.size()); }
    TermPtr to_term() const;
};

/// Pull every trace and delay to a single outer loop. Purely structural.
GlobalTraceDelayForm global_trace_delay_form(const TermPtr& t);

/// Fuse the delay and value wires into one register word (bottoms then
/// letters); the value registers are fed bottom by fresh core outputs.
PreMealyForm mealy_rule(const GlobalTraceDelayForm& g);

/// Eliminate the bare feedback wires by unrolling the core enough times to
/// reach the least fixed point on every input.
MealyForm instant_feedback(const PreMealyForm& p, const Interpretation& i);

MealyForm to_mealy_form(const TermPtr& t, const Interpretation& i);

/// One synchronous step: evaluate the core on state and inputs, split into
/// next state and outputs.
std::pair<Word, MealyForm> productivity_step(const MealyForm& mf, const Word& input, const Interpretation& i);

Waveform run_waveform(const TermPtr& t, const Waveform& w, const Interpretation& i);

enum class EquivMode { Exhaustive, Oracle };

struct EquivResult {
    bool equivalent = false;
    std::optional<Waveform> witness;  // an input waveform telling them apart
};

/// Observational equivalence. Exhaustive mode compares runs over every
/// input waveform long enough to exercise all register states; oracle mode
/// compares the denotations via bisimulation.
EquivResult obs_equiv(const TermPtr& t1, const TermPtr& t2, EquivMode mode, InterpPtr interp,
                      size_t budget = 1000000);

/// One step of the local value-propagation rules (value into gate, fork,
/// join or eliminator), choosing the first redex in traversal order.
/// Returns nothing when the term is in normal form.
std::optional<TermPtr> value_rule_step(const TermPtr& t, const Interpretation& i);

/// All currently enabled value redexes, as opaque indices usable with
/// value_rule_apply. Exposed so tests can drive reduction orders.
std::vector<int> value_redexes(const TermPtr& t, const Interpretation& i);
TermPtr value_rule_apply(const TermPtr& t, const Interpretation& i, int redex);

/// What each enabled redex would consume: the target kind ("fork", "join",
/// "elim" or a gate name) and the letters read.
struct ValueRedexInfo {
    std::string kind;
    Word letters;
};
std::vector<ValueRedexInfo> value_redex_info(const TermPtr& t, const Interpretation& i);

/// Exhaustive value-rule application.
TermPtr value_rule_normal_form(const TermPtr& t, const Interpretation& i);

}  // namespace circ

#endif
