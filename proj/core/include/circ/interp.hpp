#ifndef CIRC_INTERP_HPP
#define CIRC_INTERP_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace circ {

/// Error raised when a configurable exploration budget is exhausted.
/// Distinguished from ordinary errors so callers (and the CLI) can map it
/// to a dedicated exit code.
struct budget_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An element of a finite value set, identified by its index.
struct Value {
    uint8_t index = 0;

    constexpr Value() = default;
    constexpr explicit Value(int i) : index(static_cast<uint8_t>(i)) {}

    friend constexpr bool operator==(Value a, Value b) { return a.index == b.index; }
    friend constexpr bool operator!=(Value a, Value b) { return a.index != b.index; }
    friend constexpr bool operator<(Value a, Value b) { return a.index < b.index; }
};

/// A tuple of values, one per wire.
using Word = std::vector<Value>;

/// A finite lattice of values with an information order.
///
/// The order is supplied as an explicit relation and validated at
/// construction: reflexivity, antisymmetry, transitivity, existence of
/// binary least upper bounds, and a least element. Joins are tabulated.
class Lattice {
public:
    /// Build from value names and the set of (lower, upper) related pairs.
    /// The reflexive-transitive closure is *not* taken: the relation must
    /// already be a partial order. Throws std::invalid_argument on a
    /// malformed order.
    Lattice(std::vector<std::string> names, const std::vector<std::pair<int, int>>& leq_pairs);

    int size() const { return static_cast<int>(names_.size()); }
    const std::string& name(Value v) const { return names_.at(v.index); }
    const std::vector<std::string>& names() const { return names_; }
    std::optional<Value> value_of(const std::string& name) const;

    Value bottom() const { return bottom_; }
    bool leq(Value a, Value b) const { return leq_[idx(a, b)]; }
    Value join(Value a, Value b) const { return join_[idx(a, b)]; }

    /// Maximum number of strict steps along any chain.
    int height() const { return height_; }

    bool leq_word(const Word& a, const Word& b) const;
    Word join_word(const Word& a, const Word& b) const;
    Word bottom_word(int width) const { return Word(static_cast<size_t>(width), bottom_); }

    bool valid(Value v) const { return v.index < names_.size(); }

private:
    size_t idx(Value a, Value b) const { return static_cast<size_t>(a.index) * names_.size() + b.index; }

    std::vector<std::string> names_;
    std::vector<char> leq_;
    std::vector<Value> join_;
    Value bottom_;
    int height_ = 0;
};

using LatticePtr = std::shared_ptr<const Lattice>;

/// A primitive symbol with its wire counts.
struct Primitive {
    std::string name;
    int arity = 0;    // input wires
    int coarity = 0;  // output wires
};

/// A set of primitive symbols with unique names.
class Signature {
public:
    Signature() = default;
    explicit Signature(std::vector<Primitive> prims);

    int size() const { return static_cast<int>(prims_.size()); }
    const Primitive& prim(int id) const { return prims_.at(static_cast<size_t>(id)); }
    std::optional<int> find(const std::string& name) const;
    const std::vector<Primitive>& prims() const { return prims_; }

private:
    std::vector<Primitive> prims_;
};

/// A reported failure of the interpretation laws for one primitive.
struct Violation {
    enum class Kind { NotBottomPreserving, NotMonotone };
    Kind kind;
    std::string prim;
    Word input_a;  // witnessing input (pair for monotonicity)
    Word input_b;
    std::string describe(const Lattice& l) const;
};

/// The semantic parameter: a lattice of values plus a total function for
/// each primitive symbol, tabulated over all input words.
class Interpretation {
public:
    Interpretation(LatticePtr lattice, Signature signature,
                   std::vector<std::vector<Word>> tables);

    const Lattice& lattice() const { return *lattice_; }
    const LatticePtr& lattice_ptr() const { return lattice_; }
    const Signature& signature() const { return signature_; }

    /// Apply primitive `id` to the input word (size must equal its arity).
    const Word& apply(int id, const Word& input) const;
    const std::vector<Word>& table(int id) const { return tables_.at(static_cast<size_t>(id)); }

private:
    LatticePtr lattice_;
    Signature signature_;
    std::vector<std::vector<Word>> tables_;  // per prim, indexed by input word index
};

using InterpPtr = std::shared_ptr<const Interpretation>;

/// The built-in four-valued interpretation: values bot, f, t, top ordered
/// by information content, with AND, OR, NOT gates.
InterpPtr belnap();

/// Indices of the four Belnap values in the fixed serialization order.
inline constexpr Value kBot{0}, kF{1}, kT{2}, kTop{3};

/// Check that every primitive function is monotone and maps the all-bottom
/// input to the all-bottom output. Violations are data, not failures.
std::vector<Violation> check_interpretation(const Interpretation& i);

int lattice_height(const Lattice& l);

/// Mixed-radix index of a word over a `base`-element value set.
size_t word_index(const Word& w, int base);
/// Inverse of word_index.
Word word_at(size_t index, int width, int base);
/// Number of words of the given width (base^width).
size_t word_count(int width, int base);

std::string show_word(const Lattice& l, const Word& w);

}  // namespace circ

#endif
