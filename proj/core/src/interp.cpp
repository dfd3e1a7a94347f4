#include "circ/interp.hpp"

#include <algorithm>
#include <sstream>

namespace circ {

Lattice::Lattice(std::vector<std::string> names, const std::vector<std::pair<int, int>>& leq_pairs)
    : names_(std::move(names)) {
    const int n = size();
    if (n == 0) throw std::invalid_argument("lattice: value set must be non-empty");
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (names_[static_cast<size_t>(i)] == names_[static_cast<size_t>(j)])
                throw std::invalid_argument("lattice: duplicate value name '" + names_[static_cast<size_t>(i)] + "'");

    leq_.assign(static_cast<size_t>(n) * n, 0);
    auto at = [&](int a, int b) -> char& { return leq_[static_cast<size_t>(a) * n + b]; };
    for (int i = 0; i < n; ++i) at(i, i) = 1;
    for (auto [a, b] : leq_pairs) {
        if (a < 0 || a >= n || b < 0 || b >= n) throw std::invalid_argument("lattice: leq pair out of range");
        at(a, b) = 1;
    }

    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (at(a, b) && at(b, c) && !at(a, c))
                    throw std::invalid_argument("lattice: order is not transitive (missing " +
                                                names_[static_cast<size_t>(a)] + " <= " + names_[static_cast<size_t>(c)] + ")");
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (a != b && at(a, b) && at(b, a))
                throw std::invalid_argument("lattice: order is not antisymmetric");

    // Least upper bounds must exist and be unique.
    join_.assign(static_cast<size_t>(n) * n, Value{0});
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            int lub = -1;
            for (int c = 0; c < n; ++c) {
                if (!at(a, c) || !at(b, c)) continue;
                bool least = true;
                for (int d = 0; d < n; ++d)
                    if (at(a, d) && at(b, d) && !at(c, d)) { least = false; break; }
                if (least) { lub = c; break; }
            }
            if (lub < 0)
                throw std::invalid_argument("lattice: no least upper bound for " +
                                            names_[static_cast<size_t>(a)] + ", " + names_[static_cast<size_t>(b)]);
            join_[static_cast<size_t>(a) * n + b] = Value{lub};
        }
    }

    int bottom = -1;
    for (int c = 0; c < n; ++c) {
        bool least = true;
        for (int d = 0; d < n; ++d)
            if (!at(c, d)) { least = false; break; }
        if (least) { bottom = c; break; }
    }
    if (bottom < 0) throw std::invalid_argument("lattice: no least element");
    bottom_ = Value{bottom};

    // Longest chain measured in strict steps, by DP over the strict order.
    std::vector<int> depth(static_cast<size_t>(n), -1);
    std::function<int(int)> longest = [&](int v) -> int {
        int& d = depth[static_cast<size_t>(v)];
        if (d >= 0) return d;
        d = 0;
        for (int u = 0; u < n; ++u)
            if (u != v && at(u, v)) d = std::max(d, longest(u) + 1);
        return d;
    };
    for (int v = 0; v < n; ++v) height_ = std::max(height_, longest(v));
}

std::optional<Value> Lattice::value_of(const std::string& name) const {
    for (size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return Value{static_cast<int>(i)};
    return std::nullopt;
}

bool Lattice::leq_word(const Word& a, const Word& b) const {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (!leq(a[i], b[i])) return false;
    return true;
}

Word Lattice::join_word(const Word& a, const Word& b) const {
    Word out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = join(a[i], b[i]);
    return out;
}

Signature::Signature(std::vector<Primitive> prims) : prims_(std::move(prims)) {
    for (size_t i = 0; i < prims_.size(); ++i) {
        if (prims_[i].arity < 0 || prims_[i].coarity < 0)
            throw std::invalid_argument("signature: negative arity");
        for (size_t j = i + 1; j < prims_.size(); ++j)
            if (prims_[i].name == prims_[j].name)
                throw std::invalid_argument("signature: duplicate primitive '" + prims_[i].name + "'");
    }
}

std::optional<int> Signature::find(const std::string& name) const {
    for (size_t i = 0; i < prims_.size(); ++i)
        if (prims_[i].name == name) return static_cast<int>(i);
    return std::nullopt;
}

Interpretation::Interpretation(LatticePtr lattice, Signature signature,
                               std::vector<std::vector<Word>> tables)
    : lattice_(std::move(lattice)), signature_(std::move(signature)), tables_(std::move(tables)) {
    if (tables_.size() != static_cast<size_t>(signature_.size()))
        throw std::invalid_argument("interpretation: one table required per primitive");
    for (int p = 0; p < signature_.size(); ++p) {
        const auto& prim = signature_.prim(p);
        const auto& tab = tables_[static_cast<size_t>(p)];
        if (tab.size() != word_count(prim.arity, lattice_->size()))
            throw std::invalid_argument("interpretation: wrong table size for '" + prim.name + "'");
        for (const Word& row : tab)
            if (row.size() != static_cast<size_t>(prim.coarity))
                throw std::invalid_argument("interpretation: wrong row width for '" + prim.name + "'");
    }
}

const Word& Interpretation::apply(int id, const Word& input) const {
    const auto& tab = tables_.at(static_cast<size_t>(id));
    return tab[word_index(input, lattice_->size())];
}

std::string Violation::describe(const Lattice& l) const {
    std::ostringstream os;
    if (kind == Kind::NotBottomPreserving)
        os << prim << ": not bottom-preserving, image of all-bottom input is " << show_word(l, input_b);
    else
        os << prim << ": not monotone at " << show_word(l, input_a) << " <= " << show_word(l, input_b);
    return os.str();
}

std::vector<Violation> check_interpretation(const Interpretation& i) {
    std::vector<Violation> out;
    const Lattice& l = i.lattice();
    const int base = l.size();
    for (int p = 0; p < i.signature().size(); ++p) {
        const auto& prim = i.signature().prim(p);
        const size_t rows = word_count(prim.arity, base);
        const Word bot_in = l.bottom_word(prim.arity);
        const Word& bot_out = i.apply(p, bot_in);
        if (bot_out != l.bottom_word(prim.coarity))
            out.push_back({Violation::Kind::NotBottomPreserving, prim.name, bot_in, bot_out});
        for (size_t a = 0; a < rows; ++a) {
            Word wa = word_at(a, prim.arity, base);
            for (size_t b = 0; b < rows; ++b) {
                if (a == b) continue;
                Word wb = word_at(b, prim.arity, base);
                if (!l.leq_word(wa, wb)) continue;
                if (!l.leq_word(i.apply(p, wa), i.apply(p, wb)))
                    out.push_back({Violation::Kind::NotMonotone, prim.name, wa, wb});
            }
        }
    }
    return out;
}

int lattice_height(const Lattice& l) { return l.height(); }

size_t word_index(const Word& w, int base) {
    size_t idx = 0;
    for (Value v : w) idx = idx * static_cast<size_t>(base) + v.index;
    return idx;
}

Word word_at(size_t index, int width, int base) {
    Word w(static_cast<size_t>(width));
    for (int i = width - 1; i >= 0; --i) {
        w[static_cast<size_t>(i)] = Value{static_cast<int>(index % static_cast<size_t>(base))};
        index /= static_cast<size_t>(base);
    }
    return w;
}

size_t word_count(int width, int base) {
    size_t n = 1;
    for (int i = 0; i < width; ++i) n *= static_cast<size_t>(base);
    return n;
}

std::string show_word(const Lattice& l, const Word& w) {
    std::string s;
    for (size_t i = 0; i < w.size(); ++i) {
        if (i) s += ",";
        s += l.name(w[i]);
    }
    return s.empty() ? "()" : s;
}

namespace {

// Truth tables for the four-valued gates. Row-major in the fixed value
// order bot, f, t, top; AND/OR rows are the first operand.
constexpr int kAndTable[4][4] = {
    {0, 1, 0, 1},
    {1, 1, 1, 1},
    {0, 1, 2, 3},
    {1, 1, 3, 3},
};
constexpr int kOrTable[4][4] = {
    {0, 0, 2, 2},
    {0, 1, 2, 3},
    {2, 2, 2, 2},
    {2, 3, 2, 3},
};
constexpr int kNotTable[4] = {0, 2, 1, 3};

}  // namespace

InterpPtr belnap() {
    static const InterpPtr instance = [] {
        auto lattice = std::make_shared<const Lattice>(
            std::vector<std::string>{"bot", "f", "t", "top"},
            std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {0, 3}, {1, 3}, {2, 3}});
        Signature sig({{"and", 2, 1}, {"or", 2, 1}, {"not", 1, 1}});
        std::vector<std::vector<Word>> tables(3);
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                tables[0].push_back({Value{kAndTable[a][b]}});
                tables[1].push_back({Value{kOrTable[a][b]}});
            }
        for (int a = 0; a < 4; ++a) tables[2].push_back({Value{kNotTable[a]}});
        return std::make_shared<const Interpretation>(lattice, std::move(sig), std::move(tables));
    }();
    return instance;
}

}  // namespace circ
