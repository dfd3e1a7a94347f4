#include "circ/mealy.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>

namespace circ {

void Waveform::push(Word w) {
    if (static_cast<int>(w.size()) != width)
        throw std::invalid_argument("waveform: tuple width mismatch");
    values.push_back(std::move(w));
}

struct MealyMachine::Impl {
    virtual ~Impl() = default;
    virtual int input_width() const = 0;
    virtual int output_width() const = 0;
    virtual LatticePtr lattice() const = 0;
    virtual State initial() const = 0;
    virtual std::pair<State, Word> step(State, const Word&) const = 0;
    virtual std::string state_name(State) const = 0;
    virtual bool has_order() const { return false; }
    virtual bool leq(State, State) const { return false; }
    virtual size_t state_count() const = 0;
    virtual bool is_table() const { return false; }
};

int MealyMachine::input_width() const { return impl_->input_width(); }
int MealyMachine::output_width() const { return impl_->output_width(); }
const Lattice& MealyMachine::lattice() const { return *impl_->lattice(); }
LatticePtr MealyMachine::lattice_ptr() const { return impl_->lattice(); }
MealyMachine::State MealyMachine::initial() const { return impl_->initial(); }
std::pair<MealyMachine::State, Word> MealyMachine::step(State s, const Word& in) const {
    if (static_cast<int>(in.size()) != input_width())
        throw std::invalid_argument("mealy step: input width mismatch");
    return impl_->step(s, in);
}
std::string MealyMachine::state_name(State s) const { return impl_->state_name(s); }
bool MealyMachine::has_order() const { return impl_->has_order(); }
bool MealyMachine::state_leq(State a, State b) const { return impl_->leq(a, b); }
size_t MealyMachine::state_count() const { return impl_->state_count(); }
bool MealyMachine::is_table() const { return impl_->is_table(); }

namespace {

/// Interns words (or id pairs) as dense state ids.
template <typename Key>
struct Interner {
    mutable std::map<Key, uint32_t> ids;
    mutable std::vector<Key> keys;
    mutable std::mutex mu;

    uint32_t intern(const Key& k) const {
        std::lock_guard<std::mutex> g(mu);
        auto it = ids.find(k);
        if (it != ids.end()) return it->second;
        uint32_t id = static_cast<uint32_t>(keys.size());
        ids.emplace(k, id);
        keys.push_back(k);
        return id;
    }
    const Key& key(uint32_t id) const {
        std::lock_guard<std::mutex> g(mu);
        return keys.at(id);
    }
    size_t size() const {
        std::lock_guard<std::mutex> g(mu);
        return keys.size();
    }
};

struct CircuitImpl : MealyMachine::Impl {
    Compiled compiled;
    Interner<Word> intern;
    uint32_t initial_id;

    explicit CircuitImpl(Compiled c) : compiled(std::move(c)) {
        initial_id = intern.intern(compiled.initial_state());
    }

    int input_width() const override { return compiled.n_inputs; }
    int output_width() const override { return compiled.n_outputs; }
    LatticePtr lattice() const override { return compiled.interp->lattice_ptr(); }
    MealyMachine::State initial() const override { return initial_id; }
    std::pair<MealyMachine::State, Word> step(MealyMachine::State s, const Word& in) const override {
        auto [next, out] = compiled.step(intern.key(s), in);
        return {intern.intern(next), std::move(out)};
    }
    std::string state_name(MealyMachine::State s) const override {
        return show_word(*compiled.interp->lattice_ptr(), intern.key(s));
    }
    bool has_order() const override { return true; }
    bool leq(MealyMachine::State a, MealyMachine::State b) const override {
        return compiled.interp->lattice().leq_word(intern.key(a), intern.key(b));
    }
    size_t state_count() const override { return intern.size(); }
};

struct TableImpl : MealyMachine::Impl {
    MealyTable t;

    explicit TableImpl(MealyTable table) : t(std::move(table)) {
        const size_t n_inputs = word_count(t.input_width, t.lattice->size());
        if (t.rows.size() != t.state_names.size())
            throw std::invalid_argument("mealy table: one row block per state required");
        for (const auto& row : t.rows) {
            if (row.size() != n_inputs) throw std::invalid_argument("mealy table: wrong row count");
            for (const auto& [next, out] : row) {
                if (next >= t.rows.size()) throw std::invalid_argument("mealy table: successor out of range");
                if (out.size() != static_cast<size_t>(t.output_width))
                    throw std::invalid_argument("mealy table: output width mismatch");
            }
        }
        if (!t.order.empty() && t.order.size() != t.rows.size() * t.rows.size())
            throw std::invalid_argument("mealy table: order matrix size mismatch");
    }

    int input_width() const override { return t.input_width; }
    int output_width() const override { return t.output_width; }
    LatticePtr lattice() const override { return t.lattice; }
    MealyMachine::State initial() const override { return t.initial; }
    std::pair<MealyMachine::State, Word> step(MealyMachine::State s, const Word& in) const override {
        const auto& cell = t.rows.at(s).at(word_index(in, t.lattice->size()));
        return {cell.first, cell.second};
    }
    std::string state_name(MealyMachine::State s) const override { return t.state_names.at(s); }
    bool has_order() const override { return !t.order.empty(); }
    bool leq(MealyMachine::State a, MealyMachine::State b) const override {
        return t.order.empty() ? false : t.order[a * t.rows.size() + b] != 0;
    }
    size_t state_count() const override { return t.rows.size(); }
    bool is_table() const override { return true; }
};

struct PairImpl : MealyMachine::Impl {
    std::shared_ptr<MealyMachine::Impl> a, b;
    bool is_cascade;
    Interner<std::pair<uint32_t, uint32_t>> intern;
    uint32_t initial_id;

    PairImpl(std::shared_ptr<MealyMachine::Impl> ia, std::shared_ptr<MealyMachine::Impl> ib, bool cascade_mode)
        : a(std::move(ia)), b(std::move(ib)), is_cascade(cascade_mode) {
        initial_id = intern.intern({a->initial(), b->initial()});
    }

    int input_width() const override { return is_cascade ? a->input_width() : a->input_width() + b->input_width(); }
    int output_width() const override { return is_cascade ? b->output_width() : a->output_width() + b->output_width(); }
    LatticePtr lattice() const override { return a->lattice(); }
    MealyMachine::State initial() const override { return initial_id; }
    std::pair<MealyMachine::State, Word> step(MealyMachine::State s, const Word& in) const override {
        auto [sa, sb] = intern.key(s);
        if (is_cascade) {
            auto [na, mid] = a->step(sa, in);
            auto [nb, out] = b->step(sb, mid);
            return {intern.intern({na, nb}), std::move(out)};
        }
        Word ina(in.begin(), in.begin() + a->input_width());
        Word inb(in.begin() + a->input_width(), in.end());
        auto [na, outa] = a->step(sa, ina);
        auto [nb, outb] = b->step(sb, inb);
        outa.insert(outa.end(), outb.begin(), outb.end());
        return {intern.intern({na, nb}), std::move(outa)};
    }
    std::string state_name(MealyMachine::State s) const override {
        auto [sa, sb] = intern.key(s);
        return "(" + a->state_name(sa) + ";" + b->state_name(sb) + ")";
    }
    bool has_order() const override { return a->has_order() && b->has_order(); }
    bool leq(MealyMachine::State x, MealyMachine::State y) const override {
        auto [xa, xb] = intern.key(x);
        auto [ya, yb] = intern.key(y);
        return a->leq(xa, ya) && b->leq(xb, yb);
    }
    size_t state_count() const override { return intern.size(); }
};

struct TraceImpl : MealyMachine::Impl {
    std::shared_ptr<MealyMachine::Impl> base;
    int x;

    TraceImpl(std::shared_ptr<MealyMachine::Impl> b, int width) : base(std::move(b)), x(width) {
        if (x < 0 || base->input_width() < x || base->output_width() < x)
            throw std::invalid_argument("mealy trace: width exceeds machine arity");
    }

    int input_width() const override { return base->input_width() - x; }
    int output_width() const override { return base->output_width() - x; }
    LatticePtr lattice() const override { return base->lattice(); }
    MealyMachine::State initial() const override { return base->initial(); }
    std::pair<MealyMachine::State, Word> step(MealyMachine::State s, const Word& in) const override {
        const Lattice& l = *base->lattice();
        Word guess(static_cast<size_t>(x), l.bottom());
        const int max_iter = x * l.height() + 1;
        for (int iter = 0;; ++iter) {
            Word full = guess;
            full.insert(full.end(), in.begin(), in.end());
            auto [next, out] = base->step(s, full);
            Word fed(out.begin(), out.begin() + x);
            if (fed == guess) {
                Word rest(out.begin() + x, out.end());
                return {next, std::move(rest)};
            }
            if (iter >= max_iter)
                throw std::logic_error("mealy trace did not converge; machine not monotone?");
            guess = std::move(fed);
        }
    }
    std::string state_name(MealyMachine::State s) const override { return base->state_name(s); }
    bool has_order() const override { return base->has_order(); }
    bool leq(MealyMachine::State a, MealyMachine::State b) const override { return base->leq(a, b); }
    size_t state_count() const override { return base->state_count(); }
};

}  // namespace

MealyMachine MealyTable::machine() const { return MealyMachine(std::make_shared<TableImpl>(*this)); }

MealyMachine table_machine(MealyTable table) {
    return MealyMachine(std::make_shared<TableImpl>(std::move(table)));
}

MealyMachine circuit_to_mealy(const TermPtr& t, InterpPtr interp) {
    return MealyMachine(std::make_shared<CircuitImpl>(compile(t, std::move(interp))));
}

MealyMachine cascade(const MealyMachine& m1, const MealyMachine& m2) {
    if (m1.output_width() != m2.input_width())
        throw std::invalid_argument("cascade: width mismatch");
    return MealyMachine(std::make_shared<PairImpl>(m1.impl(), m2.impl(), true));
}

MealyMachine direct(const MealyMachine& m1, const MealyMachine& m2) {
    return MealyMachine(std::make_shared<PairImpl>(m1.impl(), m2.impl(), false));
}

MealyMachine mealy_trace(const MealyMachine& m, int x) {
    if (x == 0) return m;
    return MealyMachine(std::make_shared<TraceImpl>(m.impl(), x));
}

ReachableResult reachable(const MealyMachine& m, size_t budget) {
    const Lattice& l = m.lattice();
    const size_t n_inputs = word_count(m.input_width(), l.size());

    std::map<MealyMachine::State, uint32_t> index;
    std::vector<MealyMachine::State> order;
    std::deque<MealyMachine::State> queue;
    auto visit = [&](MealyMachine::State s) -> uint32_t {
        auto it = index.find(s);
        if (it != index.end()) return it->second;
        uint32_t id = static_cast<uint32_t>(order.size());
        index.emplace(s, id);
        order.push_back(s);
        queue.push_back(s);
        return id;
    };
    visit(m.initial());

    ReachableResult res;
    res.table.lattice = m.lattice_ptr();
    res.table.input_width = m.input_width();
    res.table.output_width = m.output_width();

    while (!queue.empty()) {
        MealyMachine::State s = queue.front();
        queue.pop_front();
        std::vector<std::pair<uint32_t, Word>> row;
        row.reserve(n_inputs);
        for (size_t k = 0; k < n_inputs; ++k) {
            auto [next, out] = m.step(s, word_at(k, m.input_width(), l.size()));
            row.emplace_back(visit(next), std::move(out));
            if (order.size() > budget) throw budget_error("reachable: state budget exceeded");
        }
        res.table.rows.push_back(std::move(row));
    }

    res.source_states = order;
    for (MealyMachine::State s : order) res.table.state_names.push_back(m.state_name(s));
    res.table.initial = 0;
    if (m.has_order()) {
        const size_t n = order.size();
        res.table.order.assign(n * n, 0);
        for (size_t a = 0; a < n; ++a)
            for (size_t b = 0; b < n; ++b)
                res.table.order[a * n + b] = m.state_leq(order[a], order[b]) ? 1 : 0;
    }
    return res;
}

MealyTable minimize(const MealyMachine& m, size_t budget) {
    ReachableResult r = reachable(m, budget);
    const size_t n = r.table.rows.size();
    const size_t n_inputs = r.table.rows.empty() ? 0 : r.table.rows[0].size();

    // Partition refinement on (outputs, successor classes).
    std::vector<uint32_t> cls(n, 0);
    {
        // Initial split by the full output signature.
        std::map<std::vector<Word>, uint32_t> sig_ids;
        for (size_t s = 0; s < n; ++s) {
            std::vector<Word> sig;
            sig.reserve(n_inputs);
            for (const auto& cell : r.table.rows[s]) sig.push_back(cell.second);
            auto [it, fresh] = sig_ids.emplace(std::move(sig), static_cast<uint32_t>(sig_ids.size()));
            cls[s] = it->second;
        }
    }
    for (;;) {
        std::map<std::pair<uint32_t, std::vector<uint32_t>>, uint32_t> sig_ids;
        std::vector<uint32_t> next(n);
        for (size_t s = 0; s < n; ++s) {
            std::vector<uint32_t> succ;
            succ.reserve(n_inputs);
            for (const auto& cell : r.table.rows[s]) succ.push_back(cls[cell.first]);
            auto key = std::make_pair(cls[s], std::move(succ));
            auto [it, fresh] = sig_ids.emplace(std::move(key), static_cast<uint32_t>(sig_ids.size()));
            next[s] = it->second;
        }
        if (next == cls) break;
        cls = std::move(next);
    }

    // Renumber classes by first occurrence so state names are deterministic.
    std::vector<int> renum(n, -1);
    uint32_t n_classes = 0;
    for (size_t s = 0; s < n; ++s)
        if (renum[cls[s]] < 0) renum[cls[s]] = static_cast<int>(n_classes++);
    for (size_t s = 0; s < n; ++s) cls[s] = static_cast<uint32_t>(renum[cls[s]]);

    MealyTable out;
    out.lattice = r.table.lattice;
    out.input_width = r.table.input_width;
    out.output_width = r.table.output_width;
    out.rows.resize(n_classes);
    out.state_names.resize(n_classes);
    std::vector<char> done(n_classes, 0);
    for (size_t s = 0; s < n; ++s) {
        uint32_t c = cls[s];
        if (done[c]) continue;
        done[c] = 1;
        out.state_names[c] = "c" + std::to_string(c);
        auto& row = out.rows[c];
        row.reserve(n_inputs);
        for (const auto& cell : r.table.rows[s]) row.emplace_back(cls[cell.first], cell.second);
    }
    out.initial = cls[r.table.initial];
    return out;
}

std::optional<std::vector<Word>> bisimulation_witness(const MealyMachine& m1, const MealyMachine& m2,
                                                      size_t budget) {
    if (m1.input_width() != m2.input_width() || m1.output_width() != m2.output_width())
        throw std::invalid_argument("bisimilar: machine widths differ");
    const Lattice& l = m1.lattice();
    const size_t n_inputs = word_count(m1.input_width(), l.size());

    std::set<std::pair<MealyMachine::State, MealyMachine::State>> seen;
    struct Item {
        MealyMachine::State a, b;
        std::vector<Word> path;
    };
    std::deque<Item> queue;
    queue.push_back({m1.initial(), m2.initial(), {}});
    seen.insert({m1.initial(), m2.initial()});

    while (!queue.empty()) {
        Item it = std::move(queue.front());
        queue.pop_front();
        for (size_t k = 0; k < n_inputs; ++k) {
            Word in = word_at(k, m1.input_width(), l.size());
            auto [na, outa] = m1.step(it.a, in);
            auto [nb, outb] = m2.step(it.b, in);
            std::vector<Word> path = it.path;
            path.push_back(in);
            if (outa != outb) return path;
            if (seen.emplace(na, nb).second) {
                if (seen.size() > budget) throw budget_error("bisimilar: pair budget exceeded");
                queue.push_back({na, nb, std::move(path)});
            }
        }
    }
    return std::nullopt;
}

bool bisimilar(const MealyMachine& m1, const MealyMachine& m2, size_t budget) {
    return !bisimulation_witness(m1, m2, budget).has_value();
}

Waveform run(const MealyMachine& m, const Waveform& w) {
    if (w.width != m.input_width()) throw std::invalid_argument("run: waveform width mismatch");
    Waveform out;
    out.width = m.output_width();
    MealyMachine::State s = m.initial();
    for (const Word& in : w.values) {
        auto [next, o] = m.step(s, in);
        s = next;
        out.values.push_back(std::move(o));
    }
    return out;
}

}  // namespace circ
