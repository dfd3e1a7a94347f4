#include "circ/compile.hpp"

#include <stdexcept>

namespace circ {

namespace {

struct Builder {
    Compiled c;

    int fresh() { return c.n_wires++; }

    std::vector<int> build(const TermPtr& t, const std::vector<int>& ins) {
        const Interpretation& i = *c.interp;
        switch (t->kind) {
            case TermKind::Primitive: {
                auto id = i.signature().find(t->prim_name);
                if (!id) throw std::invalid_argument("unknown primitive '" + t->prim_name + "'");
                const Primitive& p = i.signature().prim(*id);
                if (p.arity != t->inputs || p.coarity != t->outputs)
                    throw std::invalid_argument("primitive '" + t->prim_name + "' arity mismatch");
                Compiled::Op op;
                op.kind = Compiled::Op::Kind::Gate;
                op.prim = *id;
                op.ins = ins;
                for (int k = 0; k < p.coarity; ++k) op.outs.push_back(fresh());
                c.ops.push_back(op);
                return c.ops.back().outs;
            }
            case TermKind::Id:
                return ins;
            case TermKind::Symmetry: {
                std::vector<int> out(ins.begin() + t->m, ins.end());
                out.insert(out.end(), ins.begin(), ins.begin() + t->m);
                return out;
            }
            case TermKind::Fork:
                return {ins[0], ins[0]};
            case TermKind::Join: {
                Compiled::Op op;
                op.kind = Compiled::Op::Kind::Join2;
                op.ins = ins;
                op.outs = {fresh()};
                c.ops.push_back(op);
                return c.ops.back().outs;
            }
            case TermKind::Intro: {
                Compiled::Op op;
                op.kind = Compiled::Op::Kind::Const;
                op.cval = {i.lattice().bottom()};
                op.outs = {fresh()};
                c.ops.push_back(op);
                return c.ops.back().outs;
            }
            case TermKind::Elim:
                return {};
            case TermKind::Value: {
                std::vector<int> outs;
                for (Value v : t->letters) {
                    Compiled::Reg r;
                    r.out_wire = fresh();
                    r.in_wire = -1;
                    r.init = v;
                    c.regs.push_back(r);
                    outs.push_back(r.out_wire);
                }
                return outs;
            }
            case TermKind::Waveform: {
                Compiled::Op op;
                op.kind = Compiled::Op::Kind::Const;
                op.cval = t->letters;
                for (size_t k = 0; k < t->letters.size(); ++k) op.outs.push_back(fresh());
                c.ops.push_back(op);
                return c.ops.back().outs;
            }
            case TermKind::Uncertain:
                throw std::invalid_argument("cannot evaluate an uncertain value; fix a world first");
            case TermKind::Delay: {
                std::vector<int> outs;
                for (int k = 0; k < t->m; ++k) {
                    Compiled::Reg r;
                    r.out_wire = fresh();
                    r.in_wire = ins[static_cast<size_t>(k)];
                    r.init = i.lattice().bottom();
                    c.regs.push_back(r);
                    outs.push_back(r.out_wire);
                }
                return outs;
            }
            case TermKind::Seq: {
                std::vector<int> w = ins;
                for (const auto& ch : t->children) w = build(ch, w);
                return w;
            }
            case TermKind::Par: {
                std::vector<int> outs;
                size_t off = 0;
                for (const auto& ch : t->children) {
                    std::vector<int> part(ins.begin() + static_cast<long>(off),
                                          ins.begin() + static_cast<long>(off + static_cast<size_t>(ch->inputs)));
                    off += static_cast<size_t>(ch->inputs);
                    auto r = build(ch, part);
                    outs.insert(outs.end(), r.begin(), r.end());
                }
                return outs;
            }
            case TermKind::Trace: {
                const int x = t->trace_width;
                std::vector<int> loop_ins;
                for (int k = 0; k < x; ++k) loop_ins.push_back(fresh());
                std::vector<int> body_ins = loop_ins;
                body_ins.insert(body_ins.end(), ins.begin(), ins.end());
                auto body_outs = build(t->children[0], body_ins);
                for (int k = 0; k < x; ++k)
                    c.feedback.emplace_back(loop_ins[static_cast<size_t>(k)], body_outs[static_cast<size_t>(k)]);
                return {body_outs.begin() + x, body_outs.end()};
            }
        }
        throw std::logic_error("unknown term kind");
    }
};

}  // namespace

Compiled compile(const TermPtr& t, InterpPtr interp) {
    Builder b;
    b.c.interp = std::move(interp);
    b.c.n_inputs = t->inputs;
    b.c.n_outputs = t->outputs;
    for (int k = 0; k < t->inputs; ++k) b.c.input_wires.push_back(b.fresh());
    b.c.output_wires = b.build(t, b.c.input_wires);
    // Delay registers first, then value registers, preserving traversal order.
    std::vector<Compiled::Reg> delays, values;
    for (const auto& r : b.c.regs) (r.in_wire >= 0 ? delays : values).push_back(r);
    b.c.regs = delays;
    b.c.regs.insert(b.c.regs.end(), values.begin(), values.end());
    return std::move(b.c);
}

Word Compiled::initial_state() const {
    Word s;
    s.reserve(regs.size());
    for (const auto& r : regs) s.push_back(r.init);
    return s;
}

std::vector<Value> Compiled::wire_values(const Word& state, const Word& input) const {
    const Lattice& l = interp->lattice();
    if (state.size() != regs.size()) throw std::invalid_argument("state width mismatch");
    if (input.size() != static_cast<size_t>(n_inputs)) throw std::invalid_argument("input width mismatch");

    std::vector<Value> w(static_cast<size_t>(n_wires), l.bottom());
    for (size_t k = 0; k < input.size(); ++k) w[static_cast<size_t>(input_wires[k])] = input[k];
    for (size_t k = 0; k < regs.size(); ++k) w[static_cast<size_t>(regs[k].out_wire)] = state[k];

    const int x = feedback_width();
    Word guess(static_cast<size_t>(x), l.bottom());
    const int max_iter = x * l.height() + 1;
    for (int iter = 0;; ++iter) {
        for (int k = 0; k < x; ++k) w[static_cast<size_t>(feedback[static_cast<size_t>(k)].first)] = guess[static_cast<size_t>(k)];
        for (const auto& op : ops) {
            switch (op.kind) {
                case Op::Kind::Gate: {
                    Word in(op.ins.size());
                    for (size_t k = 0; k < op.ins.size(); ++k) in[k] = w[static_cast<size_t>(op.ins[k])];
                    const Word& out = interp->apply(op.prim, in);
                    for (size_t k = 0; k < op.outs.size(); ++k) w[static_cast<size_t>(op.outs[k])] = out[k];
                    break;
                }
                case Op::Kind::Join2:
                    w[static_cast<size_t>(op.outs[0])] =
                        l.join(w[static_cast<size_t>(op.ins[0])], w[static_cast<size_t>(op.ins[1])]);
                    break;
                case Op::Kind::Const:
                    for (size_t k = 0; k < op.outs.size(); ++k) w[static_cast<size_t>(op.outs[k])] = op.cval[k];
                    break;
            }
        }
        if (x == 0) break;
        Word next(static_cast<size_t>(x));
        for (int k = 0; k < x; ++k) next[static_cast<size_t>(k)] = w[static_cast<size_t>(feedback[static_cast<size_t>(k)].second)];
        if (next == guess) break;
        if (iter >= max_iter)
            throw std::logic_error("feedback iteration did not converge; non-monotone primitive?");
        guess = std::move(next);
    }
    return w;
}

std::pair<Word, Word> Compiled::step(const Word& state, const Word& input) const {
    auto w = wire_values(state, input);
    const Lattice& l = interp->lattice();
    Word next(regs.size());
    for (size_t k = 0; k < regs.size(); ++k)
        next[k] = regs[k].in_wire >= 0 ? w[static_cast<size_t>(regs[k].in_wire)] : l.bottom();
    Word out(static_cast<size_t>(n_outputs));
    for (size_t k = 0; k < out.size(); ++k) out[k] = w[static_cast<size_t>(output_wires[k])];
    return {std::move(next), std::move(out)};
}

}  // namespace circ
