#include "circ/lang.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "circ/hypergraph.hpp"

namespace circ {

namespace {

struct Token {
    enum class Kind { Name, Punct, End };
    Kind kind = Kind::End;
    std::string text;
    int line = 0, column = 0;
};

struct Lexer {
    const std::string& src;
    size_t pos = 0;
    int line = 1, column = 1;
    Token current;

    explicit Lexer(const std::string& s) : src(s) { advance(); }

    void bump() {
        if (pos < src.size() && src[pos] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
        ++pos;
    }

    void advance() {
        for (;;) {
            while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) bump();
            if (pos < src.size() && src[pos] == '#') {
                while (pos < src.size() && src[pos] != '\n') bump();
                continue;
            }
            break;
        }
        current = {};
        current.line = line;
        current.column = column;
        if (pos >= src.size()) {
            current.kind = Token::Kind::End;
            return;
        }
        char c = src[pos];
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
            current.kind = Token::Kind::Name;
            while (pos < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_')) {
                current.text += src[pos];
                bump();
            }
            return;
        }
        if (c == '-' && pos + 1 < src.size() && src[pos + 1] == '>') {
            current.kind = Token::Kind::Punct;
            current.text = "->";
            bump();
            bump();
            return;
        }
        current.kind = Token::Kind::Punct;
        current.text = std::string(1, c);
        bump();
    }
};

struct Parser {
    const Interpretation& interp;
    Lexer lex;
    std::map<std::string, CircuitDef> known;

    Parser(const std::string& src, const Interpretation& i) : interp(i), lex(src) {}

    [[noreturn]] void fail(const std::string& msg) {
        throw parse_error(msg, lex.current.line, lex.current.column);
    }

    bool at(const std::string& p) {
        return lex.current.kind == Token::Kind::Punct && lex.current.text == p;
    }
    bool at_name(const std::string& n) {
        return lex.current.kind == Token::Kind::Name && lex.current.text == n;
    }
    bool at_end() { return lex.current.kind == Token::Kind::End; }
    void expect(const std::string& p) {
        if (!at(p)) fail("expected '" + p + "'");
        lex.advance();
    }
    std::string expect_name(const std::string& what) {
        if (lex.current.kind != Token::Kind::Name) fail("expected " + what);
        std::string n = lex.current.text;
        lex.advance();
        return n;
    }

    // --- per-circuit elaboration state ------------------------------------
    InterfacedHypergraph net;
    std::map<std::string, int> wires;
    std::map<std::string, bool> feedback_open;
    std::vector<std::pair<int, int>> merges;

    int fresh() { return net.graph.n_vertices++; }

    Value value_of(const std::string& name) {
        auto v = interp.lattice().value_of(name);
        if (!v) fail("unknown value '" + name + "'");
        return *v;
    }

    std::vector<int> make_source(const EdgeLabel& label) {
        Hyperedge e;
        e.label = label;
        e.targets = {fresh()};
        net.graph.edges.push_back(std::move(e));
        return net.graph.edges.back().targets;
    }

    std::vector<int> apply(const std::string& head, const std::vector<int>& args, int line, int col) {
        auto arity_check = [&](int want, const char* what) {
            if (static_cast<int>(args.size()) != want)
                throw parse_error(std::string(what) + " expects " + std::to_string(want) + " wires, got " +
                                      std::to_string(args.size()),
                                  line, col);
        };
        if (head == "delay") {
            arity_check(1, "delay");
            Hyperedge e;
            e.label = EdgeLabel::delay_edge();
            e.sources = args;
            e.targets = {fresh()};
            net.graph.edges.push_back(std::move(e));
            return net.graph.edges.back().targets;
        }
        if (head == "join") {
            arity_check(2, "join");
            Hyperedge e;
            e.label = EdgeLabel::join_edge();
            e.sources = args;
            e.targets = {fresh()};
            net.graph.edges.push_back(std::move(e));
            return net.graph.edges.back().targets;
        }
        if (auto id = interp.signature().find(head)) {
            const Primitive& p = interp.signature().prim(*id);
            arity_check(p.arity, head.c_str());
            Hyperedge e;
            e.label = EdgeLabel::gate(p.name, p.arity, p.coarity);
            e.sources = args;
            for (int k = 0; k < p.coarity; ++k) e.targets.push_back(fresh());
            net.graph.edges.push_back(std::move(e));
            return net.graph.edges.back().targets;
        }
        auto it = known.find(head);
        if (it == known.end()) throw parse_error("unknown component '" + head + "'", line, col);
        const CircuitDef& def = it->second;
        arity_check(def.term->inputs, head.c_str());
        // Inline the callee's net with a vertex offset.
        Net sub = term_to_net(def.term);
        const int off = net.graph.n_vertices;
        net.graph.n_vertices += sub.graph.graph.n_vertices;
        for (const auto& e : sub.graph.graph.edges) {
            Hyperedge ne = e;
            for (int& s : ne.sources) s += off;
            for (int& t : ne.targets) t += off;
            net.graph.edges.push_back(std::move(ne));
        }
        for (size_t k = 0; k < args.size(); ++k)
            merges.push_back({args[k], sub.graph.inputs[k] + off});
        std::vector<int> outs;
        for (int v : sub.graph.outputs) outs.push_back(v + off);
        return outs;
    }

    std::vector<int> expr() {
        int line = lex.current.line, col = lex.current.column;
        if (at("{")) {
            lex.advance();
            std::vector<Word> alts;
            alts.push_back({value_of(expect_name("a value name"))});
            while (at(",")) {
                lex.advance();
                alts.push_back({value_of(expect_name("a value name"))});
            }
            expect("}");
            if (alts.size() == 1) return make_source(EdgeLabel::waveform_edge(alts[0][0]));
            return make_source(EdgeLabel::uncertain_edge(std::move(alts)));
        }
        std::string head = expect_name("a wire, value or component");
        if (head == "hold" && at("(")) {
            lex.advance();
            Value v = value_of(expect_name("a value name"));
            expect(")");
            return make_source(EdgeLabel::waveform_edge(v));
        }
        if (at("(")) {
            lex.advance();
            std::vector<int> args;
            if (!at(")")) {
                for (;;) {
                    auto sub = expr();
                    if (sub.size() != 1)
                        throw parse_error("a nested expression must produce exactly one wire", line, col);
                    args.push_back(sub[0]);
                    if (at(",")) {
                        lex.advance();
                        continue;
                    }
                    break;
                }
            }
            expect(")");
            return apply(head, args, line, col);
        }
        auto it = wires.find(head);
        if (it != wires.end()) return {it->second};
        if (interp.lattice().value_of(head)) return make_source(EdgeLabel::value_edge(value_of(head)));
        throw parse_error("undefined wire '" + head + "'", line, col);
    }

    void bind(const std::string& name, int vertex, int line, int col) {
        auto fb = feedback_open.find(name);
        if (fb != feedback_open.end()) {
            if (!fb->second) throw parse_error("feedback wire '" + name + "' bound twice", line, col);
            fb->second = false;
            merges.push_back({wires.at(name), vertex});
            return;
        }
        if (wires.count(name)) throw parse_error("wire '" + name + "' is already defined", line, col);
        wires[name] = vertex;
    }

    void statement() {
        int line = lex.current.line, col = lex.current.column;
        if (at_name("feedback")) {
            lex.advance();
            std::string name = expect_name("a wire name");
            if (wires.count(name)) throw parse_error("wire '" + name + "' is already defined", line, col);
            wires[name] = fresh();
            feedback_open[name] = true;
            return;
        }
        if (at("(")) {
            lex.advance();
            std::vector<std::string> names;
            names.push_back(expect_name("a wire name"));
            while (at(",")) {
                lex.advance();
                names.push_back(expect_name("a wire name"));
            }
            expect(")");
            expect("=");
            auto vs = expr();
            if (vs.size() != names.size())
                throw parse_error("expression produces " + std::to_string(vs.size()) + " wires, expected " +
                                      std::to_string(names.size()),
                                  line, col);
            for (size_t k = 0; k < names.size(); ++k) bind(names[k], vs[k], line, col);
            return;
        }
        std::string name = expect_name("a statement");
        expect("=");
        auto vs = expr();
        if (vs.size() != 1)
            throw parse_error("expression produces " + std::to_string(vs.size()) + " wires, expected 1", line,
                              col);
        bind(name, vs[0], line, col);
    }

    CircuitDef circuit() {
        if (!at_name("circuit")) fail("expected 'circuit'");
        lex.advance();
        CircuitDef def;
        def.name = expect_name("a circuit name");

        net = {};
        wires.clear();
        feedback_open.clear();
        merges.clear();

        expect("(");
        if (!at(")")) {
            for (;;) {
                std::string p = expect_name("an input name");
                if (wires.count(p)) fail("duplicate input '" + p + "'");
                def.input_names.push_back(p);
                wires[p] = fresh();
                if (at(",")) {
                    lex.advance();
                    continue;
                }
                break;
            }
        }
        expect(")");
        expect("->");
        expect("(");
        if (!at(")")) {
            for (;;) {
                def.output_names.push_back(expect_name("an output name"));
                if (at(",")) {
                    lex.advance();
                    continue;
                }
                break;
            }
        }
        expect(")");
        expect("{");
        while (!at("}")) statement();
        expect("}");

        for (const auto& [name, open] : feedback_open)
            if (open) fail("feedback wire '" + name + "' was never bound");

        for (const std::string& in : def.input_names) net.inputs.push_back(wires.at(in));
        for (const std::string& outn : def.output_names) {
            auto it = wires.find(outn);
            if (it == wires.end()) fail("output '" + outn + "' names no wire");
            net.outputs.push_back(it->second);
        }
        InterfacedHypergraph merged = merge_vertices(net, merges);
        Net n;
        n.graph = std::move(merged);
        def.term = net_to_term(n);
        return def;
    }

    std::vector<CircuitDef> file() {
        std::vector<CircuitDef> defs;
        while (!at_end()) {
            CircuitDef def = circuit();
            known[def.name] = def;
            defs.push_back(std::move(def));
        }
        if (defs.empty()) fail("no circuits in the file");
        return defs;
    }
};

}  // namespace

std::vector<CircuitDef> parse_circuits(const std::string& source, const Interpretation& interp) {
    Parser p(source, interp);
    return p.file();
}

CircuitDef parse_circuit(const std::string& source, const Interpretation& interp, const std::string& name) {
    auto defs = parse_circuits(source, interp);
    if (name.empty()) return defs.back();
    for (auto& d : defs)
        if (d.name == name) return d;
    throw parse_error("no circuit named '" + name + "'", 0, 0);
}

std::string print_circuit(const TermPtr& t, const std::string& name, const Interpretation& interp) {
    Net n = term_to_net(t);
    const auto& g = n.graph.graph;
    const Lattice& l = interp.lattice();

    std::vector<std::string> vname(static_cast<size_t>(g.n_vertices));
    for (size_t k = 0; k < n.graph.inputs.size(); ++k)
        vname[static_cast<size_t>(n.graph.inputs[k])] = "in" + std::to_string(k);
    for (int v = 0; v < g.n_vertices; ++v)
        if (vname[static_cast<size_t>(v)].empty()) vname[static_cast<size_t>(v)] = "w" + std::to_string(v);

    std::vector<int> producer(static_cast<size_t>(g.n_vertices), -1);
    for (size_t e = 0; e < g.edges.size(); ++e)
        for (int tv : g.edges[e].targets) producer[static_cast<size_t>(tv)] = static_cast<int>(e);

    std::ostringstream body;
    std::vector<char> defined(static_cast<size_t>(g.n_vertices), 0);
    for (int v : n.graph.inputs) defined[static_cast<size_t>(v)] = 1;
    // Source-less vertices that are not inputs are permanently silent.
    for (int v = 0; v < g.n_vertices; ++v)
        if (producer[static_cast<size_t>(v)] < 0 && !defined[static_cast<size_t>(v)]) {
            body << "  " << vname[static_cast<size_t>(v)] << " = hold(" << l.name(l.bottom()) << ")\n";
            defined[static_cast<size_t>(v)] = 1;
        }

    std::vector<char> emitted(g.edges.size(), 0);
    size_t remaining = g.edges.size();
    while (remaining > 0) {
        bool progress = false;
        for (size_t e = 0; e < g.edges.size(); ++e) {
            if (emitted[e]) continue;
            bool ready = true;
            for (int s : g.edges[e].sources)
                if (!defined[static_cast<size_t>(s)]) ready = false;
            if (!ready) continue;
            // Emit the binding.
            const auto& edge = g.edges[e];
            body << "  ";
            if (edge.targets.size() != 1) {
                body << "(";
                for (size_t k = 0; k < edge.targets.size(); ++k) {
                    if (k) body << ", ";
                    body << vname[static_cast<size_t>(edge.targets[k])];
                }
                body << ")";
            } else {
                body << vname[static_cast<size_t>(edge.targets[0])];
            }
            body << " = ";
            auto args = [&]() {
                std::string s = "(";
                for (size_t k = 0; k < edge.sources.size(); ++k) {
                    if (k) s += ", ";
                    s += vname[static_cast<size_t>(edge.sources[k])];
                }
                return s + ")";
            };
            switch (edge.label.kind) {
                case EdgeLabel::Kind::Gate: body << edge.label.name << args(); break;
                case EdgeLabel::Kind::DelayE: body << "delay" << args(); break;
                case EdgeLabel::Kind::JoinE: body << "join" << args(); break;
                case EdgeLabel::Kind::ValueE: body << l.name(edge.label.letters[0]); break;
                case EdgeLabel::Kind::WaveformE: body << "hold(" << l.name(edge.label.letters[0]) << ")"; break;
                case EdgeLabel::Kind::UncertainE: {
                    body << "{";
                    for (size_t k = 0; k < edge.label.alternatives.size(); ++k) {
                        if (k) body << ", ";
                        body << l.name(edge.label.alternatives[k][0]);
                    }
                    body << "}";
                    break;
                }
            }
            body << "\n";
            for (int tv : edge.targets) defined[static_cast<size_t>(tv)] = 1;
            emitted[e] = 1;
            --remaining;
            progress = true;
        }
        if (!progress) {
            // A cycle: declare the first blocked source as feedback.
            for (size_t e = 0; e < g.edges.size() && !progress; ++e) {
                if (emitted[e]) continue;
                for (int s : g.edges[e].sources) {
                    if (!defined[static_cast<size_t>(s)]) {
                        body << "  feedback " << vname[static_cast<size_t>(s)] << "\n";
                        defined[static_cast<size_t>(s)] = 1;
                        progress = true;
                        break;
                    }
                }
            }
            if (!progress) throw std::logic_error("print_circuit: no progress");
        }
    }

    std::ostringstream out;
    out << "# circ circuit v1\n";
    out << "circuit " << name << "(";
    for (size_t k = 0; k < n.graph.inputs.size(); ++k) {
        if (k) out << ", ";
        out << vname[static_cast<size_t>(n.graph.inputs[k])];
    }
    out << ") -> (";
    for (size_t k = 0; k < n.graph.outputs.size(); ++k) {
        if (k) out << ", ";
        out << vname[static_cast<size_t>(n.graph.outputs[k])];
    }
    out << ") {\n" << body.str() << "}\n";
    return out.str();
}

}  // namespace circ
