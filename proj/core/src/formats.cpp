#include "circ/formats.hpp"

#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace circ {

namespace {

using nlohmann::json;

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

Value parse_value(const Lattice& l, const std::string& name, const std::string& where) {
    auto v = l.value_of(name);
    if (!v) throw std::invalid_argument(where + ": unknown value '" + name + "'");
    return *v;
}

}  // namespace

std::string write_waveform_csv(const Waveform& w, const Lattice& l,
                               const std::vector<std::string>& wire_names) {
    std::ostringstream os;
    os << "# circ waveform v1\n";
    for (int k = 0; k < w.width; ++k) {
        if (k) os << ",";
        if (k < static_cast<int>(wire_names.size()))
            os << wire_names[static_cast<size_t>(k)];
        else
            os << "w" << k;
    }
    os << "\n";
    for (const Word& row : w.values) {
        for (size_t k = 0; k < row.size(); ++k) {
            if (k) os << ",";
            os << l.name(row[k]);
        }
        os << "\n";
    }
    return os.str();
}

Waveform read_waveform_csv(const std::string& text, const Lattice& l) {
    std::istringstream is(text);
    std::string line;
    Waveform w;
    bool saw_header = false;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto cells = split_csv_line(line);
        if (!saw_header) {
            saw_header = true;
            w.width = static_cast<int>(cells.size());
            continue;  // header names the wires
        }
        if (static_cast<int>(cells.size()) != w.width)
            throw std::invalid_argument("waveform: row width differs from the header");
        Word row;
        for (const auto& cell : cells) row.push_back(parse_value(l, cell, "waveform"));
        w.values.push_back(std::move(row));
    }
    if (!saw_header) throw std::invalid_argument("waveform: missing header row");
    return w;
}

std::string write_mealy_json(const MealyTable& t) {
    json j;
    j["format"] = "circ-mealy-v1";
    j["inputs"] = t.input_width;
    j["outputs"] = t.output_width;
    j["values"] = t.lattice->names();
    json leq = json::array();
    for (int a = 0; a < t.lattice->size(); ++a)
        for (int b = 0; b < t.lattice->size(); ++b)
            if (a != b && t.lattice->leq(Value{a}, Value{b}))
                leq.push_back({t.lattice->name(Value{a}), t.lattice->name(Value{b})});
    j["value_order"] = leq;
    j["states"] = t.state_names;
    j["initial"] = t.initial;
    json order = json::array();
    if (!t.order.empty()) {
        const size_t n = t.rows.size();
        for (size_t a = 0; a < n; ++a)
            for (size_t b = 0; b < n; ++b)
                if (a != b && t.order[a * n + b]) order.push_back({a, b});
    }
    j["state_order"] = order;
    json rows = json::array();
    for (size_t s = 0; s < t.rows.size(); ++s) {
        for (size_t u = 0; u < t.rows[s].size(); ++u) {
            Word in = word_at(u, t.input_width, t.lattice->size());
            json row;
            row["state"] = s;
            json in_names = json::array();
            for (Value v : in) in_names.push_back(t.lattice->name(v));
            row["input"] = in_names;
            row["next"] = t.rows[s][u].first;
            json out_names = json::array();
            for (Value v : t.rows[s][u].second) out_names.push_back(t.lattice->name(v));
            row["output"] = out_names;
            rows.push_back(row);
        }
    }
    j["transitions"] = rows;
    return j.dump(2) + "\n";
}

MealyTable read_mealy_json(const std::string& text, LatticePtr lattice_hint) {
    json j = json::parse(text);
    if (j.value("format", "") != "circ-mealy-v1")
        throw std::invalid_argument("mealy: unsupported format tag");
    MealyTable t;
    if (lattice_hint) {
        t.lattice = std::move(lattice_hint);
    } else {
        std::vector<std::string> names = j.at("values").get<std::vector<std::string>>();
        std::vector<std::pair<int, int>> leq;
        // Collect the declared pairs and close them transitively later via
        // the lattice constructor's validation.
        std::map<std::string, int> idx;
        for (size_t k = 0; k < names.size(); ++k) idx[names[k]] = static_cast<int>(k);
        for (const auto& pr : j.at("value_order"))
            leq.push_back({idx.at(pr.at(0).get<std::string>()), idx.at(pr.at(1).get<std::string>())});
        t.lattice = std::make_shared<const Lattice>(names, leq);
    }
    t.input_width = j.at("inputs").get<int>();
    t.output_width = j.at("outputs").get<int>();
    t.state_names = j.at("states").get<std::vector<std::string>>();
    t.initial = j.at("initial").get<uint32_t>();
    const size_t n = t.state_names.size();
    const size_t n_inputs = word_count(t.input_width, t.lattice->size());
    t.rows.assign(n, std::vector<std::pair<uint32_t, Word>>(n_inputs, {0, {}}));
    std::vector<std::vector<char>> seen(n, std::vector<char>(n_inputs, 0));
    for (const auto& row : j.at("transitions")) {
        size_t s = row.at("state").get<size_t>();
        Word in;
        for (const auto& cell : row.at("input"))
            in.push_back(parse_value(*t.lattice, cell.get<std::string>(), "mealy"));
        size_t u = word_index(in, t.lattice->size());
        uint32_t next = row.at("next").get<uint32_t>();
        Word out;
        for (const auto& cell : row.at("output"))
            out.push_back(parse_value(*t.lattice, cell.get<std::string>(), "mealy"));
        if (s >= n || next >= n) throw std::invalid_argument("mealy: state out of range");
        t.rows[s][u] = {next, std::move(out)};
        seen[s][u] = 1;
    }
    for (size_t s = 0; s < n; ++s)
        for (size_t u = 0; u < n_inputs; ++u)
            if (!seen[s][u]) throw std::invalid_argument("mealy: missing transition row");
    if (j.contains("state_order") && !j.at("state_order").empty()) {
        t.order.assign(n * n, 0);
        for (size_t s = 0; s < n; ++s) t.order[s * n + s] = 1;
        for (const auto& pr : j.at("state_order"))
            t.order[pr.at(0).get<size_t>() * n + pr.at(1).get<size_t>()] = 1;
    }
    return t;
}

std::string write_table_csv(const TruthTable& t) {
    std::ostringstream os;
    os << "# circ table v1\n";
    for (int k = 0; k < t.inputs; ++k) os << (k ? "," : "") << "in" << k;
    for (int k = 0; k < t.outputs; ++k) os << (t.inputs + k ? "," : "") << "out" << k;
    os << "\n";
    for (size_t r = 0; r < t.rows.size(); ++r) {
        Word in = word_at(r, t.inputs, t.lattice->size());
        bool first = true;
        for (Value v : in) {
            if (!first) os << ",";
            os << t.lattice->name(v);
            first = false;
        }
        for (Value v : t.rows[r]) {
            if (!first) os << ",";
            os << t.lattice->name(v);
            first = false;
        }
        os << "\n";
    }
    return os.str();
}

TruthTable read_table_csv(const std::string& text, const LatticePtr& l) {
    std::istringstream is(text);
    std::string line;
    std::vector<std::vector<std::string>> rows;
    bool saw_header = false;
    int n_in = -1, n_out = -1;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto cells = split_csv_line(line);
        if (!saw_header) {
            saw_header = true;
            n_in = 0;
            n_out = 0;
            for (const auto& c : cells) {
                if (c.rfind("in", 0) == 0) ++n_in;
                else if (c.rfind("out", 0) == 0) ++n_out;
                else throw std::invalid_argument("table: header cells must be inN or outN");
            }
            continue;
        }
        rows.push_back(cells);
    }
    if (!saw_header) throw std::invalid_argument("table: missing header");
    TruthTable t;
    t.lattice = l;
    t.inputs = n_in;
    t.outputs = n_out;
    const size_t expect = word_count(n_in, l->size());
    if (rows.size() != expect)
        throw std::invalid_argument("table: expected " + std::to_string(expect) + " rows, got " +
                                    std::to_string(rows.size()));
    t.rows.assign(expect, {});
    for (const auto& cells : rows) {
        if (static_cast<int>(cells.size()) != n_in + n_out)
            throw std::invalid_argument("table: row width mismatch");
        Word in, out;
        for (int k = 0; k < n_in; ++k) in.push_back(parse_value(*l, cells[static_cast<size_t>(k)], "table"));
        for (int k = 0; k < n_out; ++k)
            out.push_back(parse_value(*l, cells[static_cast<size_t>(n_in + k)], "table"));
        size_t idx = word_index(in, l->size());
        if (!t.rows[idx].empty()) throw std::invalid_argument("table: duplicate input row");
        t.rows[idx] = std::move(out);
    }
    for (const auto& row : t.rows)
        if (row.empty()) throw std::invalid_argument("table: missing input row");
    return t;
}

RuleFile read_rule_file(const std::string& text, const Interpretation& interp) {
    auto defs = parse_circuits(text, interp);
    RuleFile rf;
    const CircuitDef* left = nullptr;
    const CircuitDef* right = nullptr;
    for (const auto& d : defs) {
        if (d.name == "left") left = &d;
        if (d.name == "right") right = &d;
    }
    if (!left || !right)
        throw std::invalid_argument("rule file must define circuits named 'left' and 'right'");
    if (left->term->inputs != right->term->inputs || left->term->outputs != right->term->outputs)
        throw std::invalid_argument("rule sides must share an interface");
    rf.name = defs.back().name;
    rf.left = left->term;
    rf.right = right->term;
    return rf;
}

InterpPtr read_interpretation_json(const std::string& text) {
    json j = json::parse(text);
    if (j.value("format", "") != "circ-interp-v1")
        throw std::invalid_argument("interpretation: unsupported format tag");
    std::vector<std::string> names = j.at("values").get<std::vector<std::string>>();
    std::map<std::string, int> idx;
    for (size_t k = 0; k < names.size(); ++k) idx[names[k]] = static_cast<int>(k);
    std::vector<std::pair<int, int>> leq;
    for (const auto& pr : j.at("leq"))
        leq.push_back({idx.at(pr.at(0).get<std::string>()), idx.at(pr.at(1).get<std::string>())});
    auto lattice = std::make_shared<const Lattice>(names, leq);

    std::vector<Primitive> prims;
    std::vector<std::vector<Word>> tables;
    for (const auto& p : j.at("primitives")) {
        Primitive prim;
        prim.name = p.at("name").get<std::string>();
        prim.arity = p.at("arity").get<int>();
        prim.coarity = p.at("coarity").get<int>();
        const size_t rows = word_count(prim.arity, lattice->size());
        const auto& tab = p.at("table");
        if (tab.size() != rows * static_cast<size_t>(prim.coarity))
            throw std::invalid_argument("interpretation: table size mismatch for '" + prim.name + "'");
        std::vector<Word> rows_out;
        for (size_t r = 0; r < rows; ++r) {
            Word out;
            for (int k = 0; k < prim.coarity; ++k)
                out.push_back(parse_value(*lattice, tab.at(r * static_cast<size_t>(prim.coarity) + static_cast<size_t>(k)).get<std::string>(),
                                          "interpretation"));
            rows_out.push_back(std::move(out));
        }
        prims.push_back(std::move(prim));
        tables.push_back(std::move(rows_out));
    }
    return std::make_shared<const Interpretation>(lattice, Signature(std::move(prims)), std::move(tables));
}

std::string write_interpretation_json(const Interpretation& i) {
    json j;
    j["format"] = "circ-interp-v1";
    j["values"] = i.lattice().names();
    json leq = json::array();
    for (int a = 0; a < i.lattice().size(); ++a)
        for (int b = 0; b < i.lattice().size(); ++b)
            if (a != b && i.lattice().leq(Value{a}, Value{b}))
                leq.push_back({i.lattice().name(Value{a}), i.lattice().name(Value{b})});
    j["leq"] = leq;
    json prims = json::array();
    for (int p = 0; p < i.signature().size(); ++p) {
        const Primitive& prim = i.signature().prim(p);
        json entry;
        entry["name"] = prim.name;
        entry["arity"] = prim.arity;
        entry["coarity"] = prim.coarity;
        json tab = json::array();
        for (const Word& row : i.table(p))
            for (Value v : row) tab.push_back(i.lattice().name(v));
        entry["table"] = tab;
        prims.push_back(entry);
    }
    j["primitives"] = prims;
    return j.dump(2) + "\n";
}

}  // namespace circ
