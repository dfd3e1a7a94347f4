#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "circ/dpo.hpp"
#include "circ/formats.hpp"
#include "circ/lang.hpp"
#include "circ/opsem.hpp"
#include "circ/parteval.hpp"
#include "circ/synth.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDifferent = 1;
constexpr int kExitUserError = 2;
constexpr int kExitBudget = 3;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

circ::InterpPtr load_interp(const std::string& path) {
    if (path.empty()) return circ::belnap();
    return circ::read_interpretation_json(slurp(path));
}

std::vector<std::string> split_values(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

int run_step_repl(const circ::CircuitDef& def, const circ::Interpretation& interp) {
    using namespace circ;
    MealyForm mf = to_mealy_form(def.term, interp);
    MealyForm current = mf;
    const Lattice& l = interp.lattice();
    std::cout << "# " << def.name << ": " << def.term->inputs << " inputs ("
              << def.term->outputs << " outputs); enter value names per cycle, :state, :reset or :quit\n";
    std::string line;
    while (std::getline(std::cin, line)) {
        if (line == ":quit" || line == ":q") break;
        if (line == ":state") {
            std::cout << "state " << show_word(l, current.state) << "\n";
            continue;
        }
        if (line == ":reset") {
            current = mf;
            std::cout << "reset\n";
            continue;
        }
        auto cells = split_values(line);
        if (cells.empty()) continue;
        if (static_cast<int>(cells.size()) != def.term->inputs) {
            std::cout << "error: expected " << def.term->inputs << " values\n";
            continue;
        }
        Word in;
        bool ok = true;
        for (const auto& c : cells) {
            auto v = l.value_of(c);
            if (!v) {
                std::cout << "error: unknown value '" << c << "'\n";
                ok = false;
                break;
            }
            in.push_back(*v);
        }
        if (!ok) continue;
        auto [out, next] = productivity_step(current, in, interp);
        current = std::move(next);
        std::cout << show_word(l, out) << "  state " << show_word(l, current.state) << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace circ;
    CLI::App app{"three-way semantics toolkit for synchronous circuits"};
    app.require_subcommand(1);

    std::string interp_path;
    app.add_option("--interp", interp_path, "interpretation description file (defaults to the built-in four-valued one)");

    // --- eval ---------------------------------------------------------------
    auto* eval_cmd = app.add_subcommand("eval", "run a circuit over a waveform file");
    std::string eval_file, eval_inputs, eval_circuit;
    eval_cmd->add_option("file", eval_file, "circuit source")->required();
    eval_cmd->add_option("--inputs", eval_inputs, "input waveform CSV")->required();
    eval_cmd->add_option("--circuit", eval_circuit, "circuit name (default: last in file)");

    // --- step ----------------------------------------------------------------
    auto* step_cmd = app.add_subcommand("step", "cycle-by-cycle interactive stepping");
    std::string step_file, step_circuit;
    step_cmd->add_option("file", step_file, "circuit source")->required();
    step_cmd->add_option("--circuit", step_circuit, "circuit name");

    // --- equiv ----------------------------------------------------------------
    auto* equiv_cmd = app.add_subcommand("equiv", "decide observational equivalence of two circuits");
    std::string equiv_a, equiv_b;
    bool equiv_exhaustive = false;
    size_t equiv_budget = 1000000;
    equiv_cmd->add_option("a", equiv_a, "first circuit file")->required();
    equiv_cmd->add_option("b", equiv_b, "second circuit file")->required();
    equiv_cmd->add_flag("--exhaustive", equiv_exhaustive, "compare runs on every waveform up to the state bound");
    equiv_cmd->add_option("--budget", equiv_budget, "work budget");

    // --- mealy ----------------------------------------------------------------
    auto* mealy_cmd = app.add_subcommand("mealy", "translate a circuit to its reachable machine");
    std::string mealy_file, mealy_circuit;
    bool mealy_json = false;
    bool mealy_minimize = false;
    mealy_cmd->add_option("file", mealy_file, "circuit source")->required();
    mealy_cmd->add_flag("--json", mealy_json, "emit the machine as JSON");
    mealy_cmd->add_flag("--minimize", mealy_minimize, "quotient by bisimilarity first");
    mealy_cmd->add_option("--circuit", mealy_circuit, "circuit name");

    // --- synth ----------------------------------------------------------------
    auto* synth_cmd = app.add_subcommand("synth", "synthesize a circuit from a table or machine");
    std::string synth_file;
    synth_cmd->add_option("file", synth_file, "truth table CSV or machine JSON")->required();

    // --- normalize --------------------------------------------------------------
    auto* norm_cmd = app.add_subcommand("normalize", "rewrite a circuit into register-plus-core form");
    std::string norm_file, norm_circuit;
    bool norm_mealy = false;
    norm_cmd->add_option("file", norm_file, "circuit source")->required();
    norm_cmd->add_flag("--mealy-form", norm_mealy, "register word feeding a loop-free combinational core");
    norm_cmd->add_option("--circuit", norm_circuit, "circuit name");

    // --- graph --------------------------------------------------------------
    auto* graph_cmd = app.add_subcommand("graph", "export the circuit's hypergraph");
    std::string graph_file, graph_check, graph_circuit;
    bool graph_dot = false;
    graph_cmd->add_option("file", graph_file, "circuit source")->required();
    graph_cmd->add_flag("--dot", graph_dot, "emit graphviz");
    graph_cmd->add_option("--check", graph_check, "validator: pm, plm or ma");
    graph_cmd->add_option("--circuit", graph_circuit, "circuit name");

    // --- rewrite --------------------------------------------------------------
    auto* rw_cmd = app.add_subcommand("rewrite", "apply a rewrite rule by double pushout");
    std::string rw_file, rw_rules, rw_mode = "traced", rw_circuit;
    bool rw_all = false;
    size_t rw_budget = 10000;
    rw_cmd->add_option("file", rw_file, "host circuit source")->required();
    rw_cmd->add_option("--rules", rw_rules, "rule file (circuits named left and right)")->required();
    rw_cmd->add_option("--mode", rw_mode, "smc | traced | traced-comonoid");
    rw_cmd->add_flag("--all", rw_all, "print every surviving rewrite, not just the first");
    rw_cmd->add_option("--budget", rw_budget, "complement enumeration budget");
    rw_cmd->add_option("--circuit", rw_circuit, "circuit name");

    // --- parteval --------------------------------------------------------------
    auto* pe_cmd = app.add_subcommand("parteval", "partially evaluate with fixed or uncertain inputs");
    std::string pe_file, pe_circuit;
    std::vector<std::string> pe_fix;
    pe_cmd->add_option("file", pe_file, "circuit source")->required();
    pe_cmd->add_option("--fix", pe_fix, "wire=value or wire={v1,v2,...}");
    pe_cmd->add_option("--circuit", pe_circuit, "circuit name");

    CLI11_PARSE(app, argc, argv);

    try {
        auto interp = load_interp(interp_path);
        const Lattice& l = interp->lattice();

        if (*eval_cmd) {
            auto def = parse_circuit(slurp(eval_file), *interp, eval_circuit);
            Waveform in = read_waveform_csv(slurp(eval_inputs), l);
            Waveform out = run_waveform(def.term, in, *interp);
            std::cout << write_waveform_csv(out, l, def.output_names);
            return kExitOk;
        }
        if (*step_cmd) {
            auto def = parse_circuit(slurp(step_file), *interp, step_circuit);
            return run_step_repl(def, *interp);
        }
        if (*equiv_cmd) {
            auto da = parse_circuit(slurp(equiv_a), *interp);
            auto db = parse_circuit(slurp(equiv_b), *interp);
            EquivResult r = obs_equiv(da.term, db.term,
                                      equiv_exhaustive ? EquivMode::Exhaustive : EquivMode::Oracle, interp,
                                      equiv_budget);
            if (r.equivalent) {
                std::cout << "equivalent\n";
                return kExitOk;
            }
            std::cout << "inequivalent\n";
            if (r.witness) std::cout << write_waveform_csv(*r.witness, l, da.input_names);
            return kExitDifferent;
        }
        if (*mealy_cmd) {
            auto def = parse_circuit(slurp(mealy_file), *interp, mealy_circuit);
            auto machine = circuit_to_mealy(def.term, interp);
            MealyTable table = mealy_minimize ? minimize(machine) : reachable(machine).table;
            if (mealy_json) {
                std::cout << write_mealy_json(table);
            } else {
                std::cout << "states " << table.rows.size() << ", inputs " << table.input_width
                          << ", outputs " << table.output_width << "\n";
            }
            return kExitOk;
        }
        if (*synth_cmd) {
            std::string text = slurp(synth_file);
            TermPtr term;
            if (text.find("circ-mealy-v1") != std::string::npos) {
                MealyTable t = read_mealy_json(text);
                term = mealy_to_circuit(t.machine());
            } else {
                TruthTable t = read_table_csv(text, interp->lattice_ptr());
                term = normalised_circuit(t);
            }
            std::cout << print_circuit(term, "synthesized", *interp);
            return kExitOk;
        }
        if (*norm_cmd) {
            auto def = parse_circuit(slurp(norm_file), *interp, norm_circuit);
            MealyForm mf = to_mealy_form(def.term, *interp);
            std::cout << print_circuit(mf.to_term(), def.name + "_mealy_form", *interp);
            return kExitOk;
        }
        if (*graph_cmd) {
            auto def = parse_circuit(slurp(graph_file), *interp, graph_circuit);
            auto cospan = term_to_cospan(def.term);
            if (!graph_check.empty()) {
                ValidatorReport rep;
                if (graph_check == "pm") rep = check_partial_monogamous(cospan);
                else if (graph_check == "plm") rep = check_partial_left_monogamous(cospan);
                else if (graph_check == "ma") rep = check_monogamous_acyclic(cospan);
                else throw std::runtime_error("unknown validator '" + graph_check + "'");
                std::cout << "# check " << graph_check << ": " << (rep.ok ? "pass" : "fail " + rep.detail)
                          << "\n";
            }
            if (graph_dot || graph_check.empty()) std::cout << to_dot(cospan, &l);
            return kExitOk;
        }
        if (*rw_cmd) {
            auto def = parse_circuit(slurp(rw_file), *interp, rw_circuit);
            RuleFile rf = read_rule_file(slurp(rw_rules), *interp);
            RewriteMode mode;
            if (rw_mode == "smc") mode = RewriteMode::Smc;
            else if (rw_mode == "traced") mode = RewriteMode::Traced;
            else if (rw_mode == "traced-comonoid") mode = RewriteMode::TracedComonoid;
            else throw std::runtime_error("unknown mode '" + rw_mode + "'");
            DpoRule rule = make_rule(rf.left, rf.right);
            auto results = rewrite_all(rule, term_to_cospan(def.term), mode, rw_budget);
            if (results.empty()) {
                std::cout << "# no rewrites\n";
                return kExitDifferent;
            }
            int count = 0;
            for (const auto& r : results) {
                TermPtr t = extract_term(r.result, ExtractMode::Frobenius);
                std::cout << print_circuit(t, def.name + "_rw" + std::to_string(count), *interp);
                ++count;
                if (!rw_all) break;
            }
            return kExitOk;
        }
        if (*pe_cmd) {
            auto def = parse_circuit(slurp(pe_file), *interp, pe_circuit);
            std::map<int, Binding> binds;
            for (const auto& fix : pe_fix) {
                auto eq = fix.find('=');
                if (eq == std::string::npos) throw std::runtime_error("--fix expects wire=value");
                std::string wire = fix.substr(0, eq);
                std::string rhs = fix.substr(eq + 1);
                int idx = -1;
                for (size_t k = 0; k < def.input_names.size(); ++k)
                    if (def.input_names[k] == wire) idx = static_cast<int>(k);
                if (idx < 0) throw std::runtime_error("no input wire named '" + wire + "'");
                if (!rhs.empty() && rhs.front() == '{') {
                    if (rhs.back() != '}') throw std::runtime_error("unterminated alternative list");
                    std::vector<Value> alts;
                    for (const auto& cell : split_values(rhs.substr(1, rhs.size() - 2))) {
                        auto v = l.value_of(cell);
                        if (!v) throw std::runtime_error("unknown value '" + cell + "'");
                        alts.push_back(*v);
                    }
                    if (alts.empty()) throw std::runtime_error("empty alternative list");
                    binds[idx] = Binding{alts};
                } else {
                    auto v = l.value_of(rhs);
                    if (!v) throw std::runtime_error("unknown value '" + rhs + "'");
                    binds[idx] = Binding{*v};
                }
            }
            auto res = partial_evaluate(def.term, binds, *interp);
            if (!res.complete) std::cout << "# warning: step budget exhausted; best-effort result\n";
            std::cout << print_circuit(res.term, def.name + "_pe", *interp);
            return kExitOk;
        }
    } catch (const circ::budget_error& e) {
        std::cerr << "budget: " << e.what() << "\n";
        return kExitBudget;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUserError;
    }
    return kExitUserError;
}
