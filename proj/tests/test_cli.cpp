#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

// End-to-end checks driving the installed binary.

#ifndef CIRC_CLI_PATH
#define CIRC_CLI_PATH "circ"
#endif

namespace {

struct RunResult {
    int exit_code;
    std::string output;
};

void shell(const std::string& cmd) {
    int rc = std::system(cmd.c_str());
    (void)rc;
}

RunResult run_cli(const std::string& args, const std::string& stdin_text = "") {
    std::string dir = "/tmp/circ_cli_test";
    shell("mkdir -p " + dir);
    std::string cmd = std::string(CIRC_CLI_PATH) + " " + args + " >" + dir + "/out.txt 2>&1";
    if (!stdin_text.empty()) {
        std::ofstream in(dir + "/stdin.txt");
        in << stdin_text;
        in.close();
        cmd = std::string(CIRC_CLI_PATH) + " " + args + " <" + dir + "/stdin.txt >" + dir + "/out.txt 2>&1";
    }
    int rc = std::system(cmd.c_str());
    std::ifstream out(dir + "/out.txt");
    std::ostringstream os;
    os << out.rdbuf();
    return {WEXITSTATUS(rc), os.str()};
}

std::string write_file(const std::string& name, const std::string& text) {
    std::string dir = "/tmp/circ_cli_test";
    shell("mkdir -p " + dir);
    std::string path = dir + "/" + name;
    std::ofstream f(path);
    f << text;
    return path;
}

const char* kLatch = R"(circuit latch(r, s) -> (q, nq) {
  feedback fb
  q = delay(not(or(r, fb)))
  nq = not(or(q, s))
  fb = nq
}
)";

const char* kSchedule = "r,s\nf,t\nf,f\nt,f\nf,f\n";

}  // namespace

TEST_CASE("cli eval reproduces the latch run") {
    auto latch = write_file("latch.circ", kLatch);
    auto sched = write_file("sched.csv", kSchedule);
    auto r = run_cli("eval " + latch + " --inputs " + sched);
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("bot,f\nt,f\nt,f\nf,t\n") != std::string::npos);
}

TEST_CASE("cli step agrees with eval") {
    auto latch = write_file("latch.circ", kLatch);
    auto r = run_cli("step " + latch, "f,t\nf,f\nt,f\nf,f\n:quit\n");
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("bot,f") != std::string::npos);
    CHECK(r.output.find("f,t") != std::string::npos);

    SUBCASE("state and reset commands") {
        auto r2 = run_cli("step " + latch, "f,t\n:state\n:reset\n:state\n:quit\n");
        REQUIRE(r2.exit_code == 0);
        CHECK(r2.output.find("state t") != std::string::npos);
        CHECK(r2.output.find("state bot") != std::string::npos);
    }
}

TEST_CASE("cli equiv") {
    auto latch = write_file("latch.circ", kLatch);
    auto r = run_cli("equiv " + latch + " " + latch);
    CHECK(r.exit_code == 0);

    auto other = write_file("other.circ", "circuit c(a, b) -> (x, y) {\n  x = and(a, b)\n  y = or(a, b)\n}\n");
    auto r2 = run_cli("equiv " + latch + " " + other);
    CHECK(r2.exit_code == 1);
    CHECK(r2.output.find("inequivalent") != std::string::npos);
}

TEST_CASE("cli mealy json and synth round trip") {
    auto latch = write_file("latch.circ", kLatch);
    auto r = run_cli("mealy " + latch + " --json");
    REQUIRE(r.exit_code == 0);
    auto machine = write_file("latch_mealy.json", r.output);
    auto s = run_cli("synth " + machine);
    REQUIRE(s.exit_code == 0);
    auto resynth = write_file("latch_resynth.circ", s.output);
    auto eq = run_cli("equiv " + latch + " " + resynth);
    CHECK(eq.exit_code == 0);
}

TEST_CASE("cli synth from a truth table") {
    auto table = write_file("join.csv",
                            "in0,in1,out0\n"
                            "bot,bot,bot\nbot,f,f\nbot,t,t\nbot,top,top\n"
                            "f,bot,f\nf,f,f\nf,t,top\nf,top,top\n"
                            "t,bot,t\nt,f,top\nt,t,t\nt,top,top\n"
                            "top,bot,top\ntop,f,top\ntop,t,top\ntop,top,top\n");
    auto r = run_cli("synth " + table);
    REQUIRE(r.exit_code == 0);
    auto circ_file = write_file("join_synth.circ", r.output);
    auto ref = write_file("join_ref.circ", "circuit j(a, b) -> (z) {\n  z = join(a, b)\n}\n");
    auto eq = run_cli("equiv " + circ_file + " " + ref);
    CHECK(eq.exit_code == 0);
}

TEST_CASE("cli graph export and validators") {
    auto latch = write_file("latch.circ", kLatch);
    auto r = run_cli("graph " + latch + " --dot --check plm");
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("digraph") != std::string::npos);
    CHECK(r.output.find("check plm: pass") != std::string::npos);
}

TEST_CASE("cli rewrite") {
    auto host = write_file("host.circ",
                           "circuit host(a) -> (z) {\n  z = e3(e1(e3(a)))\n}\n");
    auto rules = write_file("swap.rule",
                            "circuit left(a) -> (z) {\n  z = e1(a)\n}\n"
                            "circuit right(a) -> (z) {\n  z = e2(a)\n}\n");
    auto interp = write_file("sig.json", R"({
  "format": "circ-interp-v1",
  "values": ["bot", "f", "t", "top"],
  "leq": [["bot","f"],["bot","t"],["bot","top"],["f","top"],["t","top"]],
  "primitives": [
    {"name":"e1","arity":1,"coarity":1,"table":["bot","f","t","top"]},
    {"name":"e2","arity":1,"coarity":1,"table":["bot","f","t","top"]},
    {"name":"e3","arity":1,"coarity":1,"table":["bot","f","t","top"]}
  ]
})");
    auto r = run_cli("--interp " + interp + " rewrite " + host + " --rules " + rules + " --mode traced");
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("e2(") != std::string::npos);
    CHECK(r.output.find("e1(") == std::string::npos);
}

TEST_CASE("cli parteval") {
    auto guard = write_file("guard.circ", R"(circuit guard(a, b) -> (z) {
  feedback fb
  or1 = or(not(a), a)
  z = and(or(fb, or1), b)
  fb = delay(z)
}
)");
    auto r = run_cli("parteval " + guard + " --fix a={t,f}");
    REQUIRE(r.exit_code == 0);
    // The result is the identity on b: one input, no gates.
    CHECK(r.output.find("and(") == std::string::npos);
    CHECK(r.output.find("or(") == std::string::npos);
    CHECK(r.output.find("delay(") == std::string::npos);
}

TEST_CASE("cli error paths") {
    auto bad = write_file("bad.circ", "circuit c(a) -> (z) { z = nope(a) }");
    auto r = run_cli("eval " + bad + " --inputs /nonexistent.csv");
    CHECK(r.exit_code == 2);
    auto latch = write_file("latch.circ", kLatch);
    auto r2 = run_cli("equiv " + latch + " " + latch + " --exhaustive --budget 10");
    CHECK(r2.exit_code == 3);
}
