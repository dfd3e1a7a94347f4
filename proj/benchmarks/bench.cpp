#include <benchmark/benchmark.h>

#include "circ/dpo.hpp"
#include "circ/opsem.hpp"
#include "circ/parteval.hpp"
#include "circ/synth.hpp"

using namespace circ;

namespace {

TermPtr latch() {
    TermPtr nor2 = compose(prim(belnap()->signature(), "or"), prim(belnap()->signature(), "not"));
    TermPtr stage1 = compose(tensor(symmetry(1, 1), identity(1)),
                             tensor(compose(compose(nor2, delay(1)), circ::fork()), identity(1)));
    TermPtr stage2 = tensor(identity(1), compose(nor2, circ::fork()));
    TermPtr stage3 = tensor(symmetry(1, 1), identity(1));
    return trace(1, compose(compose(stage1, stage2), stage3));
}

TruthTable ternary_majority() {
    auto i = belnap();
    auto l = i->lattice_ptr();
    int and_id = *i->signature().find("and");
    int or_id = *i->signature().find("or");
    auto land = [&](Value a, Value b) { return i->apply(and_id, {a, b})[0]; };
    auto lor = [&](Value a, Value b) { return i->apply(or_id, {a, b})[0]; };
    return tabulate(l, 3, 1, [&](const Word& in) {
        return Word{lor(lor(land(in[0], in[1]), land(in[1], in[2])), land(in[0], in[2]))};
    });
}

void bm_productivity_step(benchmark::State& state) {
    auto i = belnap();
    MealyForm mf = to_mealy_form(latch(), *i);
    Word in = {kF, kT};
    for (auto _ : state) {
        auto [out, next] = productivity_step(mf, in, *i);
        benchmark::DoNotOptimize(out);
        mf = std::move(next);
    }
}
BENCHMARK(bm_productivity_step);

void bm_machine_step(benchmark::State& state) {
    auto m = circuit_to_mealy(latch(), belnap());
    auto s = m.initial();
    Word in = {kF, kT};
    for (auto _ : state) {
        auto [next, out] = m.step(s, in);
        benchmark::DoNotOptimize(out);
        s = next;
    }
}
BENCHMARK(bm_machine_step);

void bm_bisimilarity(benchmark::State& state) {
    auto i = belnap();
    auto a = circuit_to_mealy(latch(), i);
    auto b = circuit_to_mealy(latch(), i);
    for (auto _ : state) benchmark::DoNotOptimize(bisimilar(a, b));
}
BENCHMARK(bm_bisimilarity);

void bm_express_majority(benchmark::State& state) {
    TruthTable t = ternary_majority();
    for (auto _ : state) benchmark::DoNotOptimize(belnap_express(t));
}
BENCHMARK(bm_express_majority);

void bm_translate_and_extract(benchmark::State& state) {
    TermPtr t = latch();
    for (auto _ : state) {
        auto c = term_to_cospan(t);
        benchmark::DoNotOptimize(extract_term(c, ExtractMode::TracedComonoid));
    }
}
BENCHMARK(bm_translate_and_extract);

void bm_find_rewrites(benchmark::State& state) {
    DpoRule rule = make_rule(prim("e1", 1, 1), prim("e2", 1, 1));
    TermPtr host_term = identity(1);
    for (int k = 0; k < 4; ++k) host_term = compose(host_term, prim(k % 2 ? "e1" : "e3", 1, 1));
    auto host = term_to_cospan(host_term);
    for (auto _ : state) benchmark::DoNotOptimize(rewrite_all(rule, host, RewriteMode::Traced));
}
BENCHMARK(bm_find_rewrites);

void bm_partial_evaluate(benchmark::State& state) {
    auto i = belnap();
    TermPtr b = tensor(identity(1),
                       tensor(compose(circ::fork(), tensor(prim(i->signature(), "not"), identity(1))), identity(1)));
    b = compose(b, tensor(identity(1), tensor(prim(i->signature(), "or"), identity(1))));
    b = compose(b, tensor(prim(i->signature(), "or"), identity(1)));
    b = compose(b, prim(i->signature(), "and"));
    b = compose(b, compose(circ::fork(), tensor(delay(1), identity(1))));
    TermPtr t = trace(1, b);
    std::map<int, Binding> binds{{0, Binding{std::vector<Value>{kT, kF}}}};
    for (auto _ : state) benchmark::DoNotOptimize(partial_evaluate(t, binds, *i));
}
BENCHMARK(bm_partial_evaluate);

}  // namespace

BENCHMARK_MAIN();
