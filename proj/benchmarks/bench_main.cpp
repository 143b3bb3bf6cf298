#include <benchmark/benchmark.h>

#include "accomp/ac.hpp"
#include "accomp/completion.hpp"
#include "accomp/critical_pairs.hpp"
#include "accomp/termination.hpp"
#include "accomp/wst.hpp"

using namespace accomp;

namespace {

struct Fixture {
  SymbolTable syms;
  VarPool vars;
  Trs rules;
  Term subject;

  Fixture() {
    WstProblem p = parse_wst(
        "(VAR x y)\n(THEORY (AC +))\n"
        "(RULES f(+(x,y)) -> +(f(x),f(y)) f(0) -> 0 +(x,0) -> x +(0,x) -> x)",
        syms, vars);
    rules = p.rules;
    subject = parse_term_text("f(+(f(+(0,f(0))),+(f(0),+(0,f(+(0,0))))))",
                              syms, vars);
  }
};

Fixture& fixture() {
  static Fixture f;
  return f;
}

void BM_FlattenCanonical(benchmark::State& state) {
  Fixture& f = fixture();
  for (auto _ : state)
    benchmark::DoNotOptimize(flatten_canonical(f.subject));
}
BENCHMARK(BM_FlattenCanonical);

void BM_AcMatch(benchmark::State& state) {
  Fixture& f = fixture();
  Term pattern = parse_term_text("+(x,+(0,y))", f.syms, f.vars);
  Term subject = parse_term_text("+(0,+(f(0),+(0,+(f(0),f(0)))))", f.syms, f.vars);
  for (auto _ : state)
    benchmark::DoNotOptimize(ac_match(pattern, subject));
}
BENCHMARK(BM_AcMatch);

void BM_NormalForm(benchmark::State& state) {
  Fixture& f = fixture();
  RelationKind kind = state.range(0) == 0   ? RelationKind::plain
                      : state.range(0) == 1 ? RelationKind::ps
                                            : RelationKind::modulo;
  for (auto _ : state)
    benchmark::DoNotOptimize(normal_form(f.subject, f.rules, kind));
}
BENCHMARK(BM_NormalForm)->Arg(0)->Arg(1)->Arg(2);

void BM_CriticalPairs(benchmark::State& state) {
  Fixture& f = fixture();
  for (auto _ : state) {
    benchmark::DoNotOptimize(critical_pairs(f.rules));
    benchmark::DoNotOptimize(cp_pm(f.rules));
  }
}
BENCHMARK(BM_CriticalPairs);

void BM_PolySearch(benchmark::State& state) {
  Fixture& f = fixture();
  for (auto _ : state)
    benchmark::DoNotOptimize(poly_search(f.rules, 2));
}
BENCHMARK(BM_PolySearch);

void BM_CompleteFourRules(benchmark::State& state) {
  SymbolTable syms;
  VarPool vars;
  WstProblem p = parse_wst(
      "(VAR x y)\n(THEORY (AC +))\n"
      "(RULES f(+(x,y)) == +(f(x),f(y)) f(0) == 0 +(x,0) == x)",
      syms, vars);
  for (auto _ : state) {
    PolySearchOracle oracle(2);
    CompletionEngine engine(EngineConfig{}, oracle);
    benchmark::DoNotOptimize(engine.run(p.equations));
  }
}
BENCHMARK(BM_CompleteFourRules);

}  // namespace

BENCHMARK_MAIN();
