#include <benchmark/benchmark.h>

#include "teamsem/bisim.hpp"
#include "teamsem/fo.hpp"
#include "teamsem/hintikka.hpp"
#include "teamsem/kripke.hpp"
#include "teamsem/oracle.hpp"
#include "teamsem/semantics.hpp"

using namespace teamsem;

namespace {

KripkeModel bench_model(int worlds) {
  return random_model(0xbe9c4, worlds, 0.3, {"p", "q"});
}

void BM_EvalGeneral(benchmark::State& state) {
  KripkeModel m = bench_model(static_cast<int>(state.range(0)));
  Formula f = parse("~(<>p | []q) & (dep(p, q) -> E q)");
  semantics::EvalConfig cfg{.strategy = semantics::Strategy::General};
  Team t{m.all_worlds_mask() & 0x3f};
  for (auto _ : state) {
    semantics::BatchEvaluator ev(m, f, cfg);
    benchmark::DoNotOptimize(ev.eval(t));
  }
}
BENCHMARK(BM_EvalGeneral)->Arg(6)->Arg(10);

void BM_EvalFastpath(benchmark::State& state) {
  KripkeModel m = bench_model(static_cast<int>(state.range(0)));
  Formula f = parse("~(<>p | []q) & (dep(p, q) -> E q)");
  Team t{m.all_worlds_mask() & 0x3f};
  for (auto _ : state) {
    semantics::BatchEvaluator ev(m, f);
    benchmark::DoNotOptimize(ev.eval(t));
  }
}
BENCHMARK(BM_EvalFastpath)->Arg(6)->Arg(10)->Arg(16);

void BM_KTypes(benchmark::State& state) {
  KripkeModel m = bench_model(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(bisim::ktype_all(m, 4));
  }
}
BENCHMARK(BM_KTypes)->Arg(8)->Arg(16)->Arg(32);

void BM_HintikkaTeam(benchmark::State& state) {
  KripkeModel m = bench_model(6);
  Team t{0x15};
  for (auto _ : state) {
    benchmark::DoNotOptimize(hintikka::hintikka_team(m, t, static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_HintikkaTeam)->Arg(1)->Arg(2)->Arg(3);

void BM_ChiToFO(benchmark::State& state) {
  KripkeModel m = bench_model(5);
  Team t{0x7};
  for (auto _ : state) {
    benchmark::DoNotOptimize(fo::chi_to_fo(m, t, static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_ChiToFO)->Arg(1)->Arg(2);

void BM_EquivCheck(benchmark::State& state) {
  Formula a = parse("E p");
  Formula b = parse("inc(top ; p)");
  oracle::Bounds bounds;
  bounds.max_worlds = static_cast<int>(state.range(0));
  bounds.vars = {"p"};
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle::equiv_check(a, b, bounds));
  }
}
BENCHMARK(BM_EquivCheck)->Arg(2)->Arg(3);

}  // namespace

BENCHMARK_MAIN();
