// Acceptance-game construction and solving, serial against OpenMP move generation.

#include <benchmark/benchmark.h>

#include <random>

#include "cak/constructions.hpp"
#include "cak/samples.hpp"

using namespace cak;

namespace {

const Automaton& automaton() {
    static Automaton a = compile_mu(
        mu::parse("nu x . mu y . (p and lift dia(x) and lift box(nu z . lift dia(z) or p)) or (not p and lift dia(y))"),
        builtin_liftings(powerset_functor()));
    return a;
}

void run(benchmark::State& state, bool parallel) {
    std::mt19937_64 rng(3);
    auto F = powerset_functor();
    auto L = builtin_liftings(F);
    auto m = random_model(rng, F, static_cast<std::size_t>(state.range(0)), {"p"});
    GameOptions opt;
    opt.parallel = parallel;
    for (auto _ : state) benchmark::DoNotOptimize(accepting_points(automaton(), m, GameMode::Full, L, opt));
}

void BM_GameSerial(benchmark::State& s) { run(s, false); }
void BM_GameParallel(benchmark::State& s) { run(s, true); }

}  // namespace

BENCHMARK(BM_GameSerial)->Arg(4)->Arg(8)->Arg(12);
BENCHMARK(BM_GameParallel)->Arg(4)->Arg(8)->Arg(12);

BENCHMARK_MAIN();
