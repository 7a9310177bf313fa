#include <string>

#include <benchmark/benchmark.h>

#include "bbpa/bbpa.hpp"

using namespace bbpa;

namespace {

std::string expn(unsigned n)
{
    std::string s = "vars";
    for (unsigned i = 1; i <= n; ++i) s += " A" + std::to_string(i);
    s += "\nA1 a ->\n";
    for (unsigned i = 1; i < n; ++i) {
        s += "A" + std::to_string(i + 1) + " a -> A" + std::to_string(i) + " A" + std::to_string(i) + "\n";
    }
    return s;
}

const char* kFb = "vars A B C E F_B FBA\n"
                  "A a ->\nB b ->\nC c ->\nE e ->\n"
                  "F_B tau ->\nF_B f1 ->\n"
                  "A f1 -> FBA\nB f1 -> B\nC f1 -> E\n"
                  "FBA a ->\nFBA f1 -> FBA\nFBA f2 ->\nA f2 -> F_B\n";

void BM_Norms(benchmark::State& state)
{
    BpaSystem g = parse_system(expn(static_cast<unsigned>(state.range(0))));
    for (auto _ : state) benchmark::DoNotOptimize(compute_norms(g));
}
BENCHMARK(BM_Norms)->DenseRange(10, 60, 10);

void BM_CheckConsistency(benchmark::State& state)
{
    unsigned n = static_cast<unsigned>(state.range(0));
    BpaSystem g = parse_system(expn(n));
    Transducer t = Transducer::identity(n);
    for (auto _ : state) benchmark::DoNotOptimize(check_consistency(t, g));
}
BENCHMARK(BM_CheckConsistency)->DenseRange(2, 10, 2);

void BM_Translate(benchmark::State& state)
{
    BpaSystem g = parse_system(kFb);
    Transducer t = synthesize(g).transducer;
    VarString s;
    for (std::int64_t i = 0; i < state.range(0); ++i) s.push_back(Var{static_cast<std::uint32_t>((i * 7) % 6)});
    for (auto _ : state) benchmark::DoNotOptimize(translate_output(t, s));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Translate)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

void BM_Synthesize(benchmark::State& state)
{
    BpaSystem g = parse_system(kFb);
    for (auto _ : state) benchmark::DoNotOptimize(synthesize(g));
}
BENCHMARK(BM_Synthesize)->Unit(benchmark::kMillisecond);

void BM_Distinguish(benchmark::State& state)
{
    BpaSystem g = parse_system(kFb);
    VarString l = parse_string(g, "F_B A A C A B C A B");
    VarString r = parse_string(g, "A A C A B C A B");
    unsigned d = static_cast<unsigned>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(distinguish(g, l, r, {}, GameBounds{d, d / 2, 2 * d}));
}
BENCHMARK(BM_Distinguish)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

} // namespace
BENCHMARK_MAIN();
