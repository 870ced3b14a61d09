#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "skewlab/config.hpp"
#include "skewlab/fk.hpp"
#include "skewlab/measure.hpp"
#include "skewlab/report.hpp"
#include "skewlab/word.hpp"

namespace {

using namespace skewlab;

const ExperimentConfig& ref_cfg() {
    static ExperimentConfig cfg = parse_config(reference_config_text());
    return cfg;
}

// stage prefix shared by the heavier benchmarks, built once
const std::vector<Stage>& ref_stages(int max_stage) {
    static std::vector<Stage> stages =
        build_schedule(ref_cfg(), ref_cfg().seed, 8);
    (void)max_stage;
    return stages;
}

Word deep_word(int levels) {
    Word w = Word::literal("2");
    for (int i = 0; i < levels; ++i)
        w = Word::concat(Word::power(w, 2), Word::literal("1"));
    return w;
}

void BM_SymbolAt(benchmark::State& state) {
    PeriodicPoint p(deep_word(static_cast<int>(state.range(0))));
    std::int64_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(p.symbol_at(i));
        i += 7919;
    }
}
BENCHMARK(BM_SymbolAt)->Arg(12)->Arg(20);

void BM_WordLogDerivative(benchmark::State& state) {
    const ExperimentConfig& cfg = ref_cfg();
    MapFamily fam = make_family(cfg);
    Word w = deep_word(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(word_log_derivative(fam, w, 0.123));
}
BENCHMARK(BM_WordLogDerivative)->Arg(10)->Arg(14);

void BM_OrbitGeneration(benchmark::State& state) {
    const std::vector<Stage>& stages = ref_stages(8);
    const ExperimentConfig& cfg = ref_cfg();
    MapFamily fam = make_family(cfg);
    const Stage& s = stages[static_cast<std::size_t>(state.range(0))];
    for (auto _ : state)
        benchmark::DoNotOptimize(orbit_fiber_points(fam, s));
}
BENCHMARK(BM_OrbitGeneration)->Arg(4)->Arg(8);

void BM_BuildStrips(benchmark::State& state) {
    const std::vector<Stage>& stages = ref_stages(8);
    const ExperimentConfig& cfg = ref_cfg();
    MapFamily fam = make_family(cfg);
    int n = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(build_strips(fam, stages, n, 0.5));
}
BENCHMARK(BM_BuildStrips)->Arg(3)->Arg(6);

void BM_MaxFitDP(benchmark::State& state) {
    const std::vector<Stage>& stages = ref_stages(8);
    MatchProblem p{PeriodicPoint(stages[2].xi), PeriodicPoint(stages[3].xi),
                   state.range(0), 2, 20000};
    for (auto _ : state) benchmark::DoNotOptimize(max_fit(p));
}
BENCHMARK(BM_MaxFitDP)->Arg(105)->Arg(420);

}  // namespace

BENCHMARK_MAIN();
