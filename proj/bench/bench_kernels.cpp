#include "cqsim/datagen.hpp"
#include "cqsim/empirical.hpp"
#include "cqsim/ensemble.hpp"
#include "cqsim/similarity.hpp"

#include <benchmark/benchmark.h>

using namespace cqsim;

namespace {

const DatasetBundle& t_data() {
    static const DatasetBundle b = gen_t_ensemble(0);
    return b;
}

const PseudoMatrix& t_pseudo() {
    static const PseudoMatrix u = rank_transform(t_data().scores, Execution::serial);
    return u;
}

Execution exec_of(const benchmark::State& state) {
    return state.range(0) ? Execution::parallel : Execution::serial;
}

void BM_RankTransform(benchmark::State& state) {
    const auto& y = t_data().scores;
    for (auto _ : state)
        benchmark::DoNotOptimize(rank_transform(y, exec_of(state)));
}

void BM_BuildSimilarity(benchmark::State& state) {
    const auto& u = t_pseudo();
    const auto m = static_cast<Measure>(state.range(1));
    for (auto _ : state)
        benchmark::DoNotOptimize(build_similarity(u, m, QuadrantLevel(0.75), exec_of(state)));
    state.SetLabel(std::string(to_string(m)));
}

void BM_CombineScores(benchmark::State& state) {
    const auto& u = t_pseudo();
    const EnsembleSpec spec{WithinOp::mean, AcrossOp::max, t_data().detector_cluster_labels};
    for (auto _ : state)
        benchmark::DoNotOptimize(combine_scores(u, spec, exec_of(state)));
}

} // namespace

BENCHMARK(BM_RankTransform)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BuildSimilarity)
    ->ArgNames({"parallel", "measure"})
    ->ArgsProduct({{0, 1},
                   {static_cast<long>(Measure::theta_a), static_cast<long>(Measure::ucorr),
                    static_cast<long>(Measure::chi)}})
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CombineScores)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
