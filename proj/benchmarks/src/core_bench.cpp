#include <random>

#include <benchmark/benchmark.h>

#include "tseval/embedding.hpp"
#include "tseval/evaluation.hpp"
#include "tseval/learners.hpp"
#include "tseval/splitters.hpp"
#include "tseval/stationarity.hpp"
#include "tseval/synthetic.hpp"

namespace {

tseval::TimeSeries s1_series(std::size_t length) {
    tseval::DgpSpec spec;
    spec.length = length;
    return tseval::simulate_trial(spec, 0, 42).series;
}

void BM_LassoFit(benchmark::State& state) {
    const auto data = tseval::embed(s1_series(static_cast<std::size_t>(state.range(0))), 5);
    const tseval::LearnerSpec spec;
    for (auto _ : state) benchmark::DoNotOptimize(tseval::fit(spec, data.predictors, data.targets));
}
BENCHMARK(BM_LassoFit)->Arg(140)->Arg(1000)->Arg(10000);

void BM_KnnPredict(benchmark::State& state) {
    const auto data = tseval::embed(s1_series(static_cast<std::size_t>(state.range(0))), 5);
    tseval::LearnerSpec spec;
    spec.kind = tseval::LearnerKind::Knn;
    const auto model = tseval::fit(spec, data.predictors, data.targets);
    for (auto _ : state) benchmark::DoNotOptimize(tseval::predict(model, data.predictors));
}
BENCHMARK(BM_KnnPredict)->Arg(140)->Arg(1000);

void BM_MakePlan(benchmark::State& state) {
    const auto method = tseval::kAllMethods[static_cast<std::size_t>(state.range(0))];
    state.SetLabel(std::string(tseval::method_name(method)));
    for (auto _ : state) benchmark::DoNotOptimize(tseval::make_plan(method, 2000, 5, 1));
}
BENCHMARK(BM_MakePlan)->DenseRange(0, 10);

void BM_EstimateLoss(benchmark::State& state) {
    const auto method = tseval::kAllMethods[static_cast<std::size_t>(state.range(0))];
    state.SetLabel(std::string(tseval::method_name(method)));
    const auto series = s1_series(140);
    const tseval::LearnerSpec spec;
    for (auto _ : state) benchmark::DoNotOptimize(tseval::estimate_loss(series, method, spec, 5, 1));
}
BENCHMARK(BM_EstimateLoss)->DenseRange(0, 10);

void BM_FalseNeighbours(benchmark::State& state) {
    const auto series = s1_series(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(tseval::false_neighbour_fraction(series.values(), 3));
}
BENCHMARK(BM_FalseNeighbours)->Arg(140)->Arg(1000);

void BM_WaveletTest(benchmark::State& state) {
    const auto series = s1_series(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(tseval::wavelet_stationarity_test(series));
}
BENCHMARK(BM_WaveletTest)->Arg(512)->Arg(4096);

}  // namespace
BENCHMARK_MAIN();
