#include "infoplan/gp.hpp"
#include "infoplan/info_value.hpp"
#include "infoplan/planner.hpp"
#include "infoplan/rng.hpp"

#include <benchmark/benchmark.h>

#include <vector>

using namespace infoplan;

namespace {

std::vector<Location> points(std::size_t n, Rng& rng) {
    std::vector<Location> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back({rng.uniform(), rng.uniform()});
    return out;
}

MeasurementLog make_log(std::size_t k, Rng& rng) {
    MeasurementLog log(1.0);
    for (std::size_t i = 0; i < k; ++i) log.append({rng.uniform(), rng.uniform()}, rng.normal());
    return log;
}

const KernelSpec kKernel{25.0, 0.15, 0.0};

}  // namespace

static void BM_Posterior(benchmark::State& state) {
    Rng rng(1);
    const auto targets = points(61, rng);
    const auto log = make_log(static_cast<std::size_t>(state.range(0)), rng);
    for (auto _ : state) benchmark::DoNotOptimize(posterior(MeanSpec{}, kKernel, log, targets));
}
BENCHMARK(BM_Posterior)->Arg(10)->Arg(30)->Arg(60);

static void BM_EdgScoreAll(benchmark::State& state) {
    Rng rng(2);
    const auto targets = points(61, rng);
    const auto cands = points(60, rng);
    const auto log = make_log(static_cast<std::size_t>(state.range(0)), rng);
    for (auto _ : state) {
        const EdgScorer scorer(MeanSpec{}, kKernel, log, targets);
        for (const auto& c : cands) benchmark::DoNotOptimize(scorer.score(c));
    }
}
BENCHMARK(BM_EdgScoreAll)->Arg(0)->Arg(30)->Arg(60);

static void BM_EdgQuadrature(benchmark::State& state) {
    Rng rng(3);
    const auto targets = points(10, rng);
    const auto log = make_log(8, rng);
    const Location c{0.5, 0.5};
    const QuadratureSpec q{static_cast<int>(state.range(0))};
    for (auto _ : state) benchmark::DoNotOptimize(edg_quadrature(MeanSpec{}, kKernel, log, c, targets, q));
}
BENCHMARK(BM_EdgQuadrature)->Arg(16)->Arg(64);

static void BM_GreedySelect(benchmark::State& state) {
    Rng rng(4);
    const auto targets = points(61, rng);
    const auto cands = points(60, rng);
    const auto log = make_log(30, rng);
    const auto workers = static_cast<unsigned>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(greedy_select(MeanSpec{}, kKernel, log, cands, targets, workers));
}
BENCHMARK(BM_GreedySelect)->Arg(1)->Arg(4);

BENCHMARK_MAIN();
