#include "dcm/case_study.hpp"
#include "dcm/robustness.hpp"
#include "dcm/scale.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

using namespace dcm;

std::vector<PerformanceRecord> synthetic_fleet(const CriteriaFramework& fw, std::size_t n) {
    std::mt19937_64 rng(42);
    std::vector<PerformanceRecord> fleet;
    fleet.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        PerformanceRecord r{"s" + std::to_string(i), {}};
        for (const auto& c : fw.criteria()) {
            if (c.continuous) {
                r.levels[c.id] = Exact(static_cast<long>(rng() % 120), 4);
            } else {
                r.levels[c.id] = c.levels[rng() % c.levels.size()].id;
            }
        }
        fleet.push_back(std::move(r));
    }
    return fleet;
}

void BM_derive_model(benchmark::State& state) {
    auto doc = case_study::session();
    for (auto _ : state) benchmark::DoNotOptimize(derive(doc));
}
BENCHMARK(BM_derive_model);

void BM_fill_transitive(benchmark::State& state) {
    auto n = static_cast<std::size_t>(state.range(0));
    std::vector<ScaleLevel> levels;
    for (std::size_t i = 0; i < n; ++i) levels.push_back({"l" + std::to_string(i), "", static_cast<int>(i), std::nullopt});
    std::vector<std::int64_t> cards(n - 1, 3);
    auto table = ComparisonTable::create("x", levels, cards);
    for (auto _ : state) benchmark::DoNotOptimize(fill_transitive(table));
}
BENCHMARK(BM_fill_transitive)->Arg(8)->Arg(32);

void BM_classify_batch(benchmark::State& state) {
    auto doc = case_study::session();
    auto derived = derive(doc);
    auto model = derived.model();
    auto fleet = synthetic_fleet(doc.framework, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(classify_batch(fleet, doc.framework, model, doc.policy));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_classify_batch)->Arg(10)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_sweep_default_grid(benchmark::State& state) {
    auto doc = case_study::session();
    auto fleet = synthetic_fleet(doc.framework, static_cast<std::size_t>(state.range(0)));
    auto grid = ScenarioGrid::default_grid();
    for (auto _ : state) benchmark::DoNotOptimize(sweep(fleet, doc, grid));
}
BENCHMARK(BM_sweep_default_grid)->Arg(10)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
