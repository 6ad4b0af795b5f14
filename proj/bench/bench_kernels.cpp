// Serial reference against the OpenMP kernels.

#include "switchcost/constructions.hpp"
#include "switchcost/local_lemmas.hpp"
#include "switchcost/local_structure.hpp"
#include "switchcost/simulator.hpp"
#include "switchcost/solver.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace switchcost;

void solver_serial(benchmark::State & state)
{
    ProblemInstance p { static_cast<int>(state.range(0)), 4, Regime::FullMultiset };
    for (auto _ : state)
        benchmark::DoNotOptimize(feasible_serial(p, 2).stats.nodes_expanded);
}

void solver_parallel(benchmark::State & state)
{
    ProblemInstance p { static_cast<int>(state.range(0)), 4, Regime::FullMultiset };
    for (auto _ : state)
        benchmark::DoNotOptimize(feasible(p, 2).stats.nodes_expanded);
}

BENCHMARK(solver_serial)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(solver_parallel)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);

void families_serial(benchmark::State & state)
{
    FamilyQuery q { 4, 6, 2, 3 };
    for (auto _ : state)
        benchmark::DoNotOptimize(enumerate_local_families_serial(q).size());
}

void families_parallel(benchmark::State & state)
{
    FamilyQuery q { 4, 6, 2, 3 };
    for (auto _ : state)
        benchmark::DoNotOptimize(enumerate_local_families(q).size());
}

BENCHMARK(families_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(families_parallel)->Unit(benchmark::kMillisecond);

void lemma_fix2_serial(benchmark::State & state)
{
    for (auto _ : state)
        benchmark::DoNotOptimize(check_local_lemma_serial(LocalLemma::Fix2, 5, 7).instances);
}

void lemma_fix2_parallel(benchmark::State & state)
{
    for (auto _ : state)
        benchmark::DoNotOptimize(check_local_lemma(LocalLemma::Fix2, 5, 7).instances);
}

BENCHMARK(lemma_fix2_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(lemma_fix2_parallel)->Unit(benchmark::kMillisecond);

void distortion_serial(benchmark::State & state)
{
    auto table = ordered_construction({ 6, 7, Regime::FullMultiset });
    for (auto _ : state)
        benchmark::DoNotOptimize(max_switching_cost_serial(table).max_cost);
}

void distortion_parallel(benchmark::State & state)
{
    auto table = ordered_construction({ 6, 7, Regime::FullMultiset });
    for (auto _ : state)
        benchmark::DoNotOptimize(max_switching_cost(table).max_cost);
}

BENCHMARK(distortion_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(distortion_parallel)->Unit(benchmark::kMillisecond);

void composite_bound(benchmark::State & state)
{
    auto table = ordered_construction({ 4, 5, Regime::FullMultiset });
    for (auto _ : state)
        benchmark::DoNotOptimize(check_composite_bound(table, static_cast<int>(state.range(0))).violations);
}

// threads 1 is the serial reference
BENCHMARK(composite_bound)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
