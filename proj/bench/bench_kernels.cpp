// Serial references against the OpenMP kernels. Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <omp.h>

#include "torick/families.hpp"
#include "torick/futaki.hpp"
#include "torick/solver.hpp"
#include "torick/twist.hpp"

using namespace torick;

namespace
{

// Twist of Delta_{0.2,1} under the + Futaki-Ono member, with f = 1 on it.
const LabelledPolytope2& twisted()
{
    static const LabelledPolytope2 tw =
        centered_twist(hirzebruch_delzant(0.2, 1), family_f(FamilyId::FutakiOno, {0.2, 1, +1})).twisted;
    return tw;
}

void BM_CreaseScanSerial(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(crease_scan_serial(twisted(), AffineMap2::constant(1.0), 4.0, n, 42).minimum);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_CreaseScan(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(crease_scan(twisted(), AffineMap2::constant(1.0), 4.0, n, 42).minimum);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
    state.counters["threads"] = omp_get_max_threads();
}

void BM_SolveSerial(benchmark::State& state)
{
    const auto P = hirzebruch_delzant(0.95, 1);
    SolverOptions o;
    o.starts = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_condition_a_serial(P, 4.0, o).size());
    }
}

void BM_Solve(benchmark::State& state)
{
    const auto P = hirzebruch_delzant(0.95, 1);
    SolverOptions o;
    o.starts = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_condition_a(P, 4.0, o).size());
    }
    state.counters["threads"] = omp_get_max_threads();
}

}  // namespace

BENCHMARK(BM_CreaseScanSerial)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CreaseScan)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SolveSerial)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Solve)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
