// Serial reference against OpenMP kernels. Arg 0 is serial, 1 parallel.

#include <benchmark/benchmark.h>

#include "cpnlab/constructions.hpp"
#include "cpnlab/energy.hpp"
#include "cpnlab/flow.hpp"
#include "cpnlab/intgeo.hpp"

using namespace cpnlab;

namespace {

Exec exec_of(const benchmark::State& s) { return s.range(0) ? Exec::Parallel : Exec::Serial; }

void BM_p_energy(benchmark::State& state) {
  const MapObject F = standard_map("perturbed(CP2,0.2)");
  const QuadratureGrid g = build_grid(F.domain(), 2000, GridScheme::MonteCarlo, 1);
  for (auto _ : state) benchmark::DoNotOptimize(p_energy(F, g, 4.0, {}, exec_of(state)).value);
  state.SetItemsProcessed(state.iterations() * static_cast<long>(g.size()));
}

void BM_line_energies(benchmark::State& state) {
  const MapObject F = standard_map("eigenmap");
  const auto lines = sample_lines(2, 64, 1);
  for (auto _ : state) benchmark::DoNotOptimize(line_energies(F, lines, {}, exec_of(state)).data());
  state.SetItemsProcessed(state.iterations() * static_cast<long>(lines.size()));
}

void BM_discrete_energy(benchmark::State& state) {
  const MeshMap m = make_mesh_map(standard_map("perturbed(S2,0.2)"), 5);
  for (auto _ : state) benchmark::DoNotOptimize(discrete_energy(m, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(m.edges.size()));
}

void BM_discrete_tension(benchmark::State& state) {
  const MeshMap m = make_mesh_map(standard_map("perturbed(S2,0.2)"), 5);
  for (auto _ : state) benchmark::DoNotOptimize(discrete_tension(m, exec_of(state)).data());
  state.SetItemsProcessed(state.iterations() * static_cast<long>(m.size()));
}

}  // namespace

BENCHMARK(BM_p_energy)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_line_energies)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_discrete_energy)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_discrete_tension)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
