// Microbenchmarks: parallel kernels against their sequential reference
// implementations on a uniformly refined square mesh.

#include <benchmark/benchmark.h>

#include <cstdlib>

#include "trigen/cdt.hpp"
#include "trigen/fem.hpp"
#include "trigen/refine.hpp"
#include "trigen/smooth.hpp"

namespace {

using namespace trigen;

TriMesh make_mesh(int refinements) {
  PolygonDomain square;
  square.outer = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
  TriMesh mesh = initial_triangulation(square);
  for (int r = 0; r < refinements; ++r) {
    std::vector<std::uint32_t> all(mesh.triangles.size());
    for (std::size_t t = 0; t < all.size(); ++t) all[t] = std::uint32_t(t);
    mesh = rgb_refine(std::move(mesh), all);
  }
  return mesh;
}

const TriMesh& bench_mesh() {
  static const TriMesh mesh = make_mesh(7);  // 32768 triangles
  return mesh;
}

void BM_assemble_parallel(benchmark::State& state) {
  const TriMesh& mesh = bench_mesh();
  for (auto _ : state) benchmark::DoNotOptimize(assemble(mesh));
}
BENCHMARK(BM_assemble_parallel)->Unit(benchmark::kMillisecond);

void BM_assemble_serial(benchmark::State& state) {
  const TriMesh& mesh = bench_mesh();
  for (auto _ : state) benchmark::DoNotOptimize(assemble_serial(mesh));
}
BENCHMARK(BM_assemble_serial)->Unit(benchmark::kMillisecond);

void BM_estimate_parallel(benchmark::State& state) {
  const TriMesh& mesh = bench_mesh();
  const FemSolution solution = solve(assemble(mesh));
  for (auto _ : state) benchmark::DoNotOptimize(estimate(mesh, solution));
}
BENCHMARK(BM_estimate_parallel)->Unit(benchmark::kMillisecond);

void BM_estimate_serial(benchmark::State& state) {
  const TriMesh& mesh = bench_mesh();
  const FemSolution solution = solve(assemble(mesh));
  for (auto _ : state) benchmark::DoNotOptimize(estimate_serial(mesh, solution));
}
BENCHMARK(BM_estimate_serial)->Unit(benchmark::kMillisecond);

void BM_quality_stats_parallel(benchmark::State& state) {
  const TriMesh& mesh = bench_mesh();
  for (auto _ : state) benchmark::DoNotOptimize(quality_stats(mesh));
}
BENCHMARK(BM_quality_stats_parallel)->Unit(benchmark::kMillisecond);

void BM_quality_stats_serial(benchmark::State& state) {
  const TriMesh& mesh = bench_mesh();
  for (auto _ : state) benchmark::DoNotOptimize(quality_stats_serial(mesh));
}
BENCHMARK(BM_quality_stats_serial)->Unit(benchmark::kMillisecond);

void BM_cpt_step_parallel(benchmark::State& state) {
  for (auto _ : state) {
    state.PauseTiming();
    TriMesh mesh = bench_mesh();
    state.ResumeTiming();
    benchmark::DoNotOptimize(cpt_step(mesh));
  }
}
BENCHMARK(BM_cpt_step_parallel)->Unit(benchmark::kMillisecond);

void BM_cpt_step_serial(benchmark::State& state) {
  for (auto _ : state) {
    state.PauseTiming();
    TriMesh mesh = bench_mesh();
    state.ResumeTiming();
    benchmark::DoNotOptimize(cpt_step_serial(mesh));
  }
}
BENCHMARK(BM_cpt_step_serial)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
