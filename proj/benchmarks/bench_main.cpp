#include <benchmark/benchmark.h>

#include <random>

#include "amphi/cave.hpp"
#include "amphi/dstar.hpp"
#include "amphi/experiment.hpp"
#include "amphi/line_voxels.hpp"
#include "amphi/mission.hpp"
#include "amphi/planner.hpp"
#include "amphi/random.hpp"
#include "amphi/sensor.hpp"

namespace {

using namespace amphi;

const TableSet& bench_tables() {
  static const TableSet tables = [] {
    const DynamicsParams p;
    return TableSet(build_table(Medium::Air, p, 1.0, 1), build_table(Medium::Water, p, 1.0, 1), p.hash());
  }();
  return tables;
}

void BM_LineVoxels(benchmark::State& state) {
  const GridGeometry g({40, 40, 20}, 1.0);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 20.0);
  std::vector<std::pair<Vec3, Vec3>> segs;
  for (int i = 0; i < 256; ++i) segs.emplace_back(Vec3(u(rng), u(rng), u(rng)), Vec3(u(rng), u(rng), u(rng)));
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& [a, b] = segs[i++ % segs.size()];
    benchmark::DoNotOptimize(line_voxels(a, b, g));
  }
}
BENCHMARK(BM_LineVoxels);

void BM_Sense(benchmark::State& state) {
  const Environment env = generate_cave(CaveParams{}, {40, 40, 20}, 1.0, 1).environment;
  Voxel free{};
  for (std::size_t i = 0; i < env.geometry().dims().volume(); ++i) {
    if (!env.occupancy[i]) free = env.geometry().voxel(i);
  }
  const SensorParams sp;
  for (auto _ : state) benchmark::DoNotOptimize(sense(env, env.geometry().center(free), sp));
}
BENCHMARK(BM_Sense);

void BM_BuildSpline(benchmark::State& state) {
  KinematicState s;
  s.v = Vec3(0.4, -0.2, 0.1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_spline(s, 0.0, Vec3(3, 1, -2), Vec3(5, 4, -2), 1.0));
  }
}
BENCHMARK(BM_BuildSpline);

void BM_StopStop(benchmark::State& state) {
  const DynamicsParams p;
  const Medium m = state.range(0) ? Medium::Water : Medium::Air;
  for (auto _ : state) benchmark::DoNotOptimize(simulate_stop_stop({3, 2, -1}, m, p, 1.0));
}
BENCHMARK(BM_StopStop)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_PrmAndSearch(benchmark::State& state) {
  const Environment env = generate_cave(CaveParams{}, {40, 40, 20}, 1.0, 2).environment;
  const WorldMap map = initial_map(env);
  const auto ends = pick_endpoints(env, Medium::Air, 6.0, 3);
  if (!ends) {
    state.SkipWithError("no endpoints");
    return;
  }
  const TableSet& tables = bench_tables();
  for (auto _ : state) {
    Planner planner(map, tables, PlannerConfig{}, ends->first, ends->second, 4);
    benchmark::DoNotOptimize(planner.plan(planner.graph().start));
  }
}
BENCHMARK(BM_PrmAndSearch)->Unit(benchmark::kMillisecond);

void BM_Mission(benchmark::State& state) {
  const Environment env = generate_cave(CaveParams{}, {40, 40, 20}, 1.0, 2).environment;
  const auto ends = pick_endpoints(env, Medium::Air, 6.0, 3);
  if (!ends) {
    state.SkipWithError("no endpoints");
    return;
  }
  const TableSet& tables = bench_tables();
  for (auto _ : state) {
    WorldMap map = initial_map(env);
    benchmark::DoNotOptimize(run_mission(env, map, ends->first, ends->second, MissionConfig{}, tables));
  }
}
BENCHMARK(BM_Mission)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
