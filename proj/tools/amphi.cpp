// amphi: command line front end for cave generation, cost tables, missions
// and the Monte Carlo benchmark.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "amphi/cave.hpp"
#include "amphi/config.hpp"
#include "amphi/costtable.hpp"
#include "amphi/errors.hpp"
#include "amphi/experiment.hpp"
#include "amphi/grid_io.hpp"
#include "amphi/mission.hpp"
#include "amphi/random.hpp"

namespace fs = std::filesystem;
using namespace amphi;

namespace {

ExperimentConfig config_from(const std::string& path) {
  if (path.empty()) {
    ExperimentConfig c;
    c.mission.battery = c.mission.dynamics.vehicle.battery_capacity;
    return c;
  }
  return load_config(path);
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  return out;
}

TableSet load_tables(const fs::path& dir, const DynamicsParams& params) {
  return TableSet(load_table(dir / "air.table"), load_table(dir / "water.table"), params.hash());
}

Voxel parse_voxel(const std::string& text) {
  Voxel v;
  char c1 = 0;
  char c2 = 0;
  if (std::sscanf(text.c_str(), "%d%c%d%c%d", &v.i, &c1, &v.j, &c2, &v.k) != 5 || c1 != ',' || c2 != ',') {
    throw InvalidArgument("voxel must be written i,j,k: '" + text + "'");
  }
  return v;
}

nlohmann::json voxels_json(const std::vector<Voxel>& vs) {
  auto out = nlohmann::json::array();
  for (const Voxel& v : vs) out.push_back({v.i, v.j, v.k});
  return out;
}

unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid air/underwater quadrotor planning simulator"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON parameter file")->check(CLI::ExistingFile);

  // gen-cave
  auto* gen = app.add_subcommand("gen-cave", "Generate a procedural cave environment");
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  std::string gen_map;
  gen->add_option("--seed", gen_seed, "Generator seed");
  gen->add_option("--out", gen_out, "Environment file")->required();
  gen->add_option("--map", gen_map, "Also write the initial belief map here");

  // build-table
  auto* build = app.add_subcommand("build-table", "Simulate stop-stop cost tables");
  std::string build_medium = "both";
  std::string build_out = "tables";
  unsigned build_threads = default_threads();
  build->add_option("--medium", build_medium, "air, water or both")
      ->check(CLI::IsMember({"air", "water", "both"}));
  build->add_option("--out", build_out, "Output directory (air.table, water.table)");
  build->add_option("--threads", build_threads, "Worker threads")->check(CLI::PositiveNumber);

  // run-mission
  auto* run = app.add_subcommand("run-mission", "Fly one mission through a cave");
  std::string run_env;
  std::string run_tables = "tables";
  std::string run_mode = "hybrid";
  std::string run_pricing = "modified";
  std::string run_edge;
  std::string run_problem = "air_air";
  std::string run_start;
  std::string run_goal;
  std::string run_trace;
  std::string run_out;
  std::uint64_t run_seed = 1;
  run->add_option("--env", run_env, "Environment file")->required()->check(CLI::ExistingFile);
  run->add_option("--tables", run_tables, "Directory with air.table and water.table");
  run->add_option("--mode", run_mode, "hybrid, air_only or water_only")
      ->check(CLI::IsMember({"hybrid", "air_only", "water_only"}));
  run->add_option("--pricing", run_pricing, "modified or standard")
      ->check(CLI::IsMember({"modified", "standard"}));
  run->add_option("--edge-case", run_edge, "practical or complete")
      ->check(CLI::IsMember({"practical", "complete"}));
  run->add_option("--problem", run_problem, "Endpoint medium when --start/--goal are absent")
      ->check(CLI::IsMember({"air_air", "water_water"}));
  run->add_option("--start", run_start, "Start voxel i,j,k");
  run->add_option("--goal", run_goal, "Goal voxel i,j,k");
  run->add_option("--seed", run_seed, "Graph and endpoint seed");
  run->add_option("--trace", run_trace, "Trace CSV output");
  run->add_option("--out", run_out, "Result JSON output");

  // bench
  auto* bench = app.add_subcommand("bench", "Monte Carlo comparison of planner modes");
  int bench_envs = -1;
  std::uint64_t bench_seed = 1;
  std::string bench_scale = "desk";
  std::string bench_out = "bench_out";
  std::string bench_tables = "tables";
  int bench_threads = static_cast<int>(default_threads());
  bench->add_option("--envs", bench_envs, "Environment count (overrides --scale)");
  bench->add_option("--seed", bench_seed, "Master seed");
  bench->add_option("--scale", bench_scale, "desk (20 caves) or full (200)")
      ->check(CLI::IsMember({"desk", "full"}));
  bench->add_option("--out", bench_out, "Output directory");
  bench->add_option("--tables", bench_tables, "Directory with air.table and water.table");
  bench->add_option("--threads", bench_threads, "Worker threads")->check(CLI::PositiveNumber);

  // maneuver
  auto* man = app.add_subcommand("maneuver", "Fly a single stop-stop displacement and trace it");
  std::vector<int> man_disp{1, 0, 0};
  std::string man_medium = "air";
  std::string man_trace;
  man->add_option("--disp", man_disp, "Displacement dx dy dh in voxels")->expected(3);
  man->add_option("--medium", man_medium, "air or water")->check(CLI::IsMember({"air", "water"}));
  man->add_option("--trace", man_trace, "Trace CSV output");

  // dump-config
  auto* dump = app.add_subcommand("dump-config", "Print the effective parameter file");

  CLI11_PARSE(app, argc, argv);

  try {
    const ExperimentConfig cfg = config_from(config_path);

    if (*gen) {
      const Cave cave = generate_cave(cfg.cave, cfg.dims, cfg.resolution, gen_seed);
      save_environment(gen_out, cave.environment);
      if (!gen_map.empty()) save_map(gen_map, initial_map(cave.environment));
      std::size_t free_cells = 0;
      for (const auto c : cave.environment.occupancy.cells()) free_cells += c == 0;
      std::cout << "cave " << gen_out << ": " << cave.bores.size() << " bores, " << free_cells
                << " free voxels\n";
      return 0;
    }

    if (*build) {
      const DynamicsParams& dp = cfg.mission.dynamics;
      fs::create_directories(build_out);
      for (const Medium m : {Medium::Air, Medium::Water}) {
        if (build_medium != "both" && build_medium != to_string(m)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        const CostTable table = build_table(m, dp, cfg.resolution, build_threads);
        const fs::path path = fs::path(build_out) / (std::string(to_string(m)) + ".table");
        save_table(path, table);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cerr << "built " << path.string() << " in " << secs << " s\n";
      }
      return 0;
    }

    if (*run) {
      const Environment env = load_environment(run_env);
      MissionConfig mc = cfg.mission;
      mc.planner.mode = parse_planner_mode(run_mode);
      mc.planner.pricing = parse_pricing(run_pricing);
      if (!run_edge.empty()) mc.planner.edge_case = parse_edge_case(run_edge);
      mc.seed = run_seed;
      mc.record_trace = !run_trace.empty();
      const TableSet tables = load_tables(run_tables, mc.dynamics);

      Voxel start;
      Voxel goal;
      if (!run_start.empty() && !run_goal.empty()) {
        start = parse_voxel(run_start);
        goal = parse_voxel(run_goal);
      } else {
        const Medium medium = parse_problem_medium(run_problem) == ProblemMedium::AirAir ? Medium::Air
                                                                                          : Medium::Water;
        const double margin = cfg.margin_fraction * env.geometry().extent().x();
        const auto ends = pick_endpoints(env, medium, margin, derive_seed(run_seed, 1));
        if (!ends) throw InvalidArgument("no endpoint candidates for " + run_problem);
        start = ends->first;
        goal = ends->second;
      }

      WorldMap map = initial_map(env);
      const MissionResult r = run_mission(env, map, start, goal, mc, tables);
      nlohmann::json j = {{"solved", r.solved},
                          {"outcome", to_string(r.reason)},
                          {"diagnostic", r.diagnostic},
                          {"graph_cost", r.graph_cost},
                          {"graph_duration", r.graph_duration},
                          {"graph_length", r.graph_length},
                          {"actual_cost", r.actual_cost},
                          {"length", r.length},
                          {"duration", r.duration},
                          {"mean_speed", r.mean_speed},
                          {"replans", r.replans},
                          {"node_arrivals", r.node_arrivals},
                          {"collision_steps", r.collision_steps},
                          {"confirmed_collision_steps", r.confirmed_collision_steps},
                          {"medium_switches", r.medium_switches},
                          {"graph_nodes", r.graph_nodes},
                          {"relaxed_used", r.relaxed_used},
                          {"start", {start.i, start.j, start.k}},
                          {"goal", {goal.i, goal.j, goal.k}},
                          {"path", voxels_json(r.path)},
                          {"initial_path", voxels_json(r.initial_path)},
                          {"return_path", voxels_json(r.return_path)}};
      if (!run_out.empty()) open_out(run_out) << j.dump(2) << '\n';
      if (!run_trace.empty()) {
        auto out = open_out(run_trace);
        write_trace_csv(out, r.trace);
      }
      std::cout << to_string(r.reason) << ": actual " << r.actual_cost << " J, graph " << r.graph_cost
                << " J, length " << r.length << " m, " << r.duration << " s, replans " << r.replans
                << '\n';
      if (!r.diagnostic.empty()) std::cout << "  " << r.diagnostic << '\n';
      return r.solved ? 0 : 2;
    }

    if (*bench) {
      ExperimentConfig ec = cfg;
      ec.n_envs = bench_envs > 0 ? bench_envs : (bench_scale == "full" ? 200 : 20);
      ec.seed = bench_seed;
      ec.threads = bench_threads;
      const TableSet tables = load_tables(bench_tables, ec.mission.dynamics);
      const auto t0 = std::chrono::steady_clock::now();
      const ExperimentResult res = run_experiment(ec, tables);
      const SummaryStats s = summarize(res.records);
      const fs::path dir(bench_out);
      fs::create_directories(dir);
      {
        auto out = open_out(dir / "records.csv");
        write_records_csv(out, res.records);
      }
      {
        auto out = open_out(dir / "summary.txt");
        out << "environments " << res.environments << ", generation failures "
            << res.generation_failures << ", endpoint failures " << res.endpoint_failures << '\n';
        write_report(out, s, res.records);
      }
      {
        auto out = open_out(dir / "fig7.csv");
        write_fig7_csv(out, res.records);
      }
      {
        auto out = open_out(dir / "fig8.csv");
        write_fig8_csv(out, s);
      }
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      write_report(std::cout, s, res.records);
      std::cerr << "bench finished in " << secs << " s\n";
      return 0;
    }

    if (*man) {
      const Medium m = man_medium == "air" ? Medium::Air : Medium::Water;
      const Displacement d{man_disp[0], man_disp[1], man_disp[2]};
      std::vector<TraceSample> trace;
      const StopStopResult r = simulate_stop_stop(d, m, cfg.mission.dynamics, cfg.resolution, &trace);
      std::cout << "energy " << r.energy << " J, settle " << r.duration << " s"
                << (r.saturated ? ", saturated" : "") << '\n';
      if (!man_trace.empty()) {
        auto out = open_out(man_trace);
        write_trace_csv(out, trace);
      }
      return 0;
    }

    if (*dump) {
      std::cout << dump_config(cfg);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
