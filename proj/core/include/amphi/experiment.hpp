#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "amphi/cave.hpp"
#include "amphi/mission.hpp"
#include "amphi/stats.hpp"

namespace amphi {

enum class ProblemMedium : std::uint8_t { AirAir, WaterWater };
std::string to_string(ProblemMedium p);
ProblemMedium parse_problem_medium(const std::string& s);

struct ExperimentConfig {
  int n_envs = 20;
  std::uint64_t seed = 1;
  Dims dims{40, 40, 20};
  double resolution = 1.0;
  CaveParams cave;
  double margin_fraction = 0.15;  ///< endpoint band as a fraction of the x extent
  MissionConfig mission;          ///< planner mode is set per trial
  int threads = 1;

  void validate() const;
};

/// One planner run on one problem.
struct TrialRecord {
  int env_index = 0;
  std::uint64_t env_seed = 0;
  ProblemMedium problem = ProblemMedium::AirAir;
  PlannerMode mode = PlannerMode::Hybrid;
  bool solved = false;
  MissionOutcome outcome = MissionOutcome::NoPath;
  double graph_cost = 0.0;      ///< J, stop-stop prices of the edges flown
  double graph_duration = 0.0;  ///< s
  double graph_length = 0.0;    ///< m
  double actual_cost = 0.0;     ///< J; battery capacity when unsolved
  double length = 0.0;          ///< m
  double mean_speed = 0.0;      ///< m/s
  double duration = 0.0;        ///< s
  int replans = 0;
  int graph_nodes = 0;
  Voxel start;
  Voxel goal;
};

struct ExperimentResult {
  std::vector<TrialRecord> records;  ///< ordered by (env_index, problem, mode)
  int environments = 0;  ///< caves generated successfully
  int generation_failures = 0;
  int endpoint_failures = 0;
};

/// Start drawn uniformly from free voxels of `medium` whose center has
/// x < margin, goal from those with x > extent - margin. nullopt if either
/// band has no candidate. Throws InvalidArgument unless 0 < margin < extent/2.
std::optional<std::pair<Voxel, Voxel>> pick_endpoints(const Environment& env, Medium medium,
                                                      double margin, std::uint64_t seed);

/// Per environment: Hybrid and AirOnly on the AirAir problem, Hybrid and
/// WaterOnly on the WaterWater problem, each from a fresh initial map and with
/// the same graph seed. Trial errors are recorded as unsolved runs.
ExperimentResult run_experiment(const ExperimentConfig& config, const TableSet& tables);

struct ModeSummary {
  ProblemMedium problem = ProblemMedium::AirAir;
  PlannerMode mode = PlannerMode::Hybrid;
  int trials = 0;
  int solved = 0;
  double solve_rate = 0.0;
  double actual_mean = 0.0;  ///< failed runs count as the battery capacity
  double actual_se = 0.0;
  double graph_mean = 0.0;   ///< solved runs only
  double graph_se = 0.0;
  double prediction_abs_pct = 0.0;  ///< mean |actual - graph| / graph over solved runs
  double prediction_rel_pct = 0.0;  ///< mean (graph - actual) / graph over solved runs
};

struct SummaryStats {
  std::vector<ModeSummary> modes;  ///< (AirAir, Hybrid), (AirAir, AirOnly), (WaterWater, Hybrid), (WaterWater, WaterOnly)
  TestResult chi2_air;    ///< Hybrid vs AirOnly solve rates on AirAir
  TestResult chi2_water;  ///< Hybrid vs WaterOnly solve rates on WaterWater
  int joint_air = 0;      ///< AirAir problems solved by both Hybrid and AirOnly
  double joint_hybrid_mean = 0.0;
  double joint_air_only_mean = 0.0;
  TestResult f_energy;    ///< actual energy per metre, Hybrid vs AirOnly on jointly solved problems
  TestResult t_energy;
  Regression rel_vs_length;  ///< relative prediction difference (%) vs executed length, all solved runs
  Regression rel_vs_speed;   ///< relative prediction difference (%) vs mean-speed increase (%)
  int solved_runs = 0;
};

/// Relative prediction difference (graph - actual) / graph in percent.
double relative_difference(const TrialRecord& r);
/// Executed mean speed over the stop-stop mean speed of the same edges, minus one, in percent.
double speed_increase(const TrialRecord& r);

SummaryStats summarize(const std::vector<TrialRecord>& records);

void write_records_csv(std::ostream& out, const std::vector<TrialRecord>& records);
std::vector<TrialRecord> read_records_csv(std::istream& in);

/// Plain-text report of a summary.
void write_report(std::ostream& out, const SummaryStats& s, const std::vector<TrialRecord>& records);
/// Per solved run: mode, problem, length, speed increase, relative difference.
void write_fig7_csv(std::ostream& out, const std::vector<TrialRecord>& records);
/// One row per (problem, mode) summary.
void write_fig8_csv(std::ostream& out, const SummaryStats& s);

}  // namespace amphi
