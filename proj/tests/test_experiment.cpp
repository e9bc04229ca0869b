#include <gtest/gtest.h>

#include <sstream>

#include "amphi/cave.hpp"
#include "amphi/experiment.hpp"
#include "support/tables.hpp"

namespace amphi {
namespace {

const TableSet& tables() { return testing::default_tables(); }

TrialRecord make_record(ProblemMedium problem, PlannerMode mode, bool solved, double graph,
                        double actual, double length) {
  TrialRecord r;
  r.problem = problem;
  r.mode = mode;
  r.solved = solved;
  r.outcome = solved ? MissionOutcome::ReachedGoal : MissionOutcome::NoPath;
  r.graph_cost = graph;
  r.actual_cost = actual;
  r.length = length;
  r.graph_length = length;
  r.graph_duration = length;  // 1 m/s stop-stop average
  r.duration = length / 1.2;
  r.mean_speed = 1.2;
  return r;
}

std::vector<TrialRecord> four_records() {
  const double battery = MissionConfig{}.battery;
  return {
      make_record(ProblemMedium::AirAir, PlannerMode::Hybrid, true, 100.0, 110.0, 10.0),
      make_record(ProblemMedium::AirAir, PlannerMode::AirOnly, false, 0.0, battery, 0.0),
      make_record(ProblemMedium::WaterWater, PlannerMode::Hybrid, true, 50.0, 45.0, 20.0),
      make_record(ProblemMedium::WaterWater, PlannerMode::WaterOnly, true, 60.0, 66.0, 30.0),
  };
}

const ModeSummary& row(const SummaryStats& s, ProblemMedium p, PlannerMode m) {
  for (const auto& r : s.modes) {
    if (r.problem == p && r.mode == m) return r;
  }
  throw std::logic_error("missing summary row");
}

std::string csv_of(const std::vector<TrialRecord>& records) {
  std::ostringstream out;
  write_records_csv(out, records);
  return out.str();
}

TEST(Summary, HandBuiltFixture) {
  const auto records = four_records();
  const SummaryStats s = summarize(records);
  ASSERT_EQ(s.modes.size(), 4u);
  const auto& ah = row(s, ProblemMedium::AirAir, PlannerMode::Hybrid);
  const auto& ao = row(s, ProblemMedium::AirAir, PlannerMode::AirOnly);
  const auto& wh = row(s, ProblemMedium::WaterWater, PlannerMode::Hybrid);
  const auto& wo = row(s, ProblemMedium::WaterWater, PlannerMode::WaterOnly);
  EXPECT_EQ(ah.solve_rate, 1.0);
  EXPECT_EQ(ao.solve_rate, 0.0);
  EXPECT_EQ(ao.actual_mean, 1.2e6);
  EXPECT_EQ(ah.prediction_rel_pct, -10.0);
  EXPECT_EQ(ah.prediction_abs_pct, 10.0);
  EXPECT_EQ(wh.prediction_rel_pct, 10.0);
  EXPECT_EQ(wo.prediction_rel_pct, -10.0);
  EXPECT_EQ(wh.actual_se, 0.0);
  // 2x2 table [[1, 0], [0, 1]]: chi2 = N (ad - bc)^2 / (product of margins) = 2.
  EXPECT_NEAR(s.chi2_air.statistic, 2.0, 1e-12);
  // [[1, 0], [1, 0]] has a zero column margin.
  EXPECT_FALSE(s.chi2_water.valid);
  EXPECT_EQ(s.joint_air, 0);
  EXPECT_EQ(s.solved_runs, 3);
  // rel = (-10, 10, -10) against length (10, 20, 30): slope 0, intercept -10/3.
  EXPECT_NEAR(s.rel_vs_length.slope, 0.0, 1e-12);
  EXPECT_NEAR(s.rel_vs_length.intercept, -10.0 / 3.0, 1e-12);
  EXPECT_NEAR(speed_increase(records[0]), 20.0, 1e-9);
  EXPECT_NEAR(relative_difference(records[2]), 10.0, 1e-12);
}

TEST(Summary, JointlySolvedAirProblems) {
  std::vector<TrialRecord> records;
  const double hybrid[] = {100, 120, 90, 110};
  const double only[] = {130, 150, 100, 140};
  for (int e = 0; e < 4; ++e) {
    auto h = make_record(ProblemMedium::AirAir, PlannerMode::Hybrid, true, hybrid[e], hybrid[e], 10.0 + e);
    auto a = make_record(ProblemMedium::AirAir, PlannerMode::AirOnly, true, only[e], only[e], 10.0 + e);
    h.env_index = a.env_index = e;
    records.push_back(h);
    records.push_back(a);
  }
  const SummaryStats s = summarize(records);
  EXPECT_EQ(s.joint_air, 4);
  EXPECT_DOUBLE_EQ(s.joint_hybrid_mean, 105.0);
  EXPECT_DOUBLE_EQ(s.joint_air_only_mean, 130.0);
  EXPECT_TRUE(s.f_energy.valid);
  EXPECT_TRUE(s.t_energy.valid);
  EXPECT_LT(s.t_energy.statistic, 0.0);
}

TEST(Summary, AllUnsolved) {
  const double battery = MissionConfig{}.battery;
  std::vector<TrialRecord> records;
  for (auto [p, m] : {std::pair{ProblemMedium::AirAir, PlannerMode::Hybrid},
                      std::pair{ProblemMedium::AirAir, PlannerMode::AirOnly},
                      std::pair{ProblemMedium::WaterWater, PlannerMode::Hybrid},
                      std::pair{ProblemMedium::WaterWater, PlannerMode::WaterOnly}}) {
    records.push_back(make_record(p, m, false, 0.0, battery, 0.0));
  }
  const SummaryStats s = summarize(records);
  for (const auto& r : s.modes) {
    EXPECT_EQ(r.actual_mean, battery);
    EXPECT_EQ(r.solved, 0);
  }
  EXPECT_EQ(s.solved_runs, 0);
  EXPECT_FALSE(s.rel_vs_length.valid);
  EXPECT_FALSE(s.chi2_air.valid);
}

TEST(Records, CsvRoundTripAndReport) {
  auto records = four_records();
  records[0].start = {1, 2, 3};
  records[0].goal = {30, 4, 12};
  records[0].env_seed = 0xFEDCBA9876543210ull;
  records[0].graph_cost = 0.1 + 0.2;
  const std::string text = csv_of(records);
  std::istringstream in(text);
  const auto back = read_records_csv(in);
  EXPECT_EQ(csv_of(back), text);
  EXPECT_EQ(back[0].graph_cost, 0.1 + 0.2);
  EXPECT_EQ(back[0].goal, (Voxel{30, 4, 12}));

  std::ostringstream a, b;
  write_report(a, summarize(records), records);
  write_report(b, summarize(back), back);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Records, MalformedCsvRejected) {
  std::istringstream in("not,a,header\n1,2,3\n");
  EXPECT_ANY_THROW(read_records_csv(in));
}

TEST(Endpoints, BandsMediumAndValidation) {
  const Environment env = generate_cave(CaveParams{}, {40, 40, 20}, 1.0, 2).environment;
  const double extent = env.geometry().extent().x();
  int found = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    for (Medium m : {Medium::Air, Medium::Water}) {
      const auto ends = pick_endpoints(env, m, 6.0, seed);
      if (!ends) continue;
      ++found;
      const auto [s, g] = *ends;
      EXPECT_FALSE(env.occupied(s));
      EXPECT_FALSE(env.occupied(g));
      EXPECT_EQ(env.medium_of(s), m);
      EXPECT_EQ(env.medium_of(g), m);
      if (m == Medium::Air) {
        EXPECT_GT(env.geometry().center(s).z(), env.water.level);
      }
      EXPECT_LT(env.geometry().center(s).x(), 6.0);
      EXPECT_GT(env.geometry().center(g).x(), extent - 6.0);
      EXPECT_EQ(pick_endpoints(env, m, 6.0, seed), ends);
    }
  }
  EXPECT_GT(found, 0);
  EXPECT_THROW(pick_endpoints(env, Medium::Air, extent / 2, 1), InvalidArgument);
  EXPECT_THROW(pick_endpoints(env, Medium::Air, 0.0, 1), InvalidArgument);

  ExperimentConfig cfg;
  cfg.margin_fraction = 0.5;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
}

ExperimentConfig small_experiment() {
  ExperimentConfig cfg;
  cfg.n_envs = 3;
  cfg.seed = 5;
  cfg.dims = {30, 30, 16};
  return cfg;
}

TEST(Experiment, RecordsPartitionedAndDeterministic) {
  const ExperimentConfig cfg = small_experiment();
  const ExperimentResult a = run_experiment(cfg, tables());
  EXPECT_EQ(a.environments + a.generation_failures, cfg.n_envs);
  EXPECT_LE(a.records.size(), 4u * static_cast<std::size_t>(cfg.n_envs));
  EXPECT_EQ(a.records.size() % 2, 0u);
  for (std::size_t i = 0; i + 1 < a.records.size(); i += 2) {
    const TrialRecord& h = a.records[i];
    const TrialRecord& o = a.records[i + 1];
    EXPECT_EQ(h.mode, PlannerMode::Hybrid);
    EXPECT_EQ(o.mode, h.problem == ProblemMedium::AirAir ? PlannerMode::AirOnly : PlannerMode::WaterOnly);
    EXPECT_EQ(h.env_index, o.env_index);
    EXPECT_EQ(h.start, o.start);
    EXPECT_EQ(h.goal, o.goal);
  }
  for (const TrialRecord& r : a.records) {
    if (!r.solved) EXPECT_EQ(r.actual_cost, cfg.mission.battery);
    if (r.solved) EXPECT_TRUE(std::isfinite(r.actual_cost) && r.actual_cost < cfg.mission.battery);
  }
  const ExperimentResult b = run_experiment(cfg, tables());
  EXPECT_EQ(csv_of(a.records), csv_of(b.records));

  ExperimentConfig threaded = cfg;
  threaded.threads = 2;
  EXPECT_EQ(csv_of(run_experiment(threaded, tables()).records), csv_of(a.records));
}

TEST(Experiment, ProblemMediumStrings) {
  for (ProblemMedium p : {ProblemMedium::AirAir, ProblemMedium::WaterWater}) {
    EXPECT_EQ(parse_problem_medium(to_string(p)), p);
  }
  EXPECT_THROW(parse_problem_medium("air_water"), InvalidArgument);
}

}  // namespace
}  // namespace amphi
