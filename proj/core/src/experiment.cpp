#include "amphi/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "amphi/errors.hpp"
#include "amphi/random.hpp"

namespace amphi {
namespace {

constexpr std::uint64_t kStartTag = 1;
constexpr std::uint64_t kWaterTag = 2;
constexpr std::uint64_t kGraphTag = 3;

struct Trial {
  int env = 0;
  ProblemMedium problem = ProblemMedium::AirAir;
  PlannerMode mode = PlannerMode::Hybrid;
  Voxel start;
  Voxel goal;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fixed(double v, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

MissionOutcome parse_outcome(const std::string& s) {
  for (auto o : {MissionOutcome::ReachedGoal, MissionOutcome::NoPath, MissionOutcome::BatteryExhausted,
                 MissionOutcome::StepLimit, MissionOutcome::TrackingLost, MissionOutcome::Diverged}) {
    if (to_string(o) == s) return o;
  }
  throw IoError("unknown mission outcome '" + s + "'");
}

}  // namespace

std::string to_string(ProblemMedium p) { return p == ProblemMedium::AirAir ? "air_air" : "water_water"; }

ProblemMedium parse_problem_medium(const std::string& s) {
  if (s == "air_air") return ProblemMedium::AirAir;
  if (s == "water_water") return ProblemMedium::WaterWater;
  throw InvalidArgument("unknown problem medium '" + s + "'");
}

void ExperimentConfig::validate() const {
  if (n_envs < 1) throw InvalidArgument("experiment: n_envs must be >= 1");
  if (dims.nx < 3 || dims.ny < 3 || dims.nh < 3) throw InvalidArgument("experiment: dims must be >= 3");
  if (!(resolution > 0.0)) throw InvalidArgument("experiment: resolution must be positive");
  if (!(margin_fraction > 0.0 && margin_fraction < 0.5)) {
    throw InvalidArgument("experiment: margin_fraction must be in (0, 0.5)");
  }
  if (threads < 1) throw InvalidArgument("experiment: threads must be >= 1");
  cave.validate();
  mission.validate();
  mission.planner.validate(resolution);
}

std::optional<std::pair<Voxel, Voxel>> pick_endpoints(const Environment& env, Medium medium,
                                                      double margin, std::uint64_t seed) {
  const GridGeometry& geo = env.geometry();
  const double extent = geo.extent().x();
  if (!(margin > 0.0 && margin < 0.5 * extent)) {
    throw InvalidArgument("endpoint margin must be in (0, x extent / 2)");
  }
  std::vector<Voxel> low;
  std::vector<Voxel> high;
  for (std::size_t idx = 0; idx < geo.dims().volume(); ++idx) {
    const Voxel v = geo.voxel(idx);
    if (geo.is_boundary(v) || env.occupied(v) || env.medium_of(v) != medium) continue;
    const double x = geo.center(v).x();
    if (x < margin) low.push_back(v);
    if (x > extent - margin) high.push_back(v);
  }
  if (low.empty() || high.empty()) return std::nullopt;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick_low(0, low.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_high(0, high.size() - 1);
  const Voxel start = low[pick_low(rng)];
  const Voxel goal = high[pick_high(rng)];
  return std::make_pair(start, goal);
}

ExperimentResult run_experiment(const ExperimentConfig& config, const TableSet& tables) {
  config.validate();
  ExperimentResult result;

  std::vector<std::optional<Environment>> envs(static_cast<std::size_t>(config.n_envs));
  std::vector<std::uint64_t> env_seeds(envs.size());
  std::vector<Trial> trials;
  const double margin = config.margin_fraction * config.dims.nx * config.resolution;
  for (int e = 0; e < config.n_envs; ++e) {
    const std::uint64_t env_seed = derive_seed(config.seed, static_cast<std::uint64_t>(e));
    env_seeds[static_cast<std::size_t>(e)] = env_seed;
    try {
      envs[static_cast<std::size_t>(e)] =
          generate_cave(config.cave, config.dims, config.resolution, env_seed).environment;
    } catch (const GenerationFailed&) {
      ++result.generation_failures;
      continue;
    }
    ++result.environments;
    const Environment& env = *envs[static_cast<std::size_t>(e)];
    const std::pair<ProblemMedium, std::array<PlannerMode, 2>> problems[] = {
        {ProblemMedium::AirAir, {PlannerMode::Hybrid, PlannerMode::AirOnly}},
        {ProblemMedium::WaterWater, {PlannerMode::Hybrid, PlannerMode::WaterOnly}},
    };
    for (const auto& [problem, modes] : problems) {
      const Medium medium = problem == ProblemMedium::AirAir ? Medium::Air : Medium::Water;
      const auto ends = pick_endpoints(env, medium, margin,
                                       derive_seed(env_seed, problem == ProblemMedium::AirAir ? kStartTag : kWaterTag));
      if (!ends) {
        ++result.endpoint_failures;
        continue;
      }
      for (const PlannerMode mode : modes) trials.push_back({e, problem, mode, ends->first, ends->second});
    }
  }

  result.records.resize(trials.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < trials.size(); i = next++) {
      const Trial& t = trials[i];
      const Environment& env = *envs[static_cast<std::size_t>(t.env)];
      TrialRecord& rec = result.records[i];
      rec.env_index = t.env;
      rec.env_seed = env_seeds[static_cast<std::size_t>(t.env)];
      rec.problem = t.problem;
      rec.mode = t.mode;
      rec.start = t.start;
      rec.goal = t.goal;
      MissionConfig mc = config.mission;
      mc.planner.mode = t.mode;
      mc.seed = derive_seed(rec.env_seed, kGraphTag);
      mc.record_trace = false;
      try {
        WorldMap map = initial_map(env);
        const MissionResult m = run_mission(env, map, t.start, t.goal, mc, tables);
        rec.solved = m.solved;
        rec.outcome = m.reason;
        rec.graph_cost = m.graph_cost;
        rec.graph_duration = m.graph_duration;
        rec.graph_length = m.graph_length;
        rec.actual_cost = m.actual_cost;
        rec.length = m.length;
        rec.mean_speed = m.mean_speed;
        rec.duration = m.duration;
        rec.replans = m.replans;
        rec.graph_nodes = m.graph_nodes;
      } catch (const Error&) {
        rec.solved = false;
        rec.outcome = MissionOutcome::Diverged;
      }
      if (!rec.solved) rec.actual_cost = mc.battery;
    }
  };
  const int n_threads = std::min<int>(config.threads, std::max<int>(1, static_cast<int>(trials.size())));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int k = 0; k < n_threads; ++k) pool.emplace_back(worker);
  }
  return result;
}

double relative_difference(const TrialRecord& r) {
  return 100.0 * (r.graph_cost - r.actual_cost) / r.graph_cost;
}

double speed_increase(const TrialRecord& r) {
  const double planned = r.graph_length / r.graph_duration;
  return 100.0 * (r.mean_speed / planned - 1.0);
}

SummaryStats summarize(const std::vector<TrialRecord>& records) {
  SummaryStats s;
  const std::pair<ProblemMedium, PlannerMode> order[] = {
      {ProblemMedium::AirAir, PlannerMode::Hybrid},
      {ProblemMedium::AirAir, PlannerMode::AirOnly},
      {ProblemMedium::WaterWater, PlannerMode::Hybrid},
      {ProblemMedium::WaterWater, PlannerMode::WaterOnly},
  };
  for (const auto& [problem, mode] : order) {
    ModeSummary m;
    m.problem = problem;
    m.mode = mode;
    std::vector<double> actual;
    std::vector<double> graph;
    std::vector<double> abs_pct;
    std::vector<double> rel_pct;
    for (const TrialRecord& r : records) {
      if (r.problem != problem || r.mode != mode) continue;
      ++m.trials;
      actual.push_back(r.actual_cost);
      if (!r.solved) continue;
      ++m.solved;
      graph.push_back(r.graph_cost);
      rel_pct.push_back(relative_difference(r));
      abs_pct.push_back(std::abs(rel_pct.back()));
    }
    m.solve_rate = m.trials > 0 ? static_cast<double>(m.solved) / m.trials : 0.0;
    m.actual_mean = actual.empty() ? 0.0 : mean(actual);
    m.actual_se = standard_error(actual);
    m.graph_mean = graph.empty() ? 0.0 : mean(graph);
    m.graph_se = standard_error(graph);
    m.prediction_abs_pct = abs_pct.empty() ? 0.0 : mean(abs_pct);
    m.prediction_rel_pct = rel_pct.empty() ? 0.0 : mean(rel_pct);
    s.modes.push_back(m);
  }

  auto chi2 = [](const ModeSummary& a, const ModeSummary& b) {
    if (a.trials == 0 || b.trials == 0) return TestResult{std::nan(""), std::nan(""), false};
    return chi2_proportions(a.solved, a.trials, b.solved, b.trials);
  };
  s.chi2_air = chi2(s.modes[0], s.modes[1]);
  s.chi2_water = chi2(s.modes[2], s.modes[3]);

  // Jointly solved AirAir problems, matched by environment.
  std::vector<double> hyb_e;
  std::vector<double> air_e;
  std::vector<double> hyb_rate;
  std::vector<double> air_rate;
  for (const TrialRecord& h : records) {
    if (h.problem != ProblemMedium::AirAir || h.mode != PlannerMode::Hybrid || !h.solved) continue;
    for (const TrialRecord& a : records) {
      if (a.problem != ProblemMedium::AirAir || a.mode != PlannerMode::AirOnly || !a.solved) continue;
      if (a.env_index != h.env_index) continue;
      hyb_e.push_back(h.actual_cost);
      air_e.push_back(a.actual_cost);
      hyb_rate.push_back(h.actual_cost / h.length);
      air_rate.push_back(a.actual_cost / a.length);
    }
  }
  s.joint_air = static_cast<int>(hyb_e.size());
  s.joint_hybrid_mean = hyb_e.empty() ? 0.0 : mean(hyb_e);
  s.joint_air_only_mean = air_e.empty() ? 0.0 : mean(air_e);
  const TestResult none{std::nan(""), std::nan(""), false};
  s.f_energy = none;
  s.t_energy = none;
  if (hyb_rate.size() >= 3) {
    s.f_energy = f_test(hyb_rate, air_rate);
    const bool equal_var = s.f_energy.valid && s.f_energy.p >= 0.05;
    s.t_energy = t_test(hyb_rate, air_rate, equal_var);
  }

  std::vector<double> lengths;
  std::vector<double> speeds;
  std::vector<double> rel;
  for (const TrialRecord& r : records) {
    if (!r.solved) continue;
    lengths.push_back(r.length);
    speeds.push_back(speed_increase(r));
    rel.push_back(relative_difference(r));
  }
  s.solved_runs = static_cast<int>(rel.size());
  const Regression no_fit{std::nan(""), std::nan(""), std::nan(""), false};
  s.rel_vs_length = rel.size() >= 3 ? linregress(lengths, rel) : no_fit;
  s.rel_vs_speed = rel.size() >= 3 ? linregress(speeds, rel) : no_fit;
  return s;
}

void write_records_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << "env,env_seed,problem,mode,solved,outcome,graph_cost,graph_duration,graph_length,"
         "actual_cost,length,mean_speed,duration,replans,graph_nodes,start_i,start_j,start_k,"
         "goal_i,goal_j,goal_k\n";
  for (const TrialRecord& r : records) {
    out << r.env_index << ',' << r.env_seed << ',' << to_string(r.problem) << ','
        << to_string(r.mode) << ',' << (r.solved ? 1 : 0) << ',' << to_string(r.outcome) << ','
        << fmt(r.graph_cost) << ',' << fmt(r.graph_duration) << ',' << fmt(r.graph_length) << ','
        << fmt(r.actual_cost) << ',' << fmt(r.length) << ',' << fmt(r.mean_speed) << ','
        << fmt(r.duration) << ',' << r.replans << ',' << r.graph_nodes << ',' << r.start.i << ','
        << r.start.j << ',' << r.start.k << ',' << r.goal.i << ',' << r.goal.j << ',' << r.goal.k
        << '\n';
  }
}

std::vector<TrialRecord> read_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("records: missing header");
  std::vector<TrialRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 21) throw IoError("records: expected 21 fields, got " + std::to_string(f.size()));
    try {
      TrialRecord r;
      r.env_index = std::stoi(f[0]);
      r.env_seed = std::stoull(f[1]);
      r.problem = parse_problem_medium(f[2]);
      r.mode = parse_planner_mode(f[3]);
      r.solved = f[4] == "1";
      r.outcome = parse_outcome(f[5]);
      r.graph_cost = std::stod(f[6]);
      r.graph_duration = std::stod(f[7]);
      r.graph_length = std::stod(f[8]);
      r.actual_cost = std::stod(f[9]);
      r.length = std::stod(f[10]);
      r.mean_speed = std::stod(f[11]);
      r.duration = std::stod(f[12]);
      r.replans = std::stoi(f[13]);
      r.graph_nodes = std::stoi(f[14]);
      r.start = {std::stoi(f[15]), std::stoi(f[16]), std::stoi(f[17])};
      r.goal = {std::stoi(f[18]), std::stoi(f[19]), std::stoi(f[20])};
      out.push_back(r);
    } catch (const std::logic_error& e) {
      throw IoError(std::string("records: bad field: ") + e.what());
    }
  }
  return out;
}

void write_report(std::ostream& out, const SummaryStats& s, const std::vector<TrialRecord>& records) {
  auto test = [&](const char* name, const TestResult& t) {
    out << name << ": ";
    if (!t.valid) {
      out << "undefined\n";
      return;
    }
    out << "statistic " << fixed(t.statistic, 6) << ", p " << fmt(t.p) << '\n';
  };
  auto fit = [&](const char* name, const Regression& r) {
    out << name << ": ";
    if (!r.valid) {
      out << "undefined\n";
      return;
    }
    out << "slope " << fixed(r.slope, 6) << ", intercept " << fixed(r.intercept, 6) << ", r "
        << fixed(r.r, 6) << '\n';
  };

  out << "trials " << records.size() << ", solved " << s.solved_runs << "\n\n";
  out << "problem      mode        trials solved rate    actual_mean(J) actual_se(J) graph_mean(J) "
         "graph_se(J) pred_abs(%) pred_rel(%)\n";
  for (const ModeSummary& m : s.modes) {
    char row[256];
    std::snprintf(row, sizeof row, "%-12s %-11s %6d %6d %.4f %14.1f %12.1f %13.1f %11.1f %11.3f %11.3f\n",
                  to_string(m.problem).c_str(), to_string(m.mode).c_str(), m.trials, m.solved,
                  m.solve_rate, m.actual_mean, m.actual_se, m.graph_mean, m.graph_se,
                  m.prediction_abs_pct, m.prediction_rel_pct);
    out << row;
  }
  out << '\n';
  test("chi2 solve rate, air problems (hybrid vs air_only)", s.chi2_air);
  test("chi2 solve rate, water problems (hybrid vs water_only)", s.chi2_water);
  out << "jointly solved air problems: " << s.joint_air << ", hybrid mean "
      << fixed(s.joint_hybrid_mean, 1) << " J, air_only mean " << fixed(s.joint_air_only_mean, 1)
      << " J\n";
  test("F test, energy per metre (hybrid vs air_only)", s.f_energy);
  test("t test, energy per metre (hybrid vs air_only)", s.t_energy);
  fit("relative prediction difference (%) vs length (m)", s.rel_vs_length);
  fit("relative prediction difference (%) vs mean-speed increase (%)", s.rel_vs_speed);
  out << "\nOne trajectory is counted per attempted mission.\n";
}

void write_fig7_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << "env,problem,mode,length,speed_increase_pct,relative_difference_pct\n";
  for (const TrialRecord& r : records) {
    if (!r.solved) continue;
    out << r.env_index << ',' << to_string(r.problem) << ',' << to_string(r.mode) << ','
        << fmt(r.length) << ',' << fmt(speed_increase(r)) << ',' << fmt(relative_difference(r)) << '\n';
  }
}

void write_fig8_csv(std::ostream& out, const SummaryStats& s) {
  out << "problem,mode,trials,solved,solve_rate,actual_mean,actual_se,graph_mean,graph_se,"
         "prediction_abs_pct,prediction_rel_pct\n";
  for (const ModeSummary& m : s.modes) {
    out << to_string(m.problem) << ',' << to_string(m.mode) << ',' << m.trials << ',' << m.solved
        << ',' << fmt(m.solve_rate) << ',' << fmt(m.actual_mean) << ',' << fmt(m.actual_se) << ','
        << fmt(m.graph_mean) << ',' << fmt(m.graph_se) << ',' << fmt(m.prediction_abs_pct) << ','
        << fmt(m.prediction_rel_pct) << '\n';
  }
}

}  // namespace amphi
