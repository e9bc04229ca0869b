#include "amphi/mission.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>

#include "amphi/errors.hpp"
#include "amphi/planner.hpp"

namespace amphi {
namespace {

bool same_tail(const std::vector<int>& previous, const std::vector<int>& next) {
  return previous == next;
}

// Remainder of a path once the vehicle stands on `current`.
std::vector<int> advance_path(const std::vector<int>& path, int current) {
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (path[i] == current) return {path.begin() + static_cast<std::ptrdiff_t>(i), path.end()};
  }
  return {};
}

}  // namespace

std::string to_string(MissionOutcome o) {
  switch (o) {
    case MissionOutcome::ReachedGoal: return "reached_goal";
    case MissionOutcome::NoPath: return "no_path";
    case MissionOutcome::BatteryExhausted: return "battery_exhausted";
    case MissionOutcome::StepLimit: return "step_limit";
    case MissionOutcome::TrackingLost: return "tracking_lost";
    case MissionOutcome::Diverged: return "diverged";
  }
  return "?";
}

void MissionConfig::validate() const {
  dynamics.validate();
  sensor.validate();
  if (!(battery > 0.0)) throw InvalidArgument("battery capacity must be positive");
  if (!(max_time > 0.0)) throw InvalidArgument("max_time must be positive");
  if (max_node_arrivals < 1) throw InvalidArgument("max_node_arrivals must be >= 1");
  if (!(tracking_abort > 0.0)) throw InvalidArgument("tracking_abort must be positive");
  if (!(arrival_speed > 0.0)) throw InvalidArgument("arrival_speed must be positive");
}

std::array<int, 3> next_triple(std::span<const int> path) {
  if (path.size() < 2) throw InvalidArgument("next_triple needs at least two path nodes");
  return {path[0], path[1], path.size() > 2 ? path[2] : path[1]};
}

MissionResult run_mission(const Environment& env, WorldMap& map, const Voxel& start,
                          const Voxel& goal, const MissionConfig& config, const TableSet& tables) {
  config.validate();
  const GridGeometry& geo = env.geometry();
  if (!(geo == map.geometry())) throw InvalidArgument("environment and map grids differ");
  if (env.occupied(start)) throw InvalidArgument("start voxel is occupied");

  MissionResult r;
  Planner planner(map, tables, config.planner, start, goal, config.seed);
  const MotionGraph& g = planner.graph();
  r.relaxed_used = planner.relaxed_used();

  FlightOptions fo;
  fo.dt = config.dynamics.dt;
  fo.water = env.water;
  fo.record_trace = config.record_trace;
  VehicleState s0;
  s0.x = world_to_inertial(g.node(g.start).position);
  Flight flight(config.dynamics.make_stack(), fo, s0);

  Vec3 prev = s0.x;
  auto advance = [&](const KinematicState& des) -> std::optional<MissionOutcome> {
    const VehicleState& s = flight.state();
    if (s.energy >= config.battery) return MissionOutcome::BatteryExhausted;
    if (s.t >= config.max_time) return MissionOutcome::StepLimit;
    if ((s.x - des.x).norm() > config.tracking_abort) return MissionOutcome::TrackingLost;
    try {
      flight.step(des);
    } catch (const NumericFailure&) {
      return MissionOutcome::Diverged;
    }
    const Vec3& x = flight.state().x;
    r.length += (x - prev).norm();
    prev = x;
    const Vec3 w = inertial_to_world(x);
    if (!geo.contains(w)) {
      ++r.collision_steps;
      ++r.confirmed_collision_steps;
    } else {
      const Voxel v = geo.voxel_at(w);
      if (env.occupied(v)) ++r.collision_steps;
      if (map.is_wall(v) || map.state(v) == CellState::ConfirmedObstacle) ++r.confirmed_collision_steps;
    }
    return std::nullopt;
  };

  auto finish = [&](MissionOutcome reason, std::string diagnostic) {
    r.reason = reason;
    r.diagnostic = std::move(diagnostic);
    r.solved = reason == MissionOutcome::ReachedGoal;
    r.actual_cost = flight.state().energy;
    r.duration = flight.state().t;
    r.mean_speed = r.duration > 0.0 ? r.length / r.duration : 0.0;
    r.medium_switches = flight.medium_switches();
    r.graph_nodes = static_cast<int>(g.size());
    if (config.record_trace) r.trace = flight.take_trace();
    return r;
  };

  int current = g.start;
  r.path.push_back(start);
  std::vector<int> path = planner.plan(current);
  for (const int n : path) r.initial_path.push_back(g.node(n).voxel);

  auto replan = [&](std::vector<int> next) {
    if (!same_tail(path, next)) ++r.replans;
    path = std::move(next);
  };

  while (true) {
    if (++r.node_arrivals > config.max_node_arrivals) {
      return finish(MissionOutcome::StepLimit, "node arrival limit reached");
    }
    const Vec3 here = g.node(current).position;
    path = advance_path(path, current);

    const SensorReading reading = sense(env, here, config.sensor);
    const std::vector<Voxel> changed = apply_reading(map, reading);
    r.confirmed_counts.push_back(map.confirmed_count());
    replan(planner.update(current, changed, reading.sensed()));

    bool exhausted = false;
    for (int look = 0;; ++look) {
      if (path.empty()) {
        if (config.planner.edge_case == EdgeCasePolicy::Complete && !exhausted) {
          exhausted = true;
          const EdgeCaseOutcome ec = planner.edge_case(current);
          replan(ec.path);
          if (!path.empty()) continue;
        } else if (config.planner.edge_case == EdgeCasePolicy::Practical) {
          const EdgeCaseOutcome ec = planner.edge_case(current);
          for (const int n : ec.return_path) r.return_path.push_back(g.node(n).voxel);
        }
        return finish(MissionOutcome::NoPath, "no finite-cost path to goal");
      }
      if (!config.look_ahead || look > 64) break;
      const SensorReading ray =
          sense_segment(env, here, g.node(path[1]).position, config.sensor.radius);
      const std::vector<Voxel> ray_changed = apply_reading(map, ray);
      r.confirmed_counts.push_back(map.confirmed_count());
      if (ray_changed.empty()) break;
      replan(planner.update(current, ray_changed, ray.sensed()));
    }

    const auto [n0, n1, n2] = next_triple(path);
    const TableEntry price = stop_stop_entry(tables, g.node(n0), g.node(n1), env.water);
    r.graph_cost += price.energy;
    r.graph_duration += price.duration;
    r.graph_length += (g.node(n1).position - g.node(n0).position).norm();

    const VehicleState& s = flight.state();
    const KinematicState from{s.x, s.v, flight.acceleration()};
    const Vec3 p1 = world_to_inertial(g.node(n1).position);
    const Vec3 p2 = world_to_inertial(g.node(n2).position);
    TrajectorySegment seg;
    try {
      seg = build_spline(from, s.t, p1, p2, config.dynamics.v_c, config.dynamics.spline);
    } catch (const InvalidArgument& e) {
      return finish(MissionOutcome::Diverged, std::string("spline: ") + e.what());
    }

    if (n1 != n2) {
      while (flight.state().t < seg.t1) {
        if (const auto stop = advance(eval_spline(seg, flight.state().t))) {
          return finish(*stop, "aborted while flying to node");
        }
      }
      current = n1;
      r.path.push_back(g.node(current).voxel);
      continue;
    }

    // Final stop at the goal.
    const SettlingCriterion& sc = config.dynamics.settling;
    Vec3 corridor;
    for (int k = 0; k < 3; ++k) corridor[k] = std::max(sc.fraction * std::abs(p1[k] - from.x[k]), sc.floor);
    const double deadline = seg.t2 + sc.timeout;
    while (true) {
      const VehicleState& now = flight.state();
      const bool inside = ((now.x - p1).cwiseAbs().array() <= corridor.array()).all();
      if (now.t >= seg.t1 && inside && now.v.norm() < config.arrival_speed) break;
      if (now.t > deadline) return finish(MissionOutcome::StepLimit, "did not settle at goal");
      if (const auto stop = advance(eval_spline(seg, std::min(now.t, seg.t2)))) {
        return finish(*stop, "aborted during final approach");
      }
    }
    current = n1;
    r.path.push_back(g.node(current).voxel);
    if (current == g.goal) return finish(MissionOutcome::ReachedGoal, "");
  }
}

void write_trace_csv(std::ostream& out, const std::vector<TraceSample>& trace) {
  out << "t,x,y,h,vx,vy,vh,ax,ay,ah,qw,qx,qy,qz,p,q,r,w1,w2,w3,w4,power,energy,xd,yd,hd,medium\n";
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
  };
  for (const TraceSample& s : trace) {
    const double row[] = {s.t,       s.x.x(),   s.x.y(),   -s.x.z(),  s.v.x(),   s.v.y(),
                          -s.v.z(),  s.a.x(),   s.a.y(),   -s.a.z(),  s.q.w,     s.q.v.x(),
                          s.q.v.y(), s.q.v.z(), s.w.x(),   s.w.y(),   s.w.z(),   s.omega[0],
                          s.omega[1], s.omega[2], s.omega[3], s.power, s.energy, s.x_d.x(),
                          s.x_d.y(), -s.x_d.z()};
    for (const double v : row) {
      num(v);
      out << ',';
    }
    out << to_string(s.medium) << '\n';
  }
}

}  // namespace amphi
