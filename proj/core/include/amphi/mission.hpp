#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "amphi/controller.hpp"
#include "amphi/costtable.hpp"
#include "amphi/graph.hpp"
#include "amphi/params.hpp"
#include "amphi/sensor.hpp"

namespace amphi {

enum class MissionOutcome : std::uint8_t {
  ReachedGoal,
  NoPath,
  BatteryExhausted,
  StepLimit,
  TrackingLost,
  Diverged,
};
std::string to_string(MissionOutcome o);

struct MissionConfig {
  PlannerConfig planner;
  DynamicsParams dynamics;
  SensorParams sensor;
  double battery = 1.2e6;          ///< J
  double max_time = 3600.0;        ///< simulated seconds before StepLimit
  int max_node_arrivals = 2000;
  double tracking_abort = 3.0;     ///< m
  double arrival_speed = 0.05;     ///< m/s
  bool look_ahead = true;          ///< also cast a ray along the next edge before flying it
  bool record_trace = false;
  std::uint64_t seed = 0;

  void validate() const;
};

struct MissionResult {
  bool solved = false;
  MissionOutcome reason = MissionOutcome::NoPath;
  std::string diagnostic;
  double graph_cost = 0.0;       ///< J, stop-stop prices of the edges flown
  double graph_duration = 0.0;   ///< s, stop-stop durations of the edges flown
  double graph_length = 0.0;     ///< m, straight-line length of the edges flown
  double actual_cost = 0.0;      ///< J, integrated electrical energy
  double length = 0.0;           ///< m, executed trajectory length
  double duration = 0.0;         ///< s
  double mean_speed = 0.0;       ///< m/s
  int replans = 0;
  int node_arrivals = 0;
  int collision_steps = 0;       ///< integration steps spent inside an occupied voxel
  int confirmed_collision_steps = 0;  ///< steps inside a voxel the map held as a wall or confirmed obstacle
  int medium_switches = 0;
  int graph_nodes = 0;
  bool relaxed_used = false;
  std::vector<Voxel> path;          ///< nodes actually reached, start first
  std::vector<Voxel> initial_path;  ///< first planned path
  std::vector<Voxel> return_path;   ///< Practical edge case: route back to start
  std::vector<std::size_t> confirmed_counts;  ///< map confirmed cells after each sensing pass
  std::vector<TraceSample> trace;
};

/// Nodes n0, n1, n2 from the head of a path; n2 == n1 when only two remain.
/// Throws InvalidArgument on a path with fewer than two nodes.
std::array<int, 3> next_triple(std::span<const int> path);

/// Senses at every node arrival, updates map and graph, replans with D*-Lite,
/// builds a spline from the actual vehicle state through the next node toward
/// the one after, and flies its first polynomial under full dynamics with the
/// medium chosen from the vehicle height each step. The final node is flown as
/// a single stop and counts as reached once inside the settling corridor below
/// `arrival_speed`. `map` is updated in place.
MissionResult run_mission(const Environment& env, WorldMap& map, const Voxel& start,
                          const Voxel& goal, const MissionConfig& config, const TableSet& tables);

/// CSV with one row per integration step:
/// t,x,y,h,vx,vy,vh,ax,ay,ah,qw,qx,qy,qz,p,q,r,w1,w2,w3,w4,power,energy,xd,yd,hd,medium
/// (positions in world coordinates, h up).
void write_trace_csv(std::ostream& out, const std::vector<TraceSample>& trace);

}  // namespace amphi
