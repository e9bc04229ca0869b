#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "amphi/dstar.hpp"
#include "amphi/graph.hpp"

namespace amphi {

struct EdgeCaseOutcome {
  bool path_found = false;
  std::vector<int> path;          ///< new path to goal (Complete) when found
  std::vector<int> return_path;   ///< Practical: route back to start over free edges, if any
  int nodes_added = 0;
};

/// Graph, pricing and D*-Lite state for one mission. Holds references to the
/// map and tables, which must outlive it.
class Planner {
 public:
  Planner(const WorldMap& map, const TableSet& tables, PlannerConfig config, const Voxel& start,
          const Voxel& goal, std::uint64_t seed);
  Planner(const Planner&) = delete;
  Planner& operator=(const Planner&) = delete;

  /// Path from `current` after the initial search, or empty on NoPath.
  std::vector<int> plan(int current);

  /// One online step at node `current`: reprice edges touching `changed`
  /// voxels, grow the graph from `sensed` (PRM on the go), repair the search.
  /// Returns the new path from `current` (empty on NoPath).
  std::vector<int> update(int current, std::span<const Voxel> changed,
                          std::span<const Voxel> sensed);

  /// Called when no finite path exists. Complete: add every eligible voxel
  /// sensed so far as a node and replan. Practical: report a return route.
  EdgeCaseOutcome edge_case(int current);

  [[nodiscard]] const MotionGraph& graph() const { return graph_; }
  [[nodiscard]] const PlannerConfig& config() const { return config_; }
  [[nodiscard]] double c_large() const { return c_large_; }
  [[nodiscard]] const DStarLite& search() const { return *dstar_; }
  [[nodiscard]] bool relaxed_used() const { return relaxed_used_; }
  [[nodiscard]] int step() const { return step_; }

  /// Sum of directional edge prices along consecutive path nodes.
  [[nodiscard]] double path_cost(std::span<const int> path) const;

 private:
  const WorldMap& map_;
  const TableSet& tables_;
  PlannerConfig config_;
  double c_large_;
  EdgePricer pricer_;
  std::uint64_t seed_;
  MotionGraph graph_;
  std::unique_ptr<DStarLite> dstar_;
  std::set<Voxel> sensed_all_;
  bool relaxed_used_ = false;
  int step_ = 0;
};

/// Cheapest route between two nodes using only Free edges (Dijkstra, ties by
/// node id). Empty if none.
std::vector<int> free_route(const MotionGraph& g, int from, int to);

}  // namespace amphi
