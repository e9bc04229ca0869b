#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "amphi/costtable.hpp"
#include "amphi/grid.hpp"

namespace amphi {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class EdgeClass : std::uint8_t { Free, AssumedBlocked, ConfirmedBlocked };
enum class PlannerMode : std::uint8_t { Hybrid, AirOnly, WaterOnly };
/// Modified prices edges through assumed obstacles at C_large; Standard at +inf.
enum class Pricing : std::uint8_t { Modified, Standard };
enum class EdgeCasePolicy : std::uint8_t { Practical, Complete };

std::string to_string(EdgeClass c);
std::string to_string(PlannerMode m);
std::string to_string(Pricing p);
std::string to_string(EdgeCasePolicy p);
PlannerMode parse_planner_mode(const std::string& s);
Pricing parse_pricing(const std::string& s);
EdgeCasePolicy parse_edge_case(const std::string& s);

/// True if a node in medium `m` may exist in a graph of this mode.
bool mode_allows(PlannerMode mode, Medium m);

struct PlannerConfig {
  double node_fraction = 0.1;    ///< expected N as a fraction of the mode's assumed-free voxels
  int n_nodes = -1;              ///< explicit N; overrides node_fraction when >= 0
  double r_max_edge = 5.0;       ///< m
  double relaxed_factor = 1.5;   ///< radius multiplier for isolated start/goal
  int k_new = 3;
  double c_large = 0.0;          ///< J; <= 0 means compute_c_large
  PlannerMode mode = PlannerMode::Hybrid;
  Pricing pricing = Pricing::Modified;
  EdgeCasePolicy edge_case = EdgeCasePolicy::Practical;

  /// Throws InvalidArgument; `resolution` bounds the relaxed radius by the table range.
  void validate(double resolution) const;
};

struct GraphNode {
  Voxel voxel;
  Vec3 position = Vec3::Zero();  ///< world voxel center
  Medium medium = Medium::Air;
};

struct GraphEdge {
  int a = -1;
  int b = -1;
  bool transition = false;
  EdgeClass cls = EdgeClass::Free;
  double table_ab = 0.0;  ///< stop-stop price a -> b if the edge were free
  double table_ba = 0.0;
  double cost_ab = 0.0;   ///< current price a -> b
  double cost_ba = 0.0;
  std::vector<Voxel> voxels;  ///< every voxel the segment touches

  [[nodiscard]] int other(int n) const { return n == a ? b : a; }
  [[nodiscard]] double cost_from(int n) const { return n == a ? cost_ab : cost_ba; }
};

/// Nodes at voxel centers with undirected edges carrying directional prices.
class MotionGraph {
 public:
  MotionGraph() = default;
  explicit MotionGraph(GridGeometry geometry) : geometry_(geometry) {}

  /// Adds a node, or returns the id of the node already at that voxel.
  int add_node(const Voxel& v, Medium medium);
  [[nodiscard]] std::optional<int> find_node(const Voxel& v) const;
  int add_edge(GraphEdge edge);

  [[nodiscard]] const std::vector<GraphNode>& nodes() const { return nodes_; }
  [[nodiscard]] const GraphNode& node(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  [[nodiscard]] const std::vector<GraphEdge>& edges() const { return edges_; }
  [[nodiscard]] const GraphEdge& edge(int id) const { return edges_.at(static_cast<std::size_t>(id)); }
  GraphEdge& edge_mut(int id) { return edges_.at(static_cast<std::size_t>(id)); }
  [[nodiscard]] const std::vector<int>& incident(int node) const {
    return incident_.at(static_cast<std::size_t>(node));
  }
  /// Edges whose segment touches voxel v.
  [[nodiscard]] std::span<const int> edges_touching(const Voxel& v) const;
  [[nodiscard]] std::optional<int> edge_between(int a, int b) const;
  [[nodiscard]] const GridGeometry& geometry() const { return geometry_; }
  [[nodiscard]] std::size_t size() const { return nodes_.size(); }

  int start = -1;
  int goal = -1;

 private:
  GridGeometry geometry_;
  std::vector<GraphNode> nodes_;
  std::vector<GraphEdge> edges_;
  std::vector<std::vector<int>> incident_;
  std::unordered_map<Voxel, int, VoxelHash> node_at_;
  std::unordered_map<Voxel, std::vector<int>, VoxelHash> edges_at_;
};

/// Worst belief along a segment: a wall or confirmed obstacle makes it
/// ConfirmedBlocked, otherwise any assumed obstacle makes it AssumedBlocked.
EdgeClass classify_edge(const WorldMap& map, std::span<const Voxel> voxels);

/// C_large = 2.5 * (largest grid dimension in m) * (largest unit-displacement
/// stop-stop energy over both media).
double compute_c_large(const GridGeometry& geometry, const TableSet& tables);

/// Euclidean distance times the cheapest energy per metre in either table.
double heuristic(const Vec3& a, const Vec3& b, const TableSet& tables);

/// Stop-stop energy and duration of moving between two nodes, ignoring
/// obstacles (transition composition for cross-medium pairs).
TableEntry stop_stop_entry(const TableSet& tables, const GraphNode& from, const GraphNode& to,
                           const WaterSurface& water);

/// Prices edges against the current map.
class EdgePricer {
 public:
  EdgePricer(const WorldMap& map, const TableSet& tables, double c_large, Pricing pricing);

  /// Fills voxels, transition flag, table prices, class and current prices.
  [[nodiscard]] GraphEdge make_edge(const MotionGraph& g, int a, int b) const;
  /// Re-classifies an existing edge; returns true if its prices changed.
  bool reprice(GraphEdge& e) const;

  [[nodiscard]] const WorldMap& map() const { return map_; }
  [[nodiscard]] const TableSet& tables() const { return tables_; }
  [[nodiscard]] double c_large() const { return c_large_; }
  [[nodiscard]] Pricing pricing() const { return pricing_; }

 private:
  void apply_class(GraphEdge& e) const;

  const WorldMap& map_;
  const TableSet& tables_;
  double c_large_;
  Pricing pricing_;
};

/// True if an edge between these nodes is allowed (same medium, or a vertical
/// pair across the surface) and no longer than `radius`.
bool may_connect(const GraphNode& a, const GraphNode& b, double radius);

/// Connects `node` to every other node it may connect to within `radius`.
/// Returns the new edge ids in ascending order of the other node id.
std::vector<int> connect_node(MotionGraph& g, int node, double radius, const EdgePricer& pricer);

/// Assumed-free, non-wall voxels whose medium the mode allows, in index order.
std::vector<Voxel> candidate_voxels(const WorldMap& map, PlannerMode mode);

/// Hash priority used to pick "random" voxels: the same voxel and seed always
/// get the same priority, so graphs built with a shared seed are nested.
std::uint64_t voxel_priority(const Voxel& v, std::uint64_t seed);

/// Priorities below this value are selected when sampling by fraction.
std::uint64_t priority_cut(double fraction);
/// Number of PRM nodes a config asks for over `candidates` voxels (the
/// expected count when sampling by fraction).
int node_budget(const PlannerConfig& config, std::size_t candidates);

/// Builds the a-priori graph: start, goal and the candidate voxels whose
/// priority falls under priority_cut(node_fraction), or the n_nodes
/// lowest-priority ones when n_nodes is set; all pairs within r_MaxEdge connected. An isolated start or goal is
/// connected with the relaxed radius (`relaxed_used` reports it).
/// Throws InvalidArgument if start or goal is occupied in the map, or its
/// medium is excluded by the mode.
MotionGraph sample_prm(const WorldMap& map, const Voxel& start, const Voxel& goal,
                       const PlannerConfig& config, const EdgePricer& pricer, std::uint64_t seed,
                       bool* relaxed_used = nullptr);

/// Re-classifies every edge touching a changed voxel. Returns changed edge ids, sorted.
std::vector<int> reprice_edges(MotionGraph& g, std::span<const Voxel> changed,
                               const EdgePricer& pricer);

struct GraphGrowth {
  std::vector<int> nodes;  ///< new node ids
  std::vector<int> edges;  ///< new edge ids
};

/// Adds up to k_new nodes drawn from the sensed voxels that are free in the map,
/// medium-compatible, and not yet nodes, then connects them.
GraphGrowth prm_on_the_go(MotionGraph& g, std::span<const Voxel> sensed, int k_new,
                          const PlannerConfig& config, const EdgePricer& pricer,
                          std::uint64_t seed);

/// Adds every eligible voxel of `pool` as a node (the exhaustive edge-case step).
GraphGrowth add_all_nodes(MotionGraph& g, std::span<const Voxel> pool,
                          const PlannerConfig& config, const EdgePricer& pricer);

/// Text export: header line, one "node id i j k medium" line per node, one
/// "edge id a b class cost_ab cost_ba" line per edge (%.17g, inf for +inf).
void write_graph(std::ostream& out, const MotionGraph& g);

}  // namespace amphi
