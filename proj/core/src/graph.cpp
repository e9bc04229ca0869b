#include "amphi/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "amphi/errors.hpp"
#include "amphi/line_voxels.hpp"
#include "amphi/random.hpp"

namespace amphi {
namespace {

std::string fmt_cost(double v) {
  if (std::isinf(v)) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool eligible(const WorldMap& map, const Voxel& v, PlannerMode mode) {
  return !map.is_wall(v) && !is_obstacle(map.state(v)) && mode_allows(mode, map.medium_of(v));
}

GraphGrowth add_nodes(MotionGraph& g, const std::vector<Voxel>& picked, const PlannerConfig& config,
                      const EdgePricer& pricer) {
  GraphGrowth out;
  for (const Voxel& v : picked) {
    const auto before = g.size();
    const int id = g.add_node(v, pricer.map().medium_of(v));
    if (g.size() > before) out.nodes.push_back(id);
  }
  for (const int id : out.nodes) {
    const auto added = connect_node(g, id, config.r_max_edge, pricer);
    out.edges.insert(out.edges.end(), added.begin(), added.end());
  }
  std::sort(out.edges.begin(), out.edges.end());
  return out;
}

}  // namespace

std::string to_string(EdgeClass c) {
  switch (c) {
    case EdgeClass::Free: return "free";
    case EdgeClass::AssumedBlocked: return "assumed_blocked";
    case EdgeClass::ConfirmedBlocked: return "confirmed_blocked";
  }
  return "?";
}

std::string to_string(PlannerMode m) {
  switch (m) {
    case PlannerMode::Hybrid: return "hybrid";
    case PlannerMode::AirOnly: return "air_only";
    case PlannerMode::WaterOnly: return "water_only";
  }
  return "?";
}

std::string to_string(Pricing p) { return p == Pricing::Modified ? "modified" : "standard"; }

std::string to_string(EdgeCasePolicy p) {
  return p == EdgeCasePolicy::Practical ? "practical" : "complete";
}

PlannerMode parse_planner_mode(const std::string& s) {
  if (s == "hybrid") return PlannerMode::Hybrid;
  if (s == "air_only" || s == "air") return PlannerMode::AirOnly;
  if (s == "water_only" || s == "water") return PlannerMode::WaterOnly;
  throw InvalidArgument("unknown planner mode '" + s + "'");
}

Pricing parse_pricing(const std::string& s) {
  if (s == "modified") return Pricing::Modified;
  if (s == "standard") return Pricing::Standard;
  throw InvalidArgument("unknown pricing '" + s + "'");
}

EdgeCasePolicy parse_edge_case(const std::string& s) {
  if (s == "practical") return EdgeCasePolicy::Practical;
  if (s == "complete") return EdgeCasePolicy::Complete;
  throw InvalidArgument("unknown edge-case policy '" + s + "'");
}

bool mode_allows(PlannerMode mode, Medium m) {
  switch (mode) {
    case PlannerMode::Hybrid: return true;
    case PlannerMode::AirOnly: return m == Medium::Air;
    case PlannerMode::WaterOnly: return m == Medium::Water;
  }
  return false;
}

void PlannerConfig::validate(double resolution) const {
  if (!(node_fraction >= 0.0 && node_fraction <= 1.0)) throw InvalidArgument("node_fraction must be in [0,1]");
  if (!(r_max_edge > 0.0)) throw InvalidArgument("r_max_edge must be positive");
  if (!(relaxed_factor >= 1.0)) throw InvalidArgument("relaxed_factor must be >= 1");
  const double limit = CostTable::kRange * resolution;
  if (r_max_edge * relaxed_factor > limit + 1e-12) {
    throw InvalidArgument("relaxed edge radius exceeds the cost table range");
  }
  if (k_new < 0) throw InvalidArgument("k_new must be >= 0");
  if (std::isnan(c_large) || std::isinf(c_large)) throw InvalidArgument("c_large must be finite");
}

int MotionGraph::add_node(const Voxel& v, Medium medium) {
  if (!geometry_.in_bounds(v)) throw BoundsError("graph node outside grid");
  if (const auto it = node_at_.find(v); it != node_at_.end()) return it->second;
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back({v, geometry_.center(v), medium});
  incident_.emplace_back();
  node_at_.emplace(v, id);
  return id;
}

std::optional<int> MotionGraph::find_node(const Voxel& v) const {
  if (const auto it = node_at_.find(v); it != node_at_.end()) return it->second;
  return std::nullopt;
}

int MotionGraph::add_edge(GraphEdge edge) {
  const int id = static_cast<int>(edges_.size());
  incident_.at(static_cast<std::size_t>(edge.a)).push_back(id);
  incident_.at(static_cast<std::size_t>(edge.b)).push_back(id);
  for (const Voxel& v : edge.voxels) edges_at_[v].push_back(id);
  edges_.push_back(std::move(edge));
  return id;
}

std::span<const int> MotionGraph::edges_touching(const Voxel& v) const {
  if (const auto it = edges_at_.find(v); it != edges_at_.end()) return it->second;
  return {};
}

std::optional<int> MotionGraph::edge_between(int a, int b) const {
  for (const int e : incident(a)) {
    if (edges_[static_cast<std::size_t>(e)].other(a) == b) return e;
  }
  return std::nullopt;
}

EdgeClass classify_edge(const WorldMap& map, std::span<const Voxel> voxels) {
  EdgeClass worst = EdgeClass::Free;
  for (const Voxel& v : voxels) {
    const CellState s = map.state(v);
    if (map.is_wall(v) || s == CellState::ConfirmedObstacle) return EdgeClass::ConfirmedBlocked;
    if (s == CellState::AssumedObstacle) worst = EdgeClass::AssumedBlocked;
  }
  return worst;
}

double compute_c_large(const GridGeometry& geometry, const TableSet& tables) {
  const double l_max = geometry.dims().largest() * geometry.resolution();
  return 2.5 * l_max * tables.max_unit_cost();
}

double heuristic(const Vec3& a, const Vec3& b, const TableSet& tables) {
  return (a - b).norm() * tables.min_rate();
}

TableEntry stop_stop_entry(const TableSet& tables, const GraphNode& from, const GraphNode& to,
                           const WaterSurface& water) {
  if (from.medium != to.medium) return transition_entry(tables, from.position, to.position, water);
  const Displacement d{to.voxel.i - from.voxel.i, to.voxel.j - from.voxel.j, to.voxel.k - from.voxel.k};
  return tables.table(from.medium).entry(d);
}

EdgePricer::EdgePricer(const WorldMap& map, const TableSet& tables, double c_large, Pricing pricing)
    : map_(map), tables_(tables), c_large_(c_large), pricing_(pricing) {
  if (!(c_large > 0.0) || std::isinf(c_large)) throw InvalidArgument("C_large must be positive and finite");
  if (map.geometry().resolution() != tables.resolution()) {
    throw StaleTable("cost tables were built for a different voxel size");
  }
}

GraphEdge EdgePricer::make_edge(const MotionGraph& g, int a, int b) const {
  const GraphNode& na = g.node(a);
  const GraphNode& nb = g.node(b);
  GraphEdge e;
  e.a = a;
  e.b = b;
  e.transition = na.medium != nb.medium;
  e.voxels = line_voxels(na.position, nb.position, map_.geometry());
  e.table_ab = stop_stop_entry(tables_, na, nb, map_.water).energy;
  e.table_ba = stop_stop_entry(tables_, nb, na, map_.water).energy;
  e.cls = classify_edge(map_, e.voxels);
  apply_class(e);
  return e;
}

void EdgePricer::apply_class(GraphEdge& e) const {
  switch (e.cls) {
    case EdgeClass::Free:
      e.cost_ab = e.table_ab;
      e.cost_ba = e.table_ba;
      break;
    case EdgeClass::AssumedBlocked:
      e.cost_ab = e.cost_ba = pricing_ == Pricing::Modified ? c_large_ : kInfinity;
      break;
    case EdgeClass::ConfirmedBlocked:
      e.cost_ab = e.cost_ba = kInfinity;
      break;
  }
}

bool EdgePricer::reprice(GraphEdge& e) const {
  const double ab = e.cost_ab;
  const double ba = e.cost_ba;
  e.cls = classify_edge(map_, e.voxels);
  apply_class(e);
  return ab != e.cost_ab || ba != e.cost_ba;
}

bool may_connect(const GraphNode& a, const GraphNode& b, double radius) {
  if (a.voxel == b.voxel) return false;
  if ((a.position - b.position).norm() > radius + 1e-9) return false;
  if (a.medium == b.medium) return true;
  return a.voxel.i == b.voxel.i && a.voxel.j == b.voxel.j;
}

std::vector<int> connect_node(MotionGraph& g, int node, double radius, const EdgePricer& pricer) {
  std::vector<int> added;
  const int n = static_cast<int>(g.size());
  for (int other = 0; other < n; ++other) {
    if (other == node) continue;
    if (!may_connect(g.node(node), g.node(other), radius)) continue;
    if (g.edge_between(node, other)) continue;
    // Keep the lower id as endpoint a so edge layout is independent of insertion order.
    const int a = std::min(node, other);
    const int b = std::max(node, other);
    added.push_back(g.add_edge(pricer.make_edge(g, a, b)));
  }
  return added;
}

std::vector<Voxel> candidate_voxels(const WorldMap& map, PlannerMode mode) {
  std::vector<Voxel> out;
  const auto& geo = map.geometry();
  const std::size_t n = geo.dims().volume();
  for (std::size_t idx = 0; idx < n; ++idx) {
    const Voxel v = geo.voxel(idx);
    if (eligible(map, v, mode)) out.push_back(v);
  }
  return out;
}

std::uint64_t priority_cut(double fraction) {
  if (fraction >= 1.0) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(std::ldexp(fraction, 64));
}

std::uint64_t voxel_priority(const Voxel& v, std::uint64_t seed) {
  const std::uint64_t key = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(v.i)) << 42) ^
                            (static_cast<std::uint64_t>(static_cast<std::uint32_t>(v.j)) << 21) ^
                            static_cast<std::uint64_t>(static_cast<std::uint32_t>(v.k));
  return splitmix64(splitmix64(seed) ^ splitmix64(key));
}

int node_budget(const PlannerConfig& config, std::size_t candidates) {
  if (config.n_nodes >= 0) return config.n_nodes;
  return static_cast<int>(std::llround(config.node_fraction * static_cast<double>(candidates)));
}

MotionGraph sample_prm(const WorldMap& map, const Voxel& start, const Voxel& goal,
                       const PlannerConfig& config, const EdgePricer& pricer, std::uint64_t seed,
                       bool* relaxed_used) {
  config.validate(map.geometry().resolution());
  for (const Voxel& v : {start, goal}) {
    if (!map.geometry().in_bounds(v)) throw BoundsError("start/goal outside grid");
    if (map.is_wall(v) || is_obstacle(map.state(v))) throw InvalidArgument("start/goal voxel is occupied in the map");
    if (!mode_allows(config.mode, map.medium_of(v))) throw InvalidArgument("start/goal medium excluded by planner mode");
  }
  if (start == goal) throw InvalidArgument("start and goal coincide");

  MotionGraph g(map.geometry());
  g.start = g.add_node(start, map.medium_of(start));
  g.goal = g.add_node(goal, map.medium_of(goal));

  std::vector<Voxel> candidates = candidate_voxels(map, config.mode);
  const auto budget = static_cast<std::size_t>(std::max(0, node_budget(config, candidates.size())));
  std::vector<std::pair<std::uint64_t, Voxel>> ranked;
  ranked.reserve(candidates.size());
  for (const Voxel& v : candidates) {
    if (v == start || v == goal) continue;
    ranked.emplace_back(voxel_priority(v, seed), v);
  }
  std::size_t take = 0;
  if (config.n_nodes >= 0) {
    take = std::min(budget, ranked.size());
  } else {
    // Keep every voxel under a fixed priority cut: each mode gets the same
    // density, and a hybrid graph holds exactly the single-medium nodes.
    const auto selected = [cut = priority_cut(config.node_fraction)](const auto& r) { return r.first < cut; };
    take = static_cast<std::size_t>(std::count_if(ranked.begin(), ranked.end(), selected));
  }
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(take), ranked.end());
  for (std::size_t i = 0; i < take; ++i) g.add_node(ranked[i].second, map.medium_of(ranked[i].second));

  for (int n = 0; n < static_cast<int>(g.size()); ++n) connect_node(g, n, config.r_max_edge, pricer);

  bool relaxed = false;
  for (const int endpoint : {g.start, g.goal}) {
    if (g.incident(endpoint).empty()) {
      connect_node(g, endpoint, config.r_max_edge * config.relaxed_factor, pricer);
      relaxed = true;
    }
  }
  if (relaxed_used) *relaxed_used = relaxed;
  return g;
}

std::vector<int> reprice_edges(MotionGraph& g, std::span<const Voxel> changed,
                               const EdgePricer& pricer) {
  std::vector<int> touched;
  for (const Voxel& v : changed) {
    const auto ids = g.edges_touching(v);
    touched.insert(touched.end(), ids.begin(), ids.end());
  }
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
  std::vector<int> out;
  for (const int id : touched) {
    if (pricer.reprice(g.edge_mut(id))) out.push_back(id);
  }
  return out;
}

GraphGrowth prm_on_the_go(MotionGraph& g, std::span<const Voxel> sensed, int k_new,
                          const PlannerConfig& config, const EdgePricer& pricer,
                          std::uint64_t seed) {
  if (k_new <= 0) return {};
  std::vector<std::pair<std::uint64_t, Voxel>> ranked;
  for (const Voxel& v : sensed) {
    if (!eligible(pricer.map(), v, config.mode) || g.find_node(v)) continue;
    ranked.emplace_back(voxel_priority(v, seed), v);
  }
  std::sort(ranked.begin(), ranked.end());
  ranked.erase(std::unique(ranked.begin(), ranked.end()), ranked.end());
  std::vector<Voxel> picked;
  for (std::size_t i = 0; i < ranked.size() && static_cast<int>(picked.size()) < k_new; ++i) {
    picked.push_back(ranked[i].second);
  }
  return add_nodes(g, picked, config, pricer);
}

GraphGrowth add_all_nodes(MotionGraph& g, std::span<const Voxel> pool, const PlannerConfig& config,
                          const EdgePricer& pricer) {
  std::vector<Voxel> picked;
  for (const Voxel& v : pool) {
    if (eligible(pricer.map(), v, config.mode) && !g.find_node(v)) picked.push_back(v);
  }
  std::sort(picked.begin(), picked.end());
  picked.erase(std::unique(picked.begin(), picked.end()), picked.end());
  return add_nodes(g, picked, config, pricer);
}

void write_graph(std::ostream& out, const MotionGraph& g) {
  out << "amphi-graph 1\n";
  out << "nodes " << g.nodes().size() << " edges " << g.edges().size() << " start " << g.start
      << " goal " << g.goal << '\n';
  for (std::size_t i = 0; i < g.nodes().size(); ++i) {
    const GraphNode& n = g.nodes()[i];
    out << "node " << i << ' ' << n.voxel.i << ' ' << n.voxel.j << ' ' << n.voxel.k << ' '
        << to_string(n.medium) << '\n';
  }
  for (std::size_t i = 0; i < g.edges().size(); ++i) {
    const GraphEdge& e = g.edges()[i];
    out << "edge " << i << ' ' << e.a << ' ' << e.b << ' ' << to_string(e.cls) << ' '
        << fmt_cost(e.cost_ab) << ' ' << fmt_cost(e.cost_ba) << '\n';
  }
}

}  // namespace amphi
