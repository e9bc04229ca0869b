#include "amphi/planner.hpp"

#include <algorithm>
#include <queue>

#include "amphi/errors.hpp"
#include "amphi/random.hpp"

namespace amphi {

Planner::Planner(const WorldMap& map, const TableSet& tables, PlannerConfig config,
                 const Voxel& start, const Voxel& goal, std::uint64_t seed)
    : map_(map),
      tables_(tables),
      config_(config),
      c_large_(config.c_large > 0.0 ? config.c_large : compute_c_large(map.geometry(), tables)),
      pricer_(map, tables, c_large_, config.pricing),
      seed_(seed) {
  graph_ = sample_prm(map_, start, goal, config_, pricer_, derive_seed(seed_, 0), &relaxed_used_);
  dstar_ = std::make_unique<DStarLite>(graph_, [this](int a, int b) {
    return heuristic(graph_.node(a).position, graph_.node(b).position, tables_);
  });
}

std::vector<int> Planner::plan(int current) {
  dstar_->plan(current);
  return dstar_->path(current);
}

std::vector<int> Planner::update(int current, std::span<const Voxel> changed,
                                 std::span<const Voxel> sensed) {
  ++step_;
  sensed_all_.insert(sensed.begin(), sensed.end());
  std::vector<int> edges = reprice_edges(graph_, changed, pricer_);
  const GraphGrowth growth =
      prm_on_the_go(graph_, sensed, config_.k_new, config_, pricer_,
                    derive_seed(seed_, static_cast<std::uint64_t>(step_)));
  edges.insert(edges.end(), growth.edges.begin(), growth.edges.end());
  dstar_->update(current, edges);
  return dstar_->path(current);
}

EdgeCaseOutcome Planner::edge_case(int current) {
  EdgeCaseOutcome out;
  if (config_.edge_case == EdgeCasePolicy::Complete) {
    const std::vector<Voxel> pool(sensed_all_.begin(), sensed_all_.end());
    const GraphGrowth growth = add_all_nodes(graph_, pool, config_, pricer_);
    out.nodes_added = static_cast<int>(growth.nodes.size());
    dstar_->update(current, growth.edges);
    out.path = dstar_->path(current);
    out.path_found = !out.path.empty();
    return out;
  }
  out.return_path = free_route(graph_, current, graph_.start);
  return out;
}

double Planner::path_cost(std::span<const int> path) const {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const auto e = graph_.edge_between(path[i], path[i + 1]);
    if (!e) throw InvalidArgument("path uses a missing edge");
    total += graph_.edge(*e).cost_from(path[i]);
  }
  return total;
}

std::vector<int> free_route(const MotionGraph& g, int from, int to) {
  const std::size_t n = g.size();
  std::vector<double> dist(n, kInfinity);
  std::vector<int> parent(n, -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[static_cast<std::size_t>(from)] = 0.0;
  pq.emplace(0.0, from);
  while (!pq.empty()) {
    const auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[static_cast<std::size_t>(u)]) continue;
    if (u == to) break;
    for (const int e : g.incident(u)) {
      const GraphEdge& edge = g.edge(e);
      if (edge.cls != EdgeClass::Free) continue;
      const int v = edge.other(u);
      const double nd = d + edge.cost_from(u);
      auto& dv = dist[static_cast<std::size_t>(v)];
      if (nd < dv || (nd == dv && u < parent[static_cast<std::size_t>(v)])) {
        dv = nd;
        parent[static_cast<std::size_t>(v)] = u;
        pq.emplace(nd, v);
      }
    }
  }
  if (from != to && parent[static_cast<std::size_t>(to)] < 0) return {};
  std::vector<int> route{to};
  while (route.back() != from) route.push_back(parent[static_cast<std::size_t>(route.back())]);
  std::reverse(route.begin(), route.end());
  return route;
}

}  // namespace amphi
