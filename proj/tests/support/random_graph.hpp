#pragma once

// Random motion graphs for incremental-search checks.

#include <random>

#include "amphi/dstar.hpp"

namespace amphi::testing {

inline constexpr double kLarge = 1e4;

struct RandomGraph {
  MotionGraph graph;
  std::vector<double> base_ab, base_ba;
};

// Nodes on random voxels, edges within a radius, directional prices at least
// the Euclidean length so the distance heuristic stays consistent.
inline RandomGraph random_graph(std::mt19937_64& rng, int n_nodes) {
  const GridGeometry geom({10, 10, 10}, 1.0);
  RandomGraph rg{MotionGraph(geom), {}, {}};
  std::uniform_int_distribution<int> u(0, 9);
  while (static_cast<int>(rg.graph.size()) < n_nodes) rg.graph.add_node({u(rng), u(rng), u(rng)}, Medium::Air);
  std::uniform_real_distribution<double> factor(1.0, 3.0);
  for (int a = 0; a < n_nodes; ++a) {
    for (int b = a + 1; b < n_nodes; ++b) {
      const double d = (rg.graph.node(a).position - rg.graph.node(b).position).norm();
      if (d > 5.0) continue;
      GraphEdge e;
      e.a = a;
      e.b = b;
      e.cost_ab = e.table_ab = d * factor(rng);
      e.cost_ba = e.table_ba = d * factor(rng);
      rg.graph.add_edge(e);
      rg.base_ab.push_back(e.cost_ab);
      rg.base_ba.push_back(e.cost_ba);
    }
  }
  rg.graph.start = 0;
  rg.graph.goal = n_nodes - 1;
  return rg;
}

inline DStarLite::Heuristic distance_heuristic(const MotionGraph& g) {
  return [&g](int a, int b) { return (g.node(a).position - g.node(b).position).norm(); };
}

// Random price change on one edge: blocked, C_large-like, or restored.
inline void flip_edge(RandomGraph& rg, int id, int kind) {
  GraphEdge& e = rg.graph.edge_mut(id);
  switch (kind) {
    case 0:
      e.cost_ab = e.cost_ba = kInfinity;
      break;
    case 1:
      e.cost_ab = e.cost_ba = kLarge;
      break;
    default:
      e.cost_ab = rg.base_ab[static_cast<std::size_t>(id)];
      e.cost_ba = rg.base_ba[static_cast<std::size_t>(id)];
  }
}

}  // namespace amphi::testing
