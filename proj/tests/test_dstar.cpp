#include <gtest/gtest.h>

#include <random>

#include "amphi/dstar.hpp"
#include "support/oracles.hpp"
#include "support/random_graph.hpp"

namespace amphi {
namespace {

using testing::RandomGraph;
using testing::distance_heuristic;
using testing::random_graph;

double path_cost(const MotionGraph& g, const std::vector<int>& path) {
  double c = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    c += g.edge(*g.edge_between(path[i], path[i + 1])).cost_from(path[i]);
  }
  return c;
}

TEST(DStarLite, InitialSearchMatchesDijkstra) {
  std::mt19937_64 rng(18);
  for (int trial = 0; trial < 20; ++trial) {
    RandomGraph rg = random_graph(rng, 30);
    DStarLite ds(rg.graph, distance_heuristic(rg.graph));
    ds.plan(rg.graph.start);
    const auto dist = testing::dijkstra_to_goal(rg.graph, rg.graph.goal);
    const double want = dist[static_cast<std::size_t>(rg.graph.start)];
    if (std::isinf(want)) {
      EXPECT_FALSE(ds.has_path(rg.graph.start));
      EXPECT_TRUE(ds.path(rg.graph.start).empty());
      continue;
    }
    EXPECT_NEAR(ds.g(rg.graph.start), want, 1e-9);
    const auto path = ds.path(rg.graph.start);
    ASSERT_GE(path.size(), 2u);
    EXPECT_EQ(path.front(), rg.graph.start);
    EXPECT_EQ(path.back(), rg.graph.goal);
    EXPECT_NEAR(path_cost(rg.graph, path), want, 1e-9);
    EXPECT_TRUE(ds.locally_consistent());
  }
}

TEST(DStarLite, IncrementalRepairMatchesDijkstraUnderRandomFlips) {
  std::mt19937_64 rng(19);
  int compared = 0;
  for (int trial = 0; trial < 50; ++trial) {
    RandomGraph rg = random_graph(rng, 30);
    MotionGraph& g = rg.graph;
    if (g.edges().empty()) continue;
    DStarLite ds(g, distance_heuristic(g));
    int current = g.start;
    ds.plan(current);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(g.edges().size()) - 1);
    std::uniform_int_distribution<int> kind(0, 2);
    for (int round = 0; round < 20; ++round) {
      std::vector<int> changed;
      const int flips = 1 + round % 4;
      for (int f = 0; f < flips; ++f) {
        const int id = pick(rng);
        testing::flip_edge(rg, id, kind(rng));
        changed.push_back(id);
      }
      std::sort(changed.begin(), changed.end());
      changed.erase(std::unique(changed.begin(), changed.end()), changed.end());
      // Sometimes advance one step along the current path first.
      const auto path = ds.path(current);
      if (path.size() > 2 && round % 3 == 0) current = path[1];
      ds.update(current, changed);
      const auto dist = testing::dijkstra_to_goal(g, g.goal);
      const double want = dist[static_cast<std::size_t>(current)];
      if (std::isinf(want)) {
        EXPECT_TRUE(std::isinf(ds.g(current)));
      } else {
        ASSERT_NEAR(ds.g(current), want, 1e-9) << "trial " << trial << " round " << round;
        EXPECT_NEAR(path_cost(g, ds.path(current)), want, 1e-9);
      }
      EXPECT_TRUE(ds.locally_consistent());
      ++compared;
    }
  }
  EXPECT_GT(compared, 500);
}

TEST(DStarLite, NewNodesAndEdgesAreRepaired) {
  std::mt19937_64 rng(20);
  RandomGraph rg = random_graph(rng, 20);
  MotionGraph& g = rg.graph;
  DStarLite ds(g, distance_heuristic(g));
  ds.plan(g.start);
  // A fresh node wired to start and goal by cheap edges.
  int fresh = -1;
  for (int i = 0; i < 10 && fresh < 0; ++i) {
    const Voxel v{i, 9 - i, 5};
    if (!g.find_node(v)) fresh = g.add_node(v, Medium::Air);
  }
  ASSERT_GE(fresh, 0);
  std::vector<int> changed;
  for (int other : {g.start, g.goal}) {
    GraphEdge e;
    e.a = fresh;
    e.b = other;
    e.cost_ab = e.cost_ba = (g.node(fresh).position - g.node(other).position).norm();
    changed.push_back(g.add_edge(e));
  }
  ds.update(g.start, changed);
  const auto dist = testing::dijkstra_to_goal(g, g.goal);
  EXPECT_NEAR(ds.g(g.start), dist[static_cast<std::size_t>(g.start)], 1e-9);
  EXPECT_TRUE(ds.locally_consistent());
}

TEST(DStarLite, NoChangeKeepsPathIdentical) {
  std::mt19937_64 rng(21);
  RandomGraph rg = random_graph(rng, 30);
  DStarLite ds(rg.graph, distance_heuristic(rg.graph));
  ds.plan(rg.graph.start);
  const auto before = ds.path(rg.graph.start);
  ds.update(rg.graph.start, {});
  EXPECT_EQ(ds.path(rg.graph.start), before);
}

}  // namespace
}  // namespace amphi
