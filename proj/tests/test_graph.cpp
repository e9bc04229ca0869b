#include <gtest/gtest.h>

#include <random>
#include <set>

#include "amphi/cave.hpp"
#include "amphi/graph.hpp"
#include "amphi/line_voxels.hpp"
#include "support/oracles.hpp"
#include "support/tables.hpp"
#include "support/worlds.hpp"

namespace amphi {
namespace {

const TableSet& tables() { return testing::default_tables(); }

struct CaveWorld {
  Environment env;
  WorldMap map;
  Voxel start, goal;
};

// A cave with free endpoints on both sides of the surface.
CaveWorld cave_world(std::uint64_t seed) {
  CaveWorld w;
  w.env = testing::small_cave(seed);
  w.map = initial_map(w.env);
  const GridGeometry& g = w.env.geometry();
  bool have_air = false, have_water = false;
  for (std::size_t i = 0; i < g.dims().volume(); ++i) {
    const Voxel v = g.voxel(i);
    if (g.is_boundary(v) || is_obstacle(w.map.state(v))) continue;
    if (!have_water && w.map.medium_of(v) == Medium::Water) {
      w.start = v;
      have_water = true;
    }
    if (w.map.medium_of(v) == Medium::Air) {
      w.goal = v;
      have_air = true;
    }
  }
  EXPECT_TRUE(have_air && have_water);
  return w;
}

TEST(ClassifyEdge, DominanceOrder) {
  const Environment env = testing::open_environment({10, 10, 10}, 5.0);
  WorldMap map = testing::belief_of(env);
  const Vec3 a(2.5, 2.5, 6.5);
  const Vec3 b(6.5, 3.5, 7.5);
  const auto voxels = line_voxels(a, b, map.geometry());
  EXPECT_EQ(classify_edge(map, voxels), EdgeClass::Free);

  map.cells.at(voxels[2]) = CellState::AssumedObstacle;
  EXPECT_EQ(classify_edge(map, voxels), EdgeClass::AssumedBlocked);
  map.cells.at(voxels[4]) = CellState::ConfirmedObstacle;
  EXPECT_EQ(classify_edge(map, voxels), EdgeClass::ConfirmedBlocked);

  WorldMap fresh = testing::belief_of(env);
  const Voxel wall{0, 3, 3};
  fresh.cells.at(wall) = CellState::AssumedFree;
  const std::vector<Voxel> through_wall{Voxel{1, 3, 3}, wall};
  EXPECT_EQ(classify_edge(fresh, through_wall), EdgeClass::ConfirmedBlocked);
}

TEST(EdgePricer, PricesByClass) {
  const Environment env = testing::open_environment({12, 12, 12}, 6.0);
  WorldMap map = testing::belief_of(env);
  const double c_large = compute_c_large(map.geometry(), tables());
  MotionGraph g(map.geometry());
  const int a = g.add_node({2, 2, 8}, Medium::Air);
  const int b = g.add_node({5, 3, 9}, Medium::Air);
  for (Pricing pricing : {Pricing::Modified, Pricing::Standard}) {
    WorldMap m = map;
    const EdgePricer pricer(m, tables(), c_large, pricing);
    GraphEdge e = pricer.make_edge(g, a, b);
    EXPECT_EQ(e.cls, EdgeClass::Free);
    EXPECT_EQ(e.cost_ab, tables().lookup(Medium::Air, {3, 1, 1}));
    EXPECT_EQ(e.cost_ba, tables().lookup(Medium::Air, {-3, -1, -1}));

    m.cells.at(e.voxels[1]) = CellState::AssumedObstacle;
    EXPECT_TRUE(pricer.reprice(e));
    EXPECT_EQ(e.cls, EdgeClass::AssumedBlocked);
    const double expected = pricing == Pricing::Modified ? c_large : kInfinity;
    EXPECT_EQ(e.cost_ab, expected);
    EXPECT_EQ(e.cost_ba, expected);
    EXPECT_EQ(e.table_ab, tables().lookup(Medium::Air, {3, 1, 1}));

    m.cells.at(e.voxels[1]) = CellState::ConfirmedObstacle;
    // Standard pricing already had +inf, so only the class moves.
    EXPECT_EQ(pricer.reprice(e), pricing == Pricing::Modified);
    EXPECT_EQ(e.cls, EdgeClass::ConfirmedBlocked);
    EXPECT_EQ(e.cost_ab, kInfinity);
    EXPECT_FALSE(pricer.reprice(e));
  }
}

TEST(CLarge, ScalesWithGridAndDominatesStraightRuns) {
  const GridGeometry small({20, 10, 10}, 1.0);
  const GridGeometry big({40, 10, 10}, 1.0);
  const double c1 = compute_c_large(small, tables());
  const double c2 = compute_c_large(big, tables());
  EXPECT_TRUE(std::isfinite(c1));
  EXPECT_NEAR(c2 / c1, 2.0, 1e-12);
  EXPECT_GT(c1, 2.0 * 20.0 * tables().max_unit_cost());
  // A straight run of unit edges across the largest dimension.
  EXPECT_GT(c1, 19.0 * tables().max_unit_cost());
}

TEST(Heuristic, MetricAndBelowEveryTableEntry) {
  const Vec3 a(1.5, 2.5, 3.5);
  EXPECT_EQ(heuristic(a, a, tables()), 0.0);
  std::mt19937_64 rng(16);
  std::uniform_real_distribution<double> u(0.0, 20.0);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 p(u(rng), u(rng), u(rng)), q(u(rng), u(rng), u(rng)), r(u(rng), u(rng), u(rng));
    EXPECT_LE(heuristic(p, r, tables()), heuristic(p, q, tables()) + heuristic(q, r, tables()) + 1e-9);
  }
  for (Medium m : {Medium::Air, Medium::Water}) {
    for (int s = 0; s < CostTable::kStored; ++s) {
      const Displacement d = CostTable::slot_displacement(s);
      if (d.is_zero()) continue;
      EXPECT_LE(heuristic(Vec3::Zero(), Vec3(d.dx, d.dy, d.dh), tables()), tables().lookup(m, d));
    }
  }
}

TEST(SamplePrm, StructuralInvariants) {
  const CaveWorld w = cave_world(31);
  const double c_large = compute_c_large(w.map.geometry(), tables());
  const EdgePricer pricer(w.map, tables(), c_large, Pricing::Modified);
  PlannerConfig cfg;
  const MotionGraph g = sample_prm(w.map, w.start, w.goal, cfg, pricer, 5);
  EXPECT_GT(g.size(), 10u);
  std::set<Voxel> seen;
  for (const GraphNode& n : g.nodes()) {
    EXPECT_TRUE(seen.insert(n.voxel).second);
    EXPECT_FALSE(is_obstacle(w.map.state(n.voxel)));
    EXPECT_EQ(n.position, w.map.geometry().center(n.voxel));
  }
  int transitions = 0;
  for (const GraphEdge& e : g.edges()) {
    const GraphNode& a = g.node(e.a);
    const GraphNode& b = g.node(e.b);
    EXPECT_LE((a.position - b.position).norm(), cfg.r_max_edge + 1e-12);
    if (a.medium != b.medium) {
      ++transitions;
      EXPECT_TRUE(e.transition);
      EXPECT_EQ(a.voxel.i, b.voxel.i);
      EXPECT_EQ(a.voxel.j, b.voxel.j);
    }
    for (double c : {e.cost_ab, e.cost_ba}) {
      const bool ok = c == e.table_ab || c == e.table_ba || c == c_large || c == kInfinity;
      EXPECT_TRUE(ok) << c;
    }
    auto sorted = e.voxels;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(sorted, testing::brute_line_voxels(a.position, b.position, w.map.geometry()));
  }
  EXPECT_GT(transitions, 0);
}

TEST(SamplePrm, SingleMediumModesExcludeOtherMedium) {
  const CaveWorld w = cave_world(32);
  const double c_large = compute_c_large(w.map.geometry(), tables());
  const EdgePricer pricer(w.map, tables(), c_large, Pricing::Modified);
  PlannerConfig cfg;
  cfg.mode = PlannerMode::WaterOnly;
  Voxel water_goal = w.start;
  for (const Voxel& v : candidate_voxels(w.map, PlannerMode::WaterOnly)) water_goal = v;
  const MotionGraph g = sample_prm(w.map, w.start, water_goal, cfg, pricer, 5);
  for (const GraphNode& n : g.nodes()) EXPECT_EQ(n.medium, Medium::Water);
  for (const GraphEdge& e : g.edges()) EXPECT_FALSE(e.transition);

  cfg.mode = PlannerMode::AirOnly;
  EXPECT_THROW(sample_prm(w.map, w.start, w.goal, cfg, pricer, 5), InvalidArgument);
}

TEST(SamplePrm, HybridGraphNestsSingleMediumGraph) {
  for (std::uint64_t seed : {33u, 34u, 35u}) {
    const CaveWorld w = cave_world(seed);
    const double c_large = compute_c_large(w.map.geometry(), tables());
    const EdgePricer pricer(w.map, tables(), c_large, Pricing::Modified);
    const auto air = candidate_voxels(w.map, PlannerMode::AirOnly);
    const Voxel s = air.front();
    const Voxel t = air.back();
    PlannerConfig cfg;
    cfg.mode = PlannerMode::AirOnly;
    const MotionGraph only = sample_prm(w.map, s, t, cfg, pricer, seed);
    cfg.mode = PlannerMode::Hybrid;
    const MotionGraph hybrid = sample_prm(w.map, s, t, cfg, pricer, seed);
    std::set<Voxel> hybrid_air;
    for (const GraphNode& n : hybrid.nodes()) {
      if (n.medium == Medium::Air) hybrid_air.insert(n.voxel);
    }
    std::set<Voxel> only_nodes;
    for (const GraphNode& n : only.nodes()) only_nodes.insert(n.voxel);
    EXPECT_EQ(hybrid_air, only_nodes);
  }
}

TEST(SamplePrm, ExplicitNodeCountAndDeterminism) {
  const CaveWorld w = cave_world(36);
  const EdgePricer pricer(w.map, tables(), compute_c_large(w.map.geometry(), tables()), Pricing::Modified);
  PlannerConfig cfg;
  cfg.n_nodes = 40;
  const MotionGraph a = sample_prm(w.map, w.start, w.goal, cfg, pricer, 9);
  const MotionGraph b = sample_prm(w.map, w.start, w.goal, cfg, pricer, 9);
  EXPECT_EQ(a.size(), 42u);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.nodes()[i].voxel, b.nodes()[i].voxel);
  EXPECT_EQ(a.edges().size(), b.edges().size());
}

TEST(Heuristic, AdmissibleAgainstDijkstra) {
  const CaveWorld w = cave_world(37);
  const EdgePricer pricer(w.map, tables(), compute_c_large(w.map.geometry(), tables()), Pricing::Modified);
  const MotionGraph g = sample_prm(w.map, w.start, w.goal, PlannerConfig{}, pricer, 3);
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> u(0, static_cast<int>(g.size()) - 1);
  int finite = 0;
  for (int i = 0; i < 100; ++i) {
    const int a = u(rng);
    const int b = u(rng);
    const double d = testing::dijkstra_to_goal(g, b)[static_cast<std::size_t>(a)];
    if (!std::isfinite(d)) continue;
    ++finite;
    EXPECT_LE(heuristic(g.node(a).position, g.node(b).position, tables()), d + 1e-9);
  }
  EXPECT_GT(finite, 50);
}

TEST(PrmOnTheGo, GrowthBounded) {
  const CaveWorld w = cave_world(38);
  const EdgePricer pricer(w.map, tables(), compute_c_large(w.map.geometry(), tables()), Pricing::Modified);
  PlannerConfig cfg;
  cfg.n_nodes = 10;
  MotionGraph g = sample_prm(w.map, w.start, w.goal, cfg, pricer, 1);
  const auto pool = candidate_voxels(w.map, PlannerMode::Hybrid);
  const std::size_t before = g.size();
  EXPECT_TRUE(prm_on_the_go(g, pool, 0, cfg, pricer, 2).nodes.empty());
  EXPECT_EQ(g.size(), before);
  for (int step = 0; step < 5; ++step) {
    const std::size_t n0 = g.size();
    const GraphGrowth grown = prm_on_the_go(g, pool, cfg.k_new, cfg, pricer, 10 + step);
    EXPECT_LE(g.size() - n0, static_cast<std::size_t>(cfg.k_new));
    EXPECT_EQ(grown.nodes.size(), g.size() - n0);
    for (int e : grown.edges) {
      const GraphEdge& edge = g.edge(e);
      EXPECT_LE((g.node(edge.a).position - g.node(edge.b).position).norm(), cfg.r_max_edge + 1e-12);
    }
  }
}

TEST(RepriceEdges, OnlyTouchedEdgesChange) {
  const CaveWorld w = cave_world(39);
  WorldMap map = w.map;
  const EdgePricer pricer(map, tables(), compute_c_large(map.geometry(), tables()), Pricing::Modified);
  MotionGraph g = sample_prm(map, w.start, w.goal, PlannerConfig{}, pricer, 4);
  const GraphEdge& target = g.edge(0);
  const Voxel v = target.voxels[target.voxels.size() / 2];
  map.cells.at(v) = CellState::ConfirmedObstacle;
  const std::vector<Voxel> changed{v};
  const auto ids = reprice_edges(g, changed, pricer);
  EXPECT_FALSE(ids.empty());
  for (int id : ids) {
    const auto& vox = g.edge(id).voxels;
    EXPECT_NE(std::find(vox.begin(), vox.end(), v), vox.end());
    EXPECT_EQ(g.edge(id).cls, EdgeClass::ConfirmedBlocked);
  }
}

}  // namespace
}  // namespace amphi
