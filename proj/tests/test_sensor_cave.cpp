#include <gtest/gtest.h>

#include <random>
#include <set>

#include "amphi/cave.hpp"
#include "amphi/sensor.hpp"

namespace amphi {
namespace {

Environment open_box(Dims dims, double level) {
  Environment env;
  const GridGeometry g(dims, 1.0);
  env.occupancy = VoxelGrid<std::uint8_t>(g, 0);
  for (std::size_t i = 0; i < dims.volume(); ++i) {
    if (g.is_boundary(g.voxel(i))) env.occupancy[i] = 1;
  }
  env.water.level = level;
  return env;
}

// Distance from p to the nearest point of the voxel's closed cube.
double cube_distance(const GridGeometry& g, const Voxel& v, const Vec3& p) {
  const double r = g.resolution();
  const Vec3 lo(v.i * r, v.j * r, v.k * r);
  const Vec3 nearest = p.cwiseMax(lo).cwiseMin(lo + Vec3::Constant(r));
  return (nearest - p).norm();
}

TEST(SensorDirections, LatticeCountAndUnitLength) {
  const auto dirs = sensor_directions(SensorParams{45.0, 5.0});
  // Three non-polar rings of eight plus two poles.
  EXPECT_EQ(dirs.size(), 26u);
  for (const Vec3& d : dirs) EXPECT_NEAR(d.norm(), 1.0, 1e-12);
}

TEST(SensorParams, Validation) {
  EXPECT_THROW((SensorParams{0.0, 5.0}.validate()), InvalidArgument);
  EXPECT_THROW((SensorParams{91.0, 5.0}.validate()), InvalidArgument);
  EXPECT_THROW((SensorParams{45.0, 0.0}.validate()), InvalidArgument);
}

TEST(Sense, EmptyBoxSeesRayUnionThinningWithRange) {
  const Environment env = open_box({21, 21, 21}, 0.5);
  const Vec3 origin = env.geometry().center({10, 10, 10});
  const SensorReading r = sense(env, origin, SensorParams{45.0, 5.0});
  ASSERT_FALSE(r.observations.empty());
  std::array<int, 6> shell{};
  for (const auto& o : r.observations) {
    EXPECT_FALSE(o.occupied);
    const double d = (env.geometry().center(o.voxel) - origin).norm();
    shell[std::min<std::size_t>(5, static_cast<std::size_t>(d))]++;
  }
  // Ray density per unit shell volume falls off with range.
  const double near = shell[1] / (4.0 / 3.0 * (8 - 1));
  const double far = shell[4] / (4.0 / 3.0 * (125 - 64));
  EXPECT_GT(near, far);
}

TEST(Sense, ObstacleOccludesVoxelsBehindIt) {
  Environment env = open_box({15, 15, 15}, 0.5);
  env.occupancy.at({8, 7, 7}) = 1;
  const SensorReading r = sense(env, env.geometry().center({7, 7, 7}), SensorParams{45.0, 5.0});
  std::set<Voxel> seen;
  for (const auto& o : r.observations) seen.insert(o.voxel);
  ASSERT_TRUE(seen.count({8, 7, 7}));
  for (int i = 9; i <= 12; ++i) EXPECT_FALSE(seen.count({i, 7, 7})) << i;
  for (const auto& o : r.observations) {
    if (o.voxel == Voxel{8, 7, 7}) EXPECT_TRUE(o.occupied);
  }
}

TEST(Sense, AirSensorJustAboveSurfaceSeesNoWater) {
  const Environment env = open_box({15, 15, 15}, 7.0);
  const Vec3 p(7.5, 7.5, 7.0 + 1e-6);
  const SensorReading r = sense(env, p, SensorParams{15.0, 5.0});
  EXPECT_EQ(r.medium, Medium::Air);
  ASSERT_FALSE(r.observations.empty());
  for (const auto& o : r.observations) EXPECT_EQ(env.medium_of(o.voxel), Medium::Air);
}

TEST(Sense, ReadingsStayInBallAndMatchTruth) {
  const Cave cave = generate_cave(CaveParams{}, {30, 30, 16}, 1.0, 21);
  const Environment& env = cave.environment;
  const GridGeometry& g = env.geometry();
  const SensorParams sp{30.0, 5.0};
  std::mt19937_64 rng(3);
  int checked = 0;
  for (std::size_t idx = 0; idx < g.dims().volume() && checked < 40; idx += 13) {
    const Voxel v = g.voxel(idx);
    if (env.occupied(v)) continue;
    ++checked;
    const Vec3 p = g.center(v);
    for (const auto& o : sense(env, p, sp).observations) {
      EXPECT_LE(cube_distance(g, o.voxel, p), sp.radius + 1e-9);
      EXPECT_EQ(o.occupied, env.occupied(o.voxel));
    }
  }
  EXPECT_GT(checked, 10);
}

TEST(ApplyReading, PromotesAndIsIdempotent) {
  Environment env = open_box({15, 15, 15}, 0.5);
  env.occupancy.at({9, 7, 7}) = 1;
  WorldMap map;
  map.cells = VoxelGrid<CellState>(env.geometry(), CellState::AssumedFree);
  map.water = env.water;
  const SensorReading r = sense(env, env.geometry().center({7, 7, 7}), SensorParams{45.0, 5.0});
  const auto changed = apply_reading(map, r);
  EXPECT_EQ(changed.size(), r.observations.size());
  EXPECT_TRUE(std::find(changed.begin(), changed.end(), Voxel{9, 7, 7}) != changed.end());
  EXPECT_EQ(map.state({9, 7, 7}), CellState::ConfirmedObstacle);
  EXPECT_TRUE(apply_reading(map, r).empty());
}

TEST(ApplyReading, NeverDemotesConfirmedCells) {
  const Environment env = open_box({15, 15, 15}, 0.5);
  WorldMap map;
  map.cells = VoxelGrid<CellState>(env.geometry(), CellState::AssumedObstacle);
  map.cells.at({8, 7, 7}) = CellState::ConfirmedObstacle;
  const SensorReading r = sense(env, env.geometry().center({7, 7, 7}), SensorParams{45.0, 5.0});
  apply_reading(map, r);
  EXPECT_EQ(map.state({8, 7, 7}), CellState::ConfirmedObstacle);
}

TEST(Perlin, ZeroAtLatticePointsAndBounded) {
  const PerlinNoise n(77);
  for (int x = -3; x < 4; ++x) {
    for (int y = 0; y < 5; ++y) EXPECT_EQ(n(Vec3(x, y, 2 * x + y)), 0.0);
  }
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  double spread = 0.0;
  for (int i = 0; i < 20000; ++i) {
    const double v = n(Vec3(u(rng), u(rng), u(rng)));
    ASSERT_GE(v, -1.0);
    ASSERT_LE(v, 1.0);
    spread = std::max(spread, std::abs(v));
  }
  EXPECT_GT(spread, 0.3);
}

TEST(Perlin, Deterministic) {
  const Vec3 p(1.234, -5.6, 7.89);
  EXPECT_EQ(perlin3(p, 5), perlin3(p, 5));
  EXPECT_NE(perlin3(p, 5), perlin3(p, 6));
}

TEST(Cave, WaterLevelIsHalfHeight) {
  const Cave cave = generate_cave(CaveParams{}, {40, 40, 20}, 1.0, 1);
  EXPECT_EQ(cave.environment.water.level, 10.0);
  CaveParams short_bores;
  short_bores.l_bore = 1.0;
  short_bores.n_min = 3;
  const Cave odd = generate_cave(short_bores, {30, 30, 15}, 0.5, 2);
  EXPECT_EQ(odd.environment.water.level, 3.75);
}

TEST(Cave, SameSeedIsBitwiseIdentical) {
  const Cave a = generate_cave(CaveParams{}, {40, 40, 20}, 1.0, 9);
  const Cave b = generate_cave(CaveParams{}, {40, 40, 20}, 1.0, 9);
  const Cave c = generate_cave(CaveParams{}, {40, 40, 20}, 1.0, 10);
  EXPECT_EQ(a.environment.occupancy, b.environment.occupancy);
  EXPECT_EQ(a.environment.planes.yz_index, b.environment.planes.yz_index);
  EXPECT_NE(a.environment.occupancy, c.environment.occupancy);
}

TEST(Cave, FreeVoxelsLieNearBoresAndWallsAreRock) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const CaveParams params;
    const Cave cave = generate_cave(params, {40, 40, 20}, 1.0, seed);
    const Environment& env = cave.environment;
    const GridGeometry& g = env.geometry();
    ASSERT_EQ(static_cast<int>(cave.bores.size()), params.n_bores);
    for (const auto& bore : cave.bores) EXPECT_GT(static_cast<int>(bore.size()) - 1, params.n_min);
    for (std::size_t idx = 0; idx < g.dims().volume(); ++idx) {
      const Voxel v = g.voxel(idx);
      if (g.is_boundary(v)) {
        ASSERT_TRUE(env.occupied(v));
        continue;
      }
      if (env.occupied(v)) continue;
      double best = 1e300;
      for (const auto& bore : cave.bores) {
        for (const Vec3& p : bore) best = std::min(best, (g.center(v) - p).norm());
      }
      ASSERT_LE(best, params.r_bore + 1e-12);
    }
  }
}

TEST(Cave, EachBoreCarvesAConnectedRegion) {
  const CaveParams params;
  const Cave cave = generate_cave(params, {40, 40, 20}, 1.0, 4);
  const GridGeometry& g = cave.environment.geometry();
  for (const auto& bore : cave.bores) {
    std::set<Voxel> region;
    for (const Vec3& p : bore) {
      for (std::size_t idx = 0; idx < g.dims().volume(); ++idx) {
        const Voxel v = g.voxel(idx);
        if (!g.is_boundary(v) && (g.center(v) - p).norm() <= params.r_bore) region.insert(v);
      }
    }
    std::set<Voxel> seen{*region.begin()};
    std::vector<Voxel> stack{*region.begin()};
    while (!stack.empty()) {
      const Voxel v = stack.back();
      stack.pop_back();
      for (int dk = -1; dk <= 1; ++dk) {
        for (int dj = -1; dj <= 1; ++dj) {
          for (int di = -1; di <= 1; ++di) {
            const Voxel n{v.i + di, v.j + dj, v.k + dk};
            if (region.count(n) && seen.insert(n).second) stack.push_back(n);
          }
        }
      }
    }
    EXPECT_EQ(seen.size(), region.size());
  }
}

TEST(Cave, PathologicalParamsExhaustBudget) {
  CaveParams params;
  params.n_min = 30;
  params.n_max = 40;
  params.attempts_per_bore = 5;
  EXPECT_THROW(generate_cave(params, {6, 6, 6}, 1.0, 1), GenerationFailed);
}

TEST(Cave, InvalidParamsRejected) {
  CaveParams params;
  params.n_min = 50;
  EXPECT_THROW(params.validate(), InvalidArgument);
  params = CaveParams{};
  params.r_bore = 0.5;
  EXPECT_THROW(params.validate(), InvalidArgument);
}

TEST(InitialMap, AssumedEverywhereAndPlanesFree) {
  const Cave cave = generate_cave(CaveParams{}, {40, 40, 20}, 1.0, 3);
  const Environment& env = cave.environment;
  const WorldMap map = initial_map(env);
  const GridGeometry& g = env.geometry();
  EXPECT_EQ(map.confirmed_count(), 0u);
  int discrepancies = 0;
  for (std::size_t idx = 0; idx < g.dims().volume(); ++idx) {
    const Voxel v = g.voxel(idx);
    const CellState s = map.cells[idx];
    ASSERT_FALSE(is_confirmed(s));
    const bool plane = !g.is_boundary(v) && (v.i == env.planes.yz_index || v.k == env.planes.xy_index);
    if (plane) {
      EXPECT_EQ(s, CellState::AssumedFree);
      discrepancies += env.occupied(v) ? 1 : 0;
    } else {
      EXPECT_EQ(is_obstacle(s), env.occupied(v));
    }
  }
  EXPECT_GE(discrepancies, 1);
}

}  // namespace
}  // namespace amphi
