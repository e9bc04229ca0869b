#pragma once

#include <cstdint>

#include "amphi/cave.hpp"
#include "amphi/grid.hpp"

namespace amphi::testing {

// Ground truth with rock only on the boundary layer.
inline Environment open_environment(Dims dims, double level) {
  Environment env;
  const GridGeometry g(dims, 1.0);
  env.occupancy = VoxelGrid<std::uint8_t>(g, 0);
  for (std::size_t i = 0; i < dims.volume(); ++i) {
    if (g.is_boundary(g.voxel(i))) env.occupancy[i] = 1;
  }
  env.water.level = level;
  return env;
}

// Belief that matches the truth exactly, all cells still assumed.
inline WorldMap belief_of(const Environment& env) {
  WorldMap map;
  map.cells = VoxelGrid<CellState>(env.geometry(), CellState::AssumedFree);
  for (std::size_t i = 0; i < env.geometry().dims().volume(); ++i) {
    map.cells[i] = env.occupancy[i] ? CellState::AssumedObstacle : CellState::AssumedFree;
  }
  map.water = env.water;
  map.seed = env.seed;
  return map;
}

// Small grids occasionally exhaust the bore budget; step to the next seed.
inline Environment small_cave(std::uint64_t seed, Dims dims = {30, 30, 16}) {
  for (std::uint64_t s = seed;; s += 1000) {
    try {
      return generate_cave(CaveParams{}, dims, 1.0, s).environment;
    } catch (const GenerationFailed&) {
    }
  }
}

}  // namespace amphi::testing
