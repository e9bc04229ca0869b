#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "amphi/errors.hpp"

namespace amphi {

using Vec3 = Eigen::Vector3d;

/// Integer voxel coordinate (i along x, j along y, k along height).
struct Voxel {
  int i = 0;
  int j = 0;
  int k = 0;

  friend bool operator==(const Voxel&, const Voxel&) = default;
  friend auto operator<=>(const Voxel&, const Voxel&) = default;
};

struct VoxelHash {
  std::size_t operator()(const Voxel& v) const noexcept {
    std::uint64_t h = static_cast<std::uint32_t>(v.i);
    h = h * 0x9E3779B97F4A7C15ull ^ static_cast<std::uint32_t>(v.j);
    h = h * 0x9E3779B97F4A7C15ull ^ static_cast<std::uint32_t>(v.k);
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

struct Dims {
  int nx = 0;
  int ny = 0;
  int nh = 0;

  friend bool operator==(const Dims&, const Dims&) = default;
  [[nodiscard]] std::size_t volume() const {
    return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) * static_cast<std::size_t>(nh);
  }
  [[nodiscard]] int largest() const { return std::max({nx, ny, nh}); }
};

enum class Medium : std::uint8_t { Air, Water };

const char* to_string(Medium m);

/// Horizontal water surface at height `level` (meters). Water lies strictly below.
struct WaterSurface {
  double level = 0.0;
};

/// Air iff h >= level; the surface itself belongs to air.
Medium medium_at(double h, const WaterSurface& water);

/// Geometry of a regular voxel lattice. Voxel (i,j,k) occupies
/// [i*r, (i+1)*r) x [j*r, (j+1)*r) x [k*r, (k+1)*r) in world coordinates
/// (x, y, h) with h pointing up; its center is ((i+0.5) r, (j+0.5) r, (k+0.5) r).
class GridGeometry {
 public:
  GridGeometry() = default;
  GridGeometry(Dims dims, double resolution);

  [[nodiscard]] const Dims& dims() const { return dims_; }
  [[nodiscard]] double resolution() const { return resolution_; }
  [[nodiscard]] Vec3 extent() const;

  [[nodiscard]] bool in_bounds(const Voxel& v) const {
    return v.i >= 0 && v.j >= 0 && v.k >= 0 && v.i < dims_.nx && v.j < dims_.ny && v.k < dims_.nh;
  }
  /// Closed box test: the outer faces count as inside.
  [[nodiscard]] bool contains(const Vec3& p) const;
  [[nodiscard]] bool is_boundary(const Voxel& v) const {
    return v.i == 0 || v.j == 0 || v.k == 0 || v.i == dims_.nx - 1 || v.j == dims_.ny - 1 ||
           v.k == dims_.nh - 1;
  }

  [[nodiscard]] std::size_t index(const Voxel& v) const {
    return (static_cast<std::size_t>(v.k) * dims_.ny + v.j) * dims_.nx + v.i;
  }
  [[nodiscard]] Voxel voxel(std::size_t index) const;
  /// Voxel containing p (half-open), clamped onto the grid for points on the upper faces.
  [[nodiscard]] Voxel voxel_at(const Vec3& p) const;
  [[nodiscard]] Vec3 center(const Voxel& v) const;

 private:
  Dims dims_{};
  double resolution_ = 1.0;
};

/// Dense 3-D array of cells over a GridGeometry.
template <typename Cell>
class VoxelGrid {
 public:
  VoxelGrid() = default;
  VoxelGrid(GridGeometry geometry, Cell fill)
      : geometry_(geometry), cells_(geometry.dims().volume(), fill) {}

  [[nodiscard]] const GridGeometry& geometry() const { return geometry_; }
  [[nodiscard]] const Dims& dims() const { return geometry_.dims(); }

  [[nodiscard]] const Cell& at(const Voxel& v) const { return cells_[checked(v)]; }
  Cell& at(const Voxel& v) { return cells_[checked(v)]; }
  [[nodiscard]] const Cell& operator[](std::size_t idx) const { return cells_[idx]; }
  Cell& operator[](std::size_t idx) { return cells_[idx]; }

  [[nodiscard]] const std::vector<Cell>& cells() const { return cells_; }
  std::vector<Cell>& cells() { return cells_; }

  friend bool operator==(const VoxelGrid&, const VoxelGrid&) = default;

 private:
  std::size_t checked(const Voxel& v) const {
    if (!geometry_.in_bounds(v)) throw BoundsError("voxel index outside grid");
    return geometry_.index(v);
  }

  GridGeometry geometry_{};
  std::vector<Cell> cells_;
};

inline bool operator==(const GridGeometry& a, const GridGeometry& b) {
  return a.dims() == b.dims() && a.resolution() == b.resolution();
}

/// The two planes an environment marks as free in the initial belief map.
struct FreePlanes {
  int yz_index = -1;  ///< x index of the y-z plane
  int xy_index = -1;  ///< height index of the x-y plane
};

/// Ground truth. Cells are binary: 1 = occupied, 0 = free.
struct Environment {
  VoxelGrid<std::uint8_t> occupancy;
  WaterSurface water;
  FreePlanes planes;
  std::uint64_t seed = 0;

  [[nodiscard]] const GridGeometry& geometry() const { return occupancy.geometry(); }
  [[nodiscard]] bool occupied(const Voxel& v) const { return occupancy.at(v) != 0; }
  [[nodiscard]] Medium medium_of(const Voxel& v) const;
};

enum class CellState : std::uint8_t {
  AssumedFree = 0,
  AssumedObstacle = 1,
  ConfirmedFree = 2,
  ConfirmedObstacle = 3,
};

[[nodiscard]] inline bool is_confirmed(CellState s) {
  return s == CellState::ConfirmedFree || s == CellState::ConfirmedObstacle;
}
[[nodiscard]] inline bool is_obstacle(CellState s) {
  return s == CellState::AssumedObstacle || s == CellState::ConfirmedObstacle;
}

/// The vehicle's belief about the workspace. Boundary voxels are walls: whatever
/// their recorded state, they count as confirmed obstacles for planning.
struct WorldMap {
  VoxelGrid<CellState> cells;
  WaterSurface water;
  std::uint64_t seed = 0;

  [[nodiscard]] const GridGeometry& geometry() const { return cells.geometry(); }
  [[nodiscard]] CellState state(const Voxel& v) const { return cells.at(v); }
  [[nodiscard]] bool is_wall(const Voxel& v) const { return geometry().is_boundary(v); }
  [[nodiscard]] Medium medium_of(const Voxel& v) const;
  [[nodiscard]] std::size_t confirmed_count() const;
};

}  // namespace amphi
