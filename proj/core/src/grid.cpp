#include "amphi/grid.hpp"

#include <algorithm>
#include <cmath>

namespace amphi {

const char* to_string(Medium m) { return m == Medium::Air ? "air" : "water"; }

Medium medium_at(double h, const WaterSurface& water) {
  return h >= water.level ? Medium::Air : Medium::Water;
}

GridGeometry::GridGeometry(Dims dims, double resolution) : dims_(dims), resolution_(resolution) {
  if (dims.nx < 2 || dims.ny < 2 || dims.nh < 2) {
    throw InvalidArgument("grid dimensions must be at least 2 in every axis");
  }
  if (!(resolution > 0.0) || !std::isfinite(resolution)) {
    throw InvalidArgument("grid resolution must be positive");
  }
}

Vec3 GridGeometry::extent() const {
  return Vec3(dims_.nx, dims_.ny, dims_.nh) * resolution_;
}

bool GridGeometry::contains(const Vec3& p) const {
  const Vec3 e = extent();
  for (int a = 0; a < 3; ++a) {
    if (!(p[a] >= 0.0 && p[a] <= e[a])) return false;
  }
  return true;
}

Voxel GridGeometry::voxel(std::size_t index) const {
  const auto nx = static_cast<std::size_t>(dims_.nx);
  const auto ny = static_cast<std::size_t>(dims_.ny);
  return Voxel{static_cast<int>(index % nx), static_cast<int>((index / nx) % ny),
               static_cast<int>(index / (nx * ny))};
}

Voxel GridGeometry::voxel_at(const Vec3& p) const {
  if (!contains(p)) throw BoundsError("point outside grid");
  auto idx = [&](double c, int n) {
    return std::clamp(static_cast<int>(std::floor(c / resolution_)), 0, n - 1);
  };
  return Voxel{idx(p.x(), dims_.nx), idx(p.y(), dims_.ny), idx(p.z(), dims_.nh)};
}

Vec3 GridGeometry::center(const Voxel& v) const {
  return Vec3(v.i + 0.5, v.j + 0.5, v.k + 0.5) * resolution_;
}

Medium Environment::medium_of(const Voxel& v) const {
  return medium_at(geometry().center(v).z(), water);
}

Medium WorldMap::medium_of(const Voxel& v) const {
  return medium_at(geometry().center(v).z(), water);
}

std::size_t WorldMap::confirmed_count() const {
  return static_cast<std::size_t>(
      std::count_if(cells.cells().begin(), cells.cells().end(), is_confirmed));
}

}  // namespace amphi
