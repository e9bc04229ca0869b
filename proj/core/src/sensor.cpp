#include "amphi/sensor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "amphi/line_voxels.hpp"

namespace amphi {

void SensorParams::validate() const {
  if (!(angular_resolution_deg > 0.0 && angular_resolution_deg <= 90.0)) {
    throw InvalidArgument("sensor angular resolution must be in (0, 90] degrees");
  }
  if (!(radius > 0.0)) throw InvalidArgument("sensor radius must be positive");
}

std::vector<Voxel> SensorReading::sensed() const {
  std::vector<Voxel> out;
  out.reserve(observations.size());
  for (const auto& o : observations) out.push_back(o.voxel);
  return out;
}

std::vector<Vec3> sensor_directions(const SensorParams& params) {
  params.validate();
  constexpr double kDeg = std::numbers::pi / 180.0;
  const double step = params.angular_resolution_deg;
  std::vector<Vec3> dirs;
  for (int e = 0;; ++e) {
    const double elev = -90.0 + e * step;
    if (elev > 90.0 + 1e-9) break;
    const double ce = std::cos(elev * kDeg);
    const double se = std::sin(elev * kDeg);
    if (std::abs(std::abs(elev) - 90.0) < 1e-9) {
      dirs.emplace_back(0.0, 0.0, elev > 0 ? 1.0 : -1.0);
      continue;
    }
    for (int a = 0;; ++a) {
      const double az = a * step;
      if (az >= 360.0 - 1e-9) break;
      dirs.emplace_back(ce * std::cos(az * kDeg), ce * std::sin(az * kDeg), se);
    }
  }
  return dirs;
}

namespace {

// Largest t in [0, len] keeping origin + t*dir inside the closed grid box.
double clip_length(const GridGeometry& grid, const Vec3& origin, const Vec3& dir, double len) {
  const Vec3 ext = grid.extent();
  double t = len;
  for (int a = 0; a < 3; ++a) {
    if (dir[a] > 0.0) t = std::min(t, (ext[a] - origin[a]) / dir[a]);
    if (dir[a] < 0.0) t = std::min(t, -origin[a] / dir[a]);
  }
  return std::max(t, 0.0);
}

void walk_ray(const Environment& env, Medium medium, const Vec3& from, const Vec3& to,
              std::vector<Observation>& out) {
  for (const Voxel& v : line_voxels(from, to, env.geometry())) {
    if (env.medium_of(v) != medium) break;
    const bool occupied = env.occupied(v);
    out.push_back({v, occupied});
    if (occupied) break;
  }
}

void sort_unique(std::vector<Observation>& obs) {
  std::sort(obs.begin(), obs.end(),
            [](const Observation& a, const Observation& b) { return a.voxel < b.voxel; });
  obs.erase(std::unique(obs.begin(), obs.end(),
                        [](const Observation& a, const Observation& b) { return a.voxel == b.voxel; }),
            obs.end());
}

}  // namespace

SensorReading sense(const Environment& env, const Vec3& position, const SensorParams& params) {
  const GridGeometry& grid = env.geometry();
  if (!grid.contains(position)) throw BoundsError("sensor position outside grid");

  SensorReading reading;
  reading.origin = position;
  reading.medium = medium_at(position.z(), env.water);

  for (const Vec3& dir : sensor_directions(params)) {
    const double len = clip_length(grid, position, dir, params.radius);
    // Rounding can leave the clipped end a hair outside the box.
    const Vec3 end = (position + len * dir).cwiseMax(Vec3::Zero()).cwiseMin(grid.extent());
    walk_ray(env, reading.medium, position, end, reading.observations);
  }
  sort_unique(reading.observations);
  return reading;
}

SensorReading sense_segment(const Environment& env, const Vec3& from, const Vec3& to,
                            double max_range) {
  const GridGeometry& grid = env.geometry();
  if (!grid.contains(from) || !grid.contains(to)) throw BoundsError("sensor segment outside grid");
  SensorReading reading;
  reading.origin = from;
  reading.medium = medium_at(from.z(), env.water);
  Vec3 end = to;
  const double len = (to - from).norm();
  if (len > max_range) end = from + (to - from) * (max_range / len);
  walk_ray(env, reading.medium, from, end, reading.observations);
  sort_unique(reading.observations);
  return reading;
}

std::vector<Voxel> apply_reading(WorldMap& map, const SensorReading& reading) {
  std::vector<Voxel> changed;
  for (const Observation& o : reading.observations) {
    CellState& cell = map.cells.at(o.voxel);
    if (is_confirmed(cell)) continue;
    cell = o.occupied ? CellState::ConfirmedObstacle : CellState::ConfirmedFree;
    changed.push_back(o.voxel);
  }
  return changed;
}

}  // namespace amphi
