#pragma once

#include <vector>

#include "amphi/grid.hpp"

namespace amphi {

struct SensorParams {
  double angular_resolution_deg = 45.0;
  double radius = 5.0;

  void validate() const;
};

struct Observation {
  Voxel voxel;
  bool occupied = false;

  friend bool operator==(const Observation&, const Observation&) = default;
};

/// What one sensor sweep saw. `observations` is sorted by voxel and unique;
/// `sensed()` is the voxel set S_i.
struct SensorReading {
  Vec3 origin = Vec3::Zero();
  Medium medium = Medium::Air;
  std::vector<Observation> observations;

  [[nodiscard]] std::vector<Voxel> sensed() const;
};

/// Unit ray directions on the azimuth x elevation lattice, poles emitted once.
std::vector<Vec3> sensor_directions(const SensorParams& params);

/// Casts the ray lattice from `position` through the ground truth. Each ray
/// reports free voxels up to and including the first occupied one, and stops
/// without reporting once it would enter the other medium.
SensorReading sense(const Environment& env, const Vec3& position, const SensorParams& params);

/// A single ray from `from` toward `to` (truncated at `max_range`), with the
/// same stopping rules as `sense`. Used to look along the next planned edge.
SensorReading sense_segment(const Environment& env, const Vec3& from, const Vec3& to,
                            double max_range);

/// Moves observed cells to confirmed states. Returns the voxels whose belief
/// changed, sorted. Confirmed cells are never demoted.
std::vector<Voxel> apply_reading(WorldMap& map, const SensorReading& reading);

}  // namespace amphi
