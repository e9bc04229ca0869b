#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "amphi/grid.hpp"

namespace amphi {

/// Improved gradient noise on a seeded permutation lattice.
class PerlinNoise {
 public:
  explicit PerlinNoise(std::uint64_t seed);

  /// Value in [-1, 1]; exactly 0 at integer lattice points.
  [[nodiscard]] double operator()(const Vec3& p) const;

 private:
  std::array<std::uint8_t, 512> perm_{};
};

/// One-shot convenience wrapper; builds the permutation on every call.
double perlin3(const Vec3& p, std::uint64_t seed);

struct CaveParams {
  int n_bores = 6;
  int n_min = 10;         ///< a bore must have more than this many segments
  int n_max = 40;
  double l_bore = 3.0;    ///< segment length, m
  double r_bore = 2.0;    ///< carve radius, m
  double noise_scale = 0.08;  ///< lattice cells per meter
  int attempts_per_bore = 2000;

  void validate() const;
};

struct Cave {
  Environment environment;
  std::vector<std::vector<Vec3>> bores;  ///< accepted bore polylines (world m)
};

/// Bore-walk cave generator. Each bore starts at a uniform random interior point
/// and steps by (l_bore, theta, phi) in spherical coordinates, where theta (polar
/// angle from +h) spans pi and phi (azimuth about +x) spans 1.1 pi, both read
/// from two independent noise fields at the current point. A bore stops at n_max
/// segments or when the next point would leave the interior box. Bores with
/// more than n_min segments are kept until n_bores are found. Voxel centers
/// within r_bore of a bore point are free, everything else (and the whole
/// boundary layer) is rock. The water level sits at exactly half the height.
///
/// Throws GenerationFailed if the attempt budget runs out.
Cave generate_cave(const CaveParams& params, Dims dims, double resolution, std::uint64_t seed);

/// Belief map for a generated environment: every obstacle assumed-obstacle,
/// every free voxel assumed-free, and the environment's two random planes
/// (interior part) assumed-free regardless of what is really there.
WorldMap initial_map(const Environment& env);

}  // namespace amphi
