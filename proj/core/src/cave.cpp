#include "amphi/cave.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "amphi/random.hpp"

namespace amphi {
namespace {

double fade(double t) { return t * t * t * (t * (t * 6.0 - 15.0) + 10.0); }
double lerp(double t, double a, double b) { return a + t * (b - a); }

double grad(int hash, double x, double y, double z) {
  const int h = hash & 15;
  const double u = h < 8 ? x : y;
  const double v = h < 4 ? y : (h == 12 || h == 14 ? x : z);
  return ((h & 1) == 0 ? u : -u) + ((h & 2) == 0 ? v : -v);
}

}  // namespace

PerlinNoise::PerlinNoise(std::uint64_t seed) {
  std::array<std::uint8_t, 256> p{};
  std::iota(p.begin(), p.end(), std::uint8_t{0});
  std::uint64_t s = seed;
  for (int i = 255; i > 0; --i) {
    s = splitmix64(s);
    const auto j = static_cast<int>(s % static_cast<std::uint64_t>(i + 1));
    std::swap(p[i], p[j]);
  }
  for (int i = 0; i < 512; ++i) perm_[i] = p[i & 255];
}

double PerlinNoise::operator()(const Vec3& pt) const {
  const double fx = std::floor(pt.x());
  const double fy = std::floor(pt.y());
  const double fz = std::floor(pt.z());
  const int X = static_cast<int>(static_cast<long long>(fx) & 255);
  const int Y = static_cast<int>(static_cast<long long>(fy) & 255);
  const int Z = static_cast<int>(static_cast<long long>(fz) & 255);
  const double x = pt.x() - fx;
  const double y = pt.y() - fy;
  const double z = pt.z() - fz;
  const double u = fade(x);
  const double v = fade(y);
  const double w = fade(z);

  const int A = perm_[X] + Y;
  const int AA = perm_[A] + Z;
  const int AB = perm_[A + 1] + Z;
  const int B = perm_[X + 1] + Y;
  const int BA = perm_[B] + Z;
  const int BB = perm_[B + 1] + Z;

  const double value =
      lerp(w,
           lerp(v, lerp(u, grad(perm_[AA], x, y, z), grad(perm_[BA], x - 1, y, z)),
                lerp(u, grad(perm_[AB], x, y - 1, z), grad(perm_[BB], x - 1, y - 1, z))),
           lerp(v, lerp(u, grad(perm_[AA + 1], x, y, z - 1), grad(perm_[BA + 1], x - 1, y, z - 1)),
                lerp(u, grad(perm_[AB + 1], x, y - 1, z - 1),
                     grad(perm_[BB + 1], x - 1, y - 1, z - 1))));
  // The 12-gradient lattice can exceed unit magnitude by a few percent.
  return std::clamp(value, -1.0, 1.0);
}

double perlin3(const Vec3& p, std::uint64_t seed) { return PerlinNoise(seed)(p); }

void CaveParams::validate() const {
  if (n_bores < 1) throw InvalidArgument("cave: n_bores must be >= 1");
  if (n_min < 0 || n_min > n_max) throw InvalidArgument("cave: need 0 <= n_min <= n_max");
  if (!(l_bore > 0.0)) throw InvalidArgument("cave: l_bore must be positive");
  if (!(r_bore >= 1.0)) throw InvalidArgument("cave: r_bore must be >= 1");
  if (!(noise_scale > 0.0)) throw InvalidArgument("cave: noise_scale must be positive");
  if (attempts_per_bore < 1) throw InvalidArgument("cave: attempts_per_bore must be >= 1");
}

Cave generate_cave(const CaveParams& params, Dims dims, double resolution, std::uint64_t seed) {
  params.validate();
  const GridGeometry geom(dims, resolution);
  if (dims.nx < 3 || dims.ny < 3 || dims.nh < 3) {
    throw InvalidArgument("cave: grid needs an interior (dims >= 3)");
  }

  std::mt19937_64 rng(seed);
  const PerlinNoise theta_field(splitmix64(seed ^ 0x7468657461ull));
  const PerlinNoise phi_field(splitmix64(seed ^ 0x706869ull));

  // Bores live in the interior box so every bore point is off the wall layer.
  const Vec3 lo = Vec3::Constant(resolution);
  const Vec3 hi = geom.extent() - Vec3::Constant(resolution);
  auto inside = [&](const Vec3& p) {
    return (p.array() >= lo.array()).all() && (p.array() <= hi.array()).all();
  };
  std::uniform_real_distribution<double> ux(lo.x(), hi.x());
  std::uniform_real_distribution<double> uy(lo.y(), hi.y());
  std::uniform_real_distribution<double> uh(lo.z(), hi.z());

  Cave cave;
  const long budget = static_cast<long>(params.attempts_per_bore) * params.n_bores;
  long attempts = 0;
  while (static_cast<int>(cave.bores.size()) < params.n_bores) {
    if (attempts++ >= budget) {
      throw GenerationFailed("cave: retry budget exhausted before finding enough bores");
    }
    std::vector<Vec3> pts{Vec3(ux(rng), uy(rng), uh(rng))};
    int segments = 0;
    while (segments < params.n_max) {
      const Vec3& p = pts.back();
      const Vec3 q = p * params.noise_scale;
      const double theta = 0.5 * std::numbers::pi * (1.0 + theta_field(q));
      const double phi = 0.55 * std::numbers::pi * phi_field(q);
      const Vec3 next = p + params.l_bore * Vec3(std::sin(theta) * std::cos(phi),
                                                 std::sin(theta) * std::sin(phi),
                                                 std::cos(theta));
      if (!inside(next)) break;
      pts.push_back(next);
      ++segments;
    }
    if (segments > params.n_min) cave.bores.push_back(std::move(pts));
  }

  Environment& env = cave.environment;
  env.occupancy = VoxelGrid<std::uint8_t>(geom, 1);
  env.water.level = 0.5 * dims.nh * resolution;
  env.seed = seed;

  const int reach = static_cast<int>(std::ceil(params.r_bore / resolution)) + 1;
  const double r2 = params.r_bore * params.r_bore;
  for (const auto& bore : cave.bores) {
    for (const Vec3& p : bore) {
      const Voxel c = geom.voxel_at(p);
      for (int k = c.k - reach; k <= c.k + reach; ++k) {
        for (int j = c.j - reach; j <= c.j + reach; ++j) {
          for (int i = c.i - reach; i <= c.i + reach; ++i) {
            const Voxel v{i, j, k};
            if (!geom.in_bounds(v) || geom.is_boundary(v)) continue;
            if ((geom.center(v) - p).squaredNorm() <= r2) env.occupancy.at(v) = 0;
          }
        }
      }
    }
  }

  std::uniform_int_distribution<int> yz(1, dims.nx - 2);
  std::uniform_int_distribution<int> xy(1, dims.nh - 2);
  env.planes.yz_index = yz(rng);
  env.planes.xy_index = xy(rng);
  return cave;
}

WorldMap initial_map(const Environment& env) {
  const GridGeometry& geom = env.geometry();
  WorldMap map;
  map.cells = VoxelGrid<CellState>(geom, CellState::AssumedObstacle);
  map.water = env.water;
  map.seed = env.seed;
  for (std::size_t idx = 0; idx < geom.dims().volume(); ++idx) {
    const Voxel v = geom.voxel(idx);
    const bool on_plane = !geom.is_boundary(v) &&
                          (v.i == env.planes.yz_index || v.k == env.planes.xy_index);
    map.cells[idx] =
        (env.occupancy[idx] == 0 || on_plane) ? CellState::AssumedFree : CellState::AssumedObstacle;
  }
  return map;
}

}  // namespace amphi
