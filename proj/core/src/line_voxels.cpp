#include "amphi/line_voxels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <unordered_set>

namespace amphi {
namespace {

constexpr double kTieTolerance = 1e-12;

struct Crossing {
  double t;
  int axis;
  double plane;
};

// Candidate indices along one axis for a coordinate in voxel units. A
// coordinate sitting on a grid plane belongs to both neighbouring cells.
int axis_candidates(double c, bool on_plane, int n, std::array<int, 2>& out) {
  int count = 0;
  auto push = [&](int v) {
    if (v >= 0 && v < n) out[count++] = v;
  };
  if (on_plane) {
    const int plane = static_cast<int>(std::lround(c));
    push(plane - 1);
    push(plane);
  } else {
    push(static_cast<int>(std::floor(c)));
  }
  return count;
}

class Collector {
 public:
  explicit Collector(const Dims& dims) : dims_(dims) {}

  void add_point(const Vec3& u, const std::array<bool, 3>& pinned) {
    const std::array<int, 3> n{dims_.nx, dims_.ny, dims_.nh};
    std::array<std::array<int, 2>, 3> cand{};
    std::array<int, 3> count{};
    for (int a = 0; a < 3; ++a) {
      const bool on_plane = pinned[a] || u[a] == std::floor(u[a]);
      count[a] = axis_candidates(u[a], on_plane, n[a], cand[a]);
      if (count[a] == 0) return;
    }
    group_.clear();
    for (int x = 0; x < count[0]; ++x) {
      for (int y = 0; y < count[1]; ++y) {
        for (int z = 0; z < count[2]; ++z) {
          group_.push_back(Voxel{cand[0][x], cand[1][y], cand[2][z]});
        }
      }
    }
    std::sort(group_.begin(), group_.end());
    for (const Voxel& v : group_) {
      if (seen_.insert(v).second) out_.push_back(v);
    }
  }

  std::vector<Voxel> take() { return std::move(out_); }

 private:
  Dims dims_;
  std::vector<Voxel> group_;
  std::unordered_set<Voxel, VoxelHash> seen_;
  std::vector<Voxel> out_;
};

}  // namespace

std::vector<Voxel> line_voxels(const Vec3& p0, const Vec3& p1, const GridGeometry& grid) {
  if (!grid.contains(p0) || !grid.contains(p1)) {
    throw BoundsError("line_voxels: segment endpoint outside grid");
  }
  const double r = grid.resolution();
  const Vec3 u0 = p0 / r;
  const Vec3 u1 = p1 / r;
  const Vec3 d = u1 - u0;

  std::vector<Crossing> crossings;
  for (int a = 0; a < 3; ++a) {
    if (d[a] == 0.0) continue;
    const double lo = std::min(u0[a], u1[a]);
    const double hi = std::max(u0[a], u1[a]);
    for (double c = std::ceil(lo); c <= hi; c += 1.0) {
      crossings.push_back({(c - u0[a]) / d[a], a, c});
    }
  }
  std::sort(crossings.begin(), crossings.end(),
            [](const Crossing& x, const Crossing& y) { return x.t < y.t; });

  Collector collect(grid.dims());
  auto point_at = [&](double t) -> Vec3 { return u0 + t * d; };

  // Walk breakpoints in order: the start point, each group of simultaneous
  // plane crossings, the open interval midpoints between them, and the end.
  collect.add_point(u0, {false, false, false});
  double prev_t = 0.0;
  std::size_t idx = 0;
  while (idx < crossings.size()) {
    const double t = crossings[idx].t;
    std::array<bool, 3> pinned{false, false, false};
    Vec3 u = point_at(t);
    std::size_t end = idx;
    while (end < crossings.size() && crossings[end].t - t <= kTieTolerance) {
      pinned[crossings[end].axis] = true;
      u[crossings[end].axis] = crossings[end].plane;
      ++end;
    }
    if (t > prev_t) collect.add_point(point_at(0.5 * (prev_t + t)), {false, false, false});
    collect.add_point(u, pinned);
    prev_t = t;
    idx = end;
  }
  if (prev_t < 1.0) collect.add_point(point_at(0.5 * (prev_t + 1.0)), {false, false, false});
  collect.add_point(u1, {false, false, false});
  return collect.take();
}

}  // namespace amphi
