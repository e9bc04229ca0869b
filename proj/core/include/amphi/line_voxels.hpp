#pragma once

#include <vector>

#include "amphi/grid.hpp"

namespace amphi {

/// Every voxel whose closed cube touches the segment p0-p1, ordered by first
/// contact along the segment (ties broken lexicographically). A segment that
/// passes exactly through a shared face, edge or vertex touches all voxels
/// sharing it, which is the inclusive collision rule used for edges and rays.
///
/// Throws BoundsError if either endpoint lies outside the closed grid box.
std::vector<Voxel> line_voxels(const Vec3& p0, const Vec3& p1, const GridGeometry& grid);

}  // namespace amphi
