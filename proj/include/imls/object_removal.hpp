#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "imls/config.hpp"
#include "imls/geometry.hpp"

namespace imls {

using VoxelKey = std::array<std::int32_t, 3>;

struct GroundLabeling {
  std::vector<std::uint8_t> is_ground;  // one flag per input point
  std::vector<VoxelKey> seeds;

  std::size_t ground_count() const;
};

/// Voxel growing on a vehicle-frame cloud (sensor at the origin, Z_v up).
///
/// Ground is treated as a height field: only the lowest occupied voxel of each
/// voxel column can be ground. Seeds are such voxels within `seed_radius`
/// (horizontally) of the sensor whose PCA normal is within `max_slope_deg` of
/// vertical and whose mean height is within `seed_band` of the lowest seed
/// candidates. Growth visits lowest voxels of the 8 neighboring columns
/// (26-neighborhood) whose mean height differs by less than `max_step` and
/// that are flat; voxels too sparse for a stable normal count as flat when
/// their height spread is below `point_tolerance`. Points of grown voxels are
/// ground, as are points of other voxels lying within `point_tolerance` of an
/// adjacent ground voxel's mean height.
///
/// Throws NoGroundFound when no seed qualifies.
GroundLabeling extract_ground(std::span<const Point3> cloud, const GroundParams& params);

struct Box3 {
  Vector3 min;
  Vector3 max;
  Vector3 extent() const { return max - min; }
};

struct Cluster {
  std::vector<std::size_t> members;  // ascending input indices
  Box3 bbox;
};

/// Single-linkage components of the "closer than link_distance" relation.
/// Clusters are ordered by their smallest member index.
std::vector<Cluster> cluster_points(std::span<const Point3> points,
                                    double link_distance = 0.5);

struct RemovalResult {
  std::vector<std::size_t> kept;  // ascending input indices
  GroundLabeling ground;
  bool ground_found = false;
  std::size_t clusters = 0;
  std::size_t removed_clusters = 0;
};

/// Drops non-ground clusters whose bounding box is below every extent
/// threshold; ground points are always kept.
RemovalResult remove_small_objects(std::span<const Point3> cloud,
                                   const RemovalParams& params);

}  // namespace imls
