#include "imls/object_removal.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "imls/errors.hpp"
#include "imls/spatial_index.hpp"

namespace imls {
namespace {

struct Voxel {
  VoxelKey key;
  std::vector<std::size_t> members;
  double mean_z = 0.0;
  double z_extent = 0.0;
  bool stable_normal = false;  // enough non-collinear points for PCA
  double normal_tilt = 0.0;    // radians from vertical
};

std::uint64_t pack(std::int32_t ix, std::int32_t iy) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(ix)) << 32) |
         static_cast<std::uint32_t>(iy);
}

void compute_stats(Voxel& v, std::span<const Point3> cloud) {
  Point3 mean = Point3::Zero();
  double zmin = std::numeric_limits<double>::max();
  double zmax = std::numeric_limits<double>::lowest();
  for (std::size_t i : v.members) {
    mean += cloud[i];
    zmin = std::min(zmin, cloud[i].z());
    zmax = std::max(zmax, cloud[i].z());
  }
  mean /= static_cast<double>(v.members.size());
  v.mean_z = mean.z();
  v.z_extent = zmax - zmin;
  if (v.members.size() < 3) return;
  Matrix3 cov = Matrix3::Zero();
  for (std::size_t i : v.members) {
    const Vector3 d = cloud[i] - mean;
    cov.noalias() += d * d.transpose();
  }
  cov /= static_cast<double>(v.members.size());
  Eigen::SelfAdjointEigenSolver<Matrix3> solver;
  solver.computeDirect(cov);
  const Vector3 lambda = solver.eigenvalues().cwiseMax(0.0);
  // Collinear (single scan line) or point-like content has no stable normal.
  if (!(lambda[2] > 0.0) || lambda[1] < 1e-3 * lambda[2]) return;
  const Vector3 normal = solver.eigenvectors().col(0);
  v.stable_normal = normal.allFinite();
  v.normal_tilt = std::acos(std::min(1.0, std::abs(normal.z())));
}

}  // namespace

std::size_t GroundLabeling::ground_count() const {
  return static_cast<std::size_t>(std::count(is_ground.begin(), is_ground.end(), 1));
}

GroundLabeling extract_ground(std::span<const Point3> cloud, const GroundParams& params) {
  if (cloud.empty()) throw std::invalid_argument("extract_ground: empty cloud");
  const double size = params.voxel_size;
  const double max_tilt = params.max_slope_deg * std::numbers::pi / 180.0;

  // Voxels in key order for a deterministic traversal.
  std::map<VoxelKey, std::size_t> by_key;
  std::vector<Voxel> voxels;
  std::vector<std::size_t> voxel_of(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const VoxelKey key{static_cast<std::int32_t>(std::floor(cloud[i].x() / size)),
                       static_cast<std::int32_t>(std::floor(cloud[i].y() / size)),
                       static_cast<std::int32_t>(std::floor(cloud[i].z() / size))};
    auto [it, inserted] = by_key.try_emplace(key, voxels.size());
    if (inserted) voxels.push_back(Voxel{key, {}});
    voxels[it->second].members.push_back(i);
    voxel_of[i] = it->second;
  }
  for (auto& v : voxels) compute_stats(v, cloud);

  // Lowest occupied voxel of every column.
  std::unordered_map<std::uint64_t, std::size_t> lowest;
  for (const auto& [key, id] : by_key) {
    lowest.try_emplace(pack(key[0], key[1]), id);  // map order: z ascending per column
  }
  const auto strictly_flat = [&](const Voxel& v) {
    return v.stable_normal && v.normal_tilt <= max_tilt;
  };
  const auto flat = [&](const Voxel& v) {
    return v.stable_normal ? v.normal_tilt <= max_tilt
                           : v.z_extent <= params.point_tolerance;
  };

  std::vector<std::size_t> candidates;
  for (const auto& [key, id] : by_key) {
    if (lowest.at(pack(key[0], key[1])) != id) continue;
    const double cx = (key[0] + 0.5) * size;
    const double cy = (key[1] + 0.5) * size;
    if (std::hypot(cx, cy) > params.seed_radius) continue;
    if (strictly_flat(voxels[id])) candidates.push_back(id);
  }

  GroundLabeling labels;
  labels.is_ground.assign(cloud.size(), 0);
  if (candidates.empty()) throw NoGroundFound("extract_ground: no seed voxel qualifies");

  // Reference height: 10th percentile of candidate heights, which rejects
  // flat roofs of nearby objects as seeds.
  std::vector<double> heights;
  for (std::size_t id : candidates) heights.push_back(voxels[id].mean_z);
  std::sort(heights.begin(), heights.end());
  const double reference = heights[heights.size() / 10];

  std::vector<std::uint8_t> ground(voxels.size(), 0);
  std::deque<std::size_t> queue;
  for (std::size_t id : candidates) {
    if (voxels[id].mean_z > reference + params.seed_band) continue;
    ground[id] = 1;
    labels.seeds.push_back(voxels[id].key);
    queue.push_back(id);
  }

  while (!queue.empty()) {
    const std::size_t id = queue.front();
    queue.pop_front();
    const Voxel& v = voxels[id];
    for (int dx = -1; dx <= 1; ++dx) {
      for (int dy = -1; dy <= 1; ++dy) {
        if (dx == 0 && dy == 0) continue;
        const auto it = lowest.find(pack(v.key[0] + dx, v.key[1] + dy));
        if (it == lowest.end() || ground[it->second]) continue;
        const Voxel& nb = voxels[it->second];
        if (std::abs(nb.key[2] - v.key[2]) > 1) continue;
        if (std::abs(nb.mean_z - v.mean_z) >= params.max_step) continue;
        if (!flat(nb)) continue;
        ground[it->second] = 1;
        queue.push_back(it->second);
      }
    }
  }

  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Voxel& v = voxels[voxel_of[i]];
    if (ground[voxel_of[i]]) {
      labels.is_ground[i] = 1;
      continue;
    }
    // Ground points sharing a voxel with an object, e.g. at a wall base.
    for (int dx = -1; dx <= 1 && !labels.is_ground[i]; ++dx) {
      for (int dy = -1; dy <= 1; ++dy) {
        const auto it = lowest.find(pack(v.key[0] + dx, v.key[1] + dy));
        if (it == lowest.end() || !ground[it->second]) continue;
        const Voxel& g = voxels[it->second];
        if (std::abs(cloud[i].z() - g.mean_z) <= params.point_tolerance) {
          labels.is_ground[i] = 1;
          break;
        }
      }
    }
  }
  return labels;
}

std::vector<Cluster> cluster_points(std::span<const Point3> points, double link_distance) {
  if (!(link_distance > 0.0)) {
    throw std::invalid_argument("cluster_points: link_distance must be > 0");
  }
  std::vector<Cluster> clusters;
  if (points.empty()) return clusters;

  std::vector<std::size_t> parent(points.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  const auto find = [&](std::size_t i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  };

  const KdTree tree(points);
  const double link2 = link_distance * link_distance;
  std::vector<Neighbor> neighbors;
  for (std::size_t i = 0; i < points.size(); ++i) {
    tree.radius(points[i], link_distance, neighbors);
    for (const auto& nb : neighbors) {
      if (nb.index <= i || nb.squared_distance >= link2) continue;
      const std::size_t a = find(i);
      const std::size_t b = find(nb.index);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }

  std::unordered_map<std::size_t, std::size_t> cluster_of_root;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const std::size_t root = find(i);
    auto [it, inserted] = cluster_of_root.try_emplace(root, clusters.size());
    if (inserted) clusters.push_back(Cluster{{}, Box3{points[i], points[i]}});
    Cluster& c = clusters[it->second];
    c.members.push_back(i);
    c.bbox.min = c.bbox.min.cwiseMin(points[i]);
    c.bbox.max = c.bbox.max.cwiseMax(points[i]);
  }
  return clusters;
}

RemovalResult remove_small_objects(std::span<const Point3> cloud,
                                   const RemovalParams& params) {
  RemovalResult result;
  if (cloud.empty()) return result;
  try {
    result.ground = extract_ground(cloud, params.ground);
    result.ground_found = true;
  } catch (const NoGroundFound&) {
    result.ground.is_ground.assign(cloud.size(), 0);
  }

  std::vector<std::size_t> non_ground;
  std::vector<Point3> non_ground_points;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (!result.ground.is_ground[i]) {
      non_ground.push_back(i);
      non_ground_points.push_back(cloud[i]);
    }
  }

  std::vector<std::uint8_t> keep(result.ground.is_ground);
  const auto clusters = cluster_points(non_ground_points, params.link_distance);
  result.clusters = clusters.size();
  for (const auto& c : clusters) {
    const Vector3 extent = c.bbox.extent();
    const bool large = extent.x() >= params.max_extent.x() ||
                       extent.y() >= params.max_extent.y() ||
                       extent.z() >= params.max_extent.z();
    if (!large) {
      ++result.removed_clusters;
      continue;
    }
    for (std::size_t m : c.members) keep[non_ground[m]] = 1;
  }
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (keep[i]) result.kept.push_back(i);
  }
  return result;
}

}  // namespace imls
