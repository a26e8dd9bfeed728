#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "imls/geometry.hpp"

namespace imls {

/// One LiDAR return in the sensor frame.
struct TimedPoint {
  Point3 position = Point3::Zero();
  double time_fraction = 0.0;  // in [0, 1] within the sweep
  std::optional<float> intensity;
};

/// All returns of one sensor rotation.
struct Sweep {
  std::size_t index = 0;
  std::vector<TimedPoint> points;
  /// Set when an external source already removed the motion skew; such
  /// sweeps are posed with a single transform.
  bool pre_deskewed = false;
};

/// Assigns time_fraction = (azimuth - azimuth of the first point) / 2pi,
/// wrapped to [0, 1), counter-clockwise about +z.
void synthesize_time_fractions(std::span<TimedPoint> points);

/// Packed little-endian float32 (x, y, z, reflectance) records. Zero-range
/// returns are dropped. Throws MalformedFile, EmptySweep or IoError.
Sweep read_kitti_sweep(const std::filesystem::path& path, std::size_t index);
void write_kitti_sweep(const Sweep& sweep, const std::filesystem::path& path);

/// "r11 r12 r13 t1 r21 ... t3" with 9 significant digits.
std::string format_kitti_pose(const RigidTransform& pose);
void write_kitti_trajectory(std::span<const RigidTransform> poses,
                            const std::filesystem::path& path);
std::vector<RigidTransform> read_kitti_trajectory(const std::filesystem::path& path);

struct PlyCloud {
  std::vector<Point3> points;
  std::vector<Vector3> normals;  // empty or same length as points
};

/// Binary little-endian vertex-only PLY with double x,y,z (and nx,ny,nz when
/// `normals` is non-empty).
void write_ply(std::span<const Point3> points, std::span<const Vector3> normals,
               const std::filesystem::path& path);
/// Reads binary little-endian vertex PLY files with float or double x,y,z and
/// optional nx,ny,nz; other vertex properties are skipped.
PlyCloud read_ply(const std::filesystem::path& path);
/// Raw (not de-skewed) sweep from a PLY file; times come from the azimuth.
Sweep read_ply_sweep(const std::filesystem::path& path, std::size_t index);

}  // namespace imls
