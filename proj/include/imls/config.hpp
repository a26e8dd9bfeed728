#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "imls/geometry.hpp"

namespace imls {

enum class SamplingMode { kOurs, kRandom, kAll };
/// kAuto de-skews raw sweeps and leaves pre-de-skewed ones (KITTI) alone.
enum class DeskewMode { kAuto, kOn, kOff };

/// Signed axis permutation mapping sensor coordinates to the vehicle frame
/// (X_v right, Y_v forward, Z_v up).
struct AxisRemap {
  std::string spec = "kitti";
  Matrix3 sensor_to_vehicle = Matrix3::Identity();

  /// "kitti" (x forward, y left, z up), "identity", or three comma separated
  /// signed sensor axes giving X_v, Y_v, Z_v, e.g. "-y,x,z". Must be a proper
  /// rotation. Throws ConfigError.
  static AxisRemap parse(const std::string& spec);
  static AxisRemap kitti() { return parse("kitti"); }
  RigidTransform transform() const { return {sensor_to_vehicle, Vector3::Zero()}; }
};

struct GroundParams {
  double voxel_size = 0.5;
  double seed_radius = 10.0;     // horizontal distance from the sensor
  double max_slope_deg = 30.0;   // normal vs vertical
  double max_step = 0.3;         // mean height difference between neighbors
  double seed_band = 0.5;        // seeds lie within this of the lowest candidates
  double point_tolerance = 0.15; // height band for points in non-ground voxels
};

struct RemovalParams {
  GroundParams ground;
  double link_distance = 0.5;
  Vector3 max_extent = Vector3(14.0, 14.0, 4.0);  // X_v, Y_v, Z_v
};

struct RunConfig {
  int s = 100;           // samples per score list
  double h = 0.06;       // IMLS kernel width (m)
  double r = 0.20;       // neighbor / outlier radius (m)
  int iterations = 20;   // matching iterations
  int n = 100;           // scans kept in the model
  bool object_removal = true;
  DeskewMode deskew = DeskewMode::kAuto;
  SamplingMode sampling = SamplingMode::kOurs;
  int k_neighbors = 20;
  AxisRemap axis_remap = AxisRemap::kitti();
  int min_samples = 100;
  std::uint64_t seed = 0;  // random sampling only
  RemovalParams removal;

  /// Throws ConfigError when an invariant is violated.
  void validate() const;
};

/// Flat "key = value" text; '#' starts a comment. Unknown keys and bad values
/// throw ConfigError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);
/// Inverse of parse_config, one key per line.
std::string format_config(const RunConfig& config);

std::string to_string(SamplingMode mode);
std::string to_string(DeskewMode mode);

}  // namespace imls
