#pragma once

#include <span>
#include <string>
#include <vector>

#include "imls/geometry.hpp"

namespace imls {

struct SegmentDrift {
  double length = 0.0;             // meters
  std::size_t segments = 0;
  double translation_percent = 0.0;
  double rotation_deg_per_m = 0.0;
};

struct DriftReport {
  double translation_drift = 0.0;  // percent, averaged over every segment
  double rotation_drift = 0.0;     // degrees per meter
  std::vector<SegmentDrift> per_length;  // only lengths realizable on the path
  double endpoint_error = 0.0;     // meters
  double endpoint_percent = 0.0;   // of the ground-truth path length
  double path_length = 0.0;       // ground-truth path length
};

/// Cumulative travelled distance at every pose.
std::vector<double> trajectory_distances(std::span<const RigidTransform> poses);

/// KITTI odometry metric: for every start frame and segment length L in
/// {100, ..., 800} m reachable from it, the relative-pose error over the
/// segment divided by L. Throws LengthMismatch or TooShort.
DriftReport evaluate_kitti(std::span<const RigidTransform> estimate,
                           std::span<const RigidTransform> truth);

/// Endpoint error alone; needs no minimum path length.
double endpoint_error(std::span<const RigidTransform> estimate,
                      std::span<const RigidTransform> truth);

std::string format_report(const DriftReport& report);

}  // namespace imls
