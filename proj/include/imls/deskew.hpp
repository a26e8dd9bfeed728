#pragma once

#include <vector>

#include "imls/geometry.hpp"
#include "imls/scan_io.hpp"

namespace imls {

/// The two most recent solved end-of-sweep poses.
struct PosePair {
  RigidTransform prev;   // tau(t_{k-1})
  RigidTransform prev2;  // tau(t_{k-2})
};

/// Constant-velocity prediction prev * prev2^-1 * prev.
RigidTransform predict_pose(const PosePair& history);

/// Maps every point by interpolate(start, end, time_fraction). Pre-de-skewed
/// sweeps are mapped by `end` alone. Output order follows the input.
std::vector<Point3> deskew_sweep(const Sweep& sweep, const RigidTransform& start,
                                 const RigidTransform& end);

}  // namespace imls
