#include "imls/deskew.hpp"

#include <algorithm>

namespace imls {

RigidTransform predict_pose(const PosePair& history) {
  return history.prev * history.prev2.inverse() * history.prev;
}

std::vector<Point3> deskew_sweep(const Sweep& sweep, const RigidTransform& start,
                                 const RigidTransform& end) {
  std::vector<Point3> out;
  out.reserve(sweep.points.size());
  if (sweep.pre_deskewed) {
    for (const auto& p : sweep.points) out.push_back(end * p.position);
    return out;
  }
  for (const auto& p : sweep.points) {
    const double u = std::clamp(p.time_fraction, 0.0, 1.0);
    out.push_back(interpolate(start, end, u) * p.position);
  }
  return out;
}

}  // namespace imls
