#include "imls/evaluation.hpp"

#include <array>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "imls/errors.hpp"

namespace imls {
namespace {

constexpr std::array<double, 8> kLengths{100, 200, 300, 400, 500, 600, 700, 800};

void check_lengths(std::span<const RigidTransform> estimate,
                   std::span<const RigidTransform> truth) {
  if (estimate.size() != truth.size()) {
    throw LengthMismatch("trajectories have " + std::to_string(estimate.size()) + " and " +
                         std::to_string(truth.size()) + " poses");
  }
  if (truth.size() < 2) throw TooShort("trajectories need at least 2 poses");
}

}  // namespace

std::vector<double> trajectory_distances(std::span<const RigidTransform> poses) {
  std::vector<double> dist;
  dist.reserve(poses.size());
  double total = 0.0;
  for (std::size_t i = 0; i < poses.size(); ++i) {
    if (i > 0) total += (poses[i].translation() - poses[i - 1].translation()).norm();
    dist.push_back(total);
  }
  return dist;
}

double endpoint_error(std::span<const RigidTransform> estimate,
                      std::span<const RigidTransform> truth) {
  check_lengths(estimate, truth);
  return (estimate.back().translation() - truth.back().translation()).norm();
}

DriftReport evaluate_kitti(std::span<const RigidTransform> estimate,
                           std::span<const RigidTransform> truth) {
  check_lengths(estimate, truth);
  const std::vector<double> dist = trajectory_distances(truth);

  DriftReport report;
  report.path_length = dist.back();
  report.endpoint_error = endpoint_error(estimate, truth);
  report.endpoint_percent =
      report.path_length > 0.0 ? 100.0 * report.endpoint_error / report.path_length : 0.0;

  double t_sum = 0.0;
  double r_sum = 0.0;
  std::size_t total = 0;
  for (double length : kLengths) {
    SegmentDrift row;
    row.length = length;
    double t_len = 0.0;
    double r_len = 0.0;
    std::size_t last = 0;
    for (std::size_t first = 0; first < truth.size(); ++first) {
      // First frame at least `length` further along the path; `last` only
      // moves forward as `first` does.
      last = std::max(last, first);
      while (last < truth.size() && dist[last] < dist[first] + length) ++last;
      if (last == truth.size()) break;
      const RigidTransform delta_est = estimate[first].inverse() * estimate[last];
      const RigidTransform delta_gt = truth[first].inverse() * truth[last];
      const RigidTransform error = delta_est.inverse() * delta_gt;
      t_len += error.translation().norm() / length;
      r_len += rotation_angle(error.rotation()) * 180.0 / std::numbers::pi / length;
      ++row.segments;
    }
    if (row.segments == 0) continue;
    row.translation_percent = 100.0 * t_len / static_cast<double>(row.segments);
    row.rotation_deg_per_m = r_len / static_cast<double>(row.segments);
    t_sum += t_len;
    r_sum += r_len;
    total += row.segments;
    report.per_length.push_back(row);
  }
  if (total == 0) {
    throw TooShort("trajectory is shorter than the 100 m evaluation segment");
  }
  report.translation_drift = 100.0 * t_sum / static_cast<double>(total);
  report.rotation_drift = r_sum / static_cast<double>(total);
  return report;
}

std::string format_report(const DriftReport& report) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "translation_drift_percent %.6f\n", report.translation_drift);
  out << buf;
  std::snprintf(buf, sizeof(buf), "rotation_drift_deg_per_m %.8f\n", report.rotation_drift);
  out << buf;
  std::snprintf(buf, sizeof(buf), "endpoint_error_m %.6f\nendpoint_error_percent %.6f\n",
                report.endpoint_error, report.endpoint_percent);
  out << buf;
  std::snprintf(buf, sizeof(buf), "path_length_m %.3f\n", report.path_length);
  out << buf;
  out << "# length_m segments translation_percent rotation_deg_per_m\n";
  for (const auto& row : report.per_length) {
    std::snprintf(buf, sizeof(buf), "%.0f %zu %.6f %.8f\n", row.length, row.segments,
                  row.translation_percent, row.rotation_deg_per_m);
    out << buf;
  }
  return out.str();
}

}  // namespace imls
