#include "imls/registration.hpp"

#include <cmath>
#include <stdexcept>

#include "imls/errors.hpp"

namespace imls {
namespace {

MatchResult fallback_result(const RigidTransform& prediction, int iterations_run,
                            std::vector<double> history) {
  MatchResult out;
  out.pose = prediction;
  out.iterations_run = iterations_run;
  out.fallback = true;
  out.residual_history = std::move(history);
  if (!out.residual_history.empty()) out.mean_abs_residual = out.residual_history.back();
  return out;
}

}  // namespace

MatchResult match_scan(const SampleSet& samples, const ModelMap& map,
                       const RigidTransform& prediction, int iterations) {
  if (map.empty()) throw std::invalid_argument("match_scan: model map is empty");
  if (iterations < 1) throw std::invalid_argument("match_scan: iterations must be >= 1");

  RigidTransform motion;  // world-frame correction accumulated so far
  std::vector<PlaneConstraint> constraints;
  constraints.reserve(samples.size());
  std::vector<double> history;
  history.reserve(static_cast<std::size_t>(iterations));

  for (int it = 0; it < iterations; ++it) {
    // Linearize about the current sensor position so that lever arms stay
    // sensor-sized wherever the vehicle is in the world.
    const Point3 center = (motion * prediction).translation();
    constraints.clear();
    double abs_sum = 0.0;
    for (const auto& sample : samples.samples) {
      const Point3 x = motion * sample.position;
      const auto projection = map.project(x);
      if (!projection) continue;  // no support this iteration
      constraints.push_back({x - center, projection->point - center, projection->normal});
      abs_sum += std::abs(projection->value);
    }
    if (!constraints.empty()) {
      history.push_back(abs_sum / static_cast<double>(constraints.size()));
    }
    if (constraints.size() < 6) return fallback_result(prediction, it + 1, history);

    SmallMotion step;
    try {
      step = solve_point_to_plane(constraints);
    } catch (const DegenerateSystem&) {
      return fallback_result(prediction, it + 1, history);
    }
    const RigidTransform to_center = RigidTransform::from_translation(-center);
    motion = to_center.inverse() * step.to_transform() * to_center * motion;
  }

  MatchResult out;
  out.pose = motion * prediction;
  out.iterations_run = iterations;
  out.final_constraints = constraints.size();
  out.mean_abs_residual = history.back();
  out.residual_history = std::move(history);
  return out;
}

}  // namespace imls
