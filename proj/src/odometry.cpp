#include "imls/odometry.hpp"

#include <chrono>

#include "imls/deskew.hpp"
#include "imls/errors.hpp"
#include "imls/features.hpp"
#include "imls/object_removal.hpp"
#include "imls/sampling.hpp"

namespace imls {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

RunConfig validated(RunConfig config) {
  config.validate();
  return config;
}

}  // namespace

Odometry::Odometry(RunConfig config)
    : config_(validated(std::move(config))),
      remap_(config_.axis_remap.transform()),
      model_(static_cast<std::size_t>(config_.n), config_.h, config_.r) {}

std::vector<RigidTransform> Odometry::sensor_trajectory() const {
  std::vector<RigidTransform> out;
  out.reserve(poses_.size());
  const RigidTransform back = remap_.inverse();
  for (const auto& pose : poses_) out.push_back(back * pose * remap_);
  return out;
}

RigidTransform Odometry::next_prediction() const {
  if (poses_.empty()) return RigidTransform::identity();
  if (poses_.size() == 1) return poses_.back();
  return predict_pose({poses_.back(), poses_[poses_.size() - 2]});
}

SweepReport Odometry::localize_sweep(const Sweep& raw) {
  if (raw.points.empty()) throw EmptySweep("localize_sweep: empty sweep");
  SweepReport report;
  report.index = raw.index;
  report.raw_points = raw.points.size();

  // Vehicle-frame copy of the sweep.
  Sweep sweep;
  sweep.index = raw.index;
  sweep.pre_deskewed = config_.deskew == DeskewMode::kOff ||
                       (config_.deskew == DeskewMode::kAuto && raw.pre_deskewed);
  sweep.points = raw.points;
  for (auto& p : sweep.points) p.position = remap_ * p.position;

  const bool first = poses_.empty();
  const RigidTransform previous = first ? RigidTransform::identity() : poses_.back();
  const RigidTransform prediction = next_prediction();

  // De-skew with the prediction and express the cloud in the predicted
  // end-of-sweep vehicle frame.
  auto t0 = Clock::now();
  std::vector<Point3> local = deskew_sweep(sweep, previous, prediction);
  const RigidTransform to_local = prediction.inverse();
  for (auto& p : local) p = to_local * p;
  report.timings.deskew_ms = elapsed_ms(t0);

  t0 = Clock::now();
  std::vector<std::size_t> kept;
  if (config_.object_removal) {
    kept = remove_small_objects(local, config_.removal).kept;
    report.timings.removal_ms = elapsed_ms(t0);
  } else {
    kept.resize(local.size());
    for (std::size_t i = 0; i < kept.size(); ++i) kept[i] = i;
  }
  report.kept_points = kept.size();
  std::vector<Point3> kept_local;
  kept_local.reserve(kept.size());
  for (std::size_t i : kept) kept_local.push_back(local[i]);

  t0 = Clock::now();
  const FeaturedCloud features =
      compute_features(kept_local, config_.k_neighbors, Point3::Zero());
  report.timings.features_ms = elapsed_ms(t0);

  MatchResult match;
  match.pose = prediction;
  if (!first) {
    t0 = Clock::now();
    std::vector<Point3> world(kept_local.size());
    for (std::size_t i = 0; i < world.size(); ++i) world[i] = prediction * kept_local[i];
    SampleSet samples;
    try {
      switch (config_.sampling) {
        case SamplingMode::kOurs:
          samples = draw_samples(build_score_lists(features), world, model_, config_.s,
                                 config_.r, config_.min_samples);
          break;
        case SamplingMode::kRandom:
          samples = draw_random_samples(features, world, model_,
                                        static_cast<int>(kScoreListCount) * config_.s,
                                        config_.r, config_.seed + raw.index,
                                        config_.min_samples);
          break;
        case SamplingMode::kAll:
          samples = draw_all_samples(features, world, model_, config_.r,
                                     config_.min_samples);
          break;
      }
    } catch (const InsufficientSamples&) {
      report.insufficient_samples = true;
    }
    report.samples = samples.size();
    report.timings.sampling_ms = elapsed_ms(t0);

    t0 = Clock::now();
    if (report.insufficient_samples) {
      match.fallback = true;
    } else {
      match = match_scan(samples, model_, prediction, config_.iterations);
    }
    report.timings.match_ms = elapsed_ms(t0);
  }
  const RigidTransform pose = match.pose;
  report.match = match;

  // Rebuild the map contribution from the raw points with the solved pose;
  // normals computed above are reused, rotated into the world.
  t0 = Clock::now();
  const std::vector<Point3> world_final = deskew_sweep(sweep, previous, pose);
  FeaturedCloud contribution;
  contribution.reserve(kept.size());
  for (std::size_t j = 0; j < kept.size(); ++j) {
    if (!features.usable[j]) continue;
    contribution.push_back(world_final[kept[j]], pose.rotation() * features.normals[j],
                           features.a2d[j], true);
  }
  model_.insert_scan(std::move(contribution));
  report.timings.insert_ms = elapsed_ms(t0);

  poses_.push_back(pose);
  return report;
}

}  // namespace imls
