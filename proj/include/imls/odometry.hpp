#pragma once

#include <cstddef>
#include <vector>

#include "imls/config.hpp"
#include "imls/geometry.hpp"
#include "imls/imls_model.hpp"
#include "imls/registration.hpp"
#include "imls/scan_io.hpp"

namespace imls {

/// Wall-clock milliseconds spent in each stage of one sweep.
struct StageTimings {
  double deskew_ms = 0.0;
  double removal_ms = 0.0;
  double features_ms = 0.0;
  double sampling_ms = 0.0;
  double match_ms = 0.0;
  double insert_ms = 0.0;

  double total_ms() const {
    return deskew_ms + removal_ms + features_ms + sampling_ms + match_ms + insert_ms;
  }
};

struct SweepReport {
  std::size_t index = 0;
  MatchResult match;
  StageTimings timings;
  std::size_t raw_points = 0;
  std::size_t kept_points = 0;  // after small-object removal
  std::size_t samples = 0;
  bool insufficient_samples = false;
};

/// Sweep-by-sweep IMLS odometry. Poses are end-of-sweep vehicle poses
/// relative to the first sweep.
class Odometry {
 public:
  /// Throws ConfigError on an invalid configuration.
  explicit Odometry(RunConfig config);

  /// predict -> de-skew -> small-object removal -> features -> sampling ->
  /// match -> re-de-skew with the solved pose -> insert into the model.
  SweepReport localize_sweep(const Sweep& raw);

  const RunConfig& config() const { return config_; }
  const ModelMap& model() const { return model_; }
  /// Vehicle-frame poses, one per processed sweep.
  const std::vector<RigidTransform>& trajectory() const { return poses_; }
  /// Poses expressed with the sensor's own axes (inverse axis remap).
  std::vector<RigidTransform> sensor_trajectory() const;

  /// Prediction for the next sweep: identity, then the last pose, then the
  /// constant-velocity model.
  RigidTransform next_prediction() const;

 private:
  RunConfig config_;
  RigidTransform remap_;
  ModelMap model_;
  std::vector<RigidTransform> poses_;
};

}  // namespace imls
