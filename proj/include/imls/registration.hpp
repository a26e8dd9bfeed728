#pragma once

#include <vector>

#include "imls/geometry.hpp"
#include "imls/imls_model.hpp"
#include "imls/sampling.hpp"

namespace imls {

struct MatchResult {
  RigidTransform pose;             // world-frame end-of-sweep pose
  int iterations_run = 0;
  std::size_t final_constraints = 0;
  double mean_abs_residual = 0.0;  // mean |I(x)| at the last iteration
  bool fallback = false;           // pose is the prediction
  std::vector<double> residual_history;  // mean |I(x)| per iteration
};

/// Scan-to-model matching. `samples` hold world positions at `prediction`.
/// Each iteration projects the moved samples on the IMLS surface, solves the
/// linearized point-to-plane problem and composes the motion. Falls back to
/// the prediction when an iteration has fewer than 6 usable constraints or a
/// degenerate system.
MatchResult match_scan(const SampleSet& samples, const ModelMap& map,
                       const RigidTransform& prediction, int iterations);


}  // namespace imls
