#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "imls/features.hpp"
#include "imls/imls_model.hpp"

namespace imls {

/// Identity of each observability list. The first six favor rotations about
/// the vehicle axes, the last three translations along them.
enum class ScoreList : std::uint8_t {
  kRotXPos, kRotXNeg, kRotYPos, kRotYNeg, kRotZPos, kRotZNeg,
  kTransX, kTransY, kTransZ,
};
inline constexpr std::size_t kScoreListCount = 9;

/// The nine scores of one vehicle-frame point:
/// +-a2d^2 (x cross n) . axis and a2d^2 |n . axis|.
std::array<double, kScoreListCount> point_scores(const Point3& x, const Vector3& n,
                                                 double a2d);

struct ScoreLists {
  /// Point indices sorted by descending score, ties by ascending index.
  std::array<std::vector<std::uint32_t>, kScoreListCount> order;
  /// scores[list][point]; unusable points hold -infinity.
  std::array<std::vector<double>, kScoreListCount> scores;
};

ScoreLists build_score_lists(const FeaturedCloud& vehicle_scan);

struct Sample {
  std::uint32_t index;  // into the scan
  Point3 position;      // world frame, at the pose used for drawing
  int list = -1;        // source score list; -1 for random/all modes
};

struct SampleSet {
  std::vector<Sample> samples;  // duplicates allowed across lists

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
};

/// Walks each list from its head and keeps a candidate when its nearest model
/// point lies within `r`, until `s` are kept or the list runs out. Unusable
/// points are never drawn. Throws InsufficientSamples below `min_total`.
SampleSet draw_samples(const ScoreLists& lists, std::span<const Point3> world_points,
                       const ModelMap& model, int s, double r, int min_total = 100);

/// `count` uniformly shuffled usable points passing the same gate.
SampleSet draw_random_samples(const FeaturedCloud& scan,
                              std::span<const Point3> world_points,
                              const ModelMap& model, int count, double r,
                              std::uint64_t seed, int min_total = 100);

/// Every usable point passing the gate.
SampleSet draw_all_samples(const FeaturedCloud& scan, std::span<const Point3> world_points,
                           const ModelMap& model, double r, int min_total = 100);

}  // namespace imls
