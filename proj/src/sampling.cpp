#include "imls/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "imls/errors.hpp"

namespace imls {
namespace {

/// Memoized outlier gate: nearest model point within r.
class Gate {
 public:
  Gate(std::span<const Point3> world_points, const ModelMap& model, double r)
      : points_(world_points), model_(model), r2_(r * r),
        state_(world_points.size(), kUnknown) {}

  bool passes(std::uint32_t i) {
    if (state_[i] == kUnknown) {
      const auto nb = model_.nearest(points_[i]);
      state_[i] = nb && nb->squared_distance <= r2_ ? kInside : kOutside;
    }
    return state_[i] == kInside;
  }

 private:
  static constexpr std::uint8_t kUnknown = 0, kInside = 1, kOutside = 2;
  std::span<const Point3> points_;
  const ModelMap& model_;
  double r2_;
  std::vector<std::uint8_t> state_;
};

void check_inputs(std::size_t scan_size, std::span<const Point3> world_points,
                  const ModelMap& model) {
  if (scan_size != world_points.size()) {
    throw std::invalid_argument("sampling: scan and world points differ in size");
  }
  if (model.empty()) throw std::invalid_argument("sampling: model map is empty");
}

void check_total(const SampleSet& set, int min_total) {
  if (set.size() < static_cast<std::size_t>(std::max(min_total, 0))) {
    throw InsufficientSamples("sampling: only " + std::to_string(set.size()) +
                              " samples passed the outlier gate (minimum " +
                              std::to_string(min_total) + ")");
  }
}

}  // namespace

std::array<double, kScoreListCount> point_scores(const Point3& x, const Vector3& n,
                                                 double a2d) {
  const double w = a2d * a2d;
  const Vector3 lever = x.cross(n);
  return {w * lever.x(),          -w * lever.x(),          w * lever.y(),
          -w * lever.y(),         w * lever.z(),           -w * lever.z(),
          w * std::abs(n.x()),    w * std::abs(n.y()),     w * std::abs(n.z())};
}

ScoreLists build_score_lists(const FeaturedCloud& scan) {
  scan.check_consistent();
  const std::size_t n = scan.size();
  ScoreLists lists;
  for (auto& s : lists.scores) s.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!scan.usable[i]) {
      for (auto& s : lists.scores) s[i] = -std::numeric_limits<double>::infinity();
      continue;
    }
    const auto scores = point_scores(scan.points[i], scan.normals[i], scan.a2d[i]);
    for (std::size_t l = 0; l < kScoreListCount; ++l) lists.scores[l][i] = scores[l];
  }
  for (std::size_t l = 0; l < kScoreListCount; ++l) {
    auto& order = lists.order[l];
    order.resize(n);
    std::iota(order.begin(), order.end(), 0u);
    const auto& score = lists.scores[l];
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      return score[a] > score[b] || (score[a] == score[b] && a < b);
    });
  }
  return lists;
}

SampleSet draw_samples(const ScoreLists& lists, std::span<const Point3> world_points,
                       const ModelMap& model, int s, double r, int min_total) {
  if (s < 1) throw std::invalid_argument("draw_samples: s must be >= 1");
  check_inputs(lists.scores[0].size(), world_points, model);
  Gate gate(world_points, model, r);
  SampleSet set;
  set.samples.reserve(kScoreListCount * static_cast<std::size_t>(s));
  for (std::size_t l = 0; l < kScoreListCount; ++l) {
    int accepted = 0;
    for (std::uint32_t i : lists.order[l]) {
      if (accepted == s) break;
      if (std::isinf(lists.scores[l][i]) && lists.scores[l][i] < 0.0) break;
      if (!gate.passes(i)) continue;
      set.samples.push_back({i, world_points[i], static_cast<int>(l)});
      ++accepted;
    }
  }
  check_total(set, min_total);
  return set;
}

SampleSet draw_random_samples(const FeaturedCloud& scan,
                              std::span<const Point3> world_points,
                              const ModelMap& model, int count, double r,
                              std::uint64_t seed, int min_total) {
  check_inputs(scan.size(), world_points, model);
  std::vector<std::uint32_t> order(scan.size());
  std::iota(order.begin(), order.end(), 0u);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  Gate gate(world_points, model, r);
  SampleSet set;
  for (std::uint32_t i : order) {
    if (static_cast<int>(set.size()) >= count) break;
    if (!scan.usable[i] || !gate.passes(i)) continue;
    set.samples.push_back({i, world_points[i]});
  }
  check_total(set, min_total);
  return set;
}

SampleSet draw_all_samples(const FeaturedCloud& scan, std::span<const Point3> world_points,
                           const ModelMap& model, double r, int min_total) {
  check_inputs(scan.size(), world_points, model);
  Gate gate(world_points, model, r);
  SampleSet set;
  for (std::uint32_t i = 0; i < scan.size(); ++i) {
    if (!scan.usable[i] || !gate.passes(i)) continue;
    set.samples.push_back({i, world_points[i]});
  }
  check_total(set, min_total);
  return set;
}

}  // namespace imls
