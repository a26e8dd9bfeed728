#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "imls/geometry.hpp"

namespace imls {

struct Neighbor {
  std::uint32_t index;  // position in the point array the index was built from
  double squared_distance;
};

/// Static 3D k-d tree. Built once over a copy of the points; all queries are
/// read-only and may run concurrently.
class KdTree {
 public:
  KdTree() = default;
  explicit KdTree(std::span<const Point3> points, std::size_t leaf_size = 12);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  std::optional<Neighbor> nearest(const Point3& query) const;

  /// The k closest points (fewer if the tree is smaller), sorted by distance,
  /// ties by index.
  std::vector<Neighbor> knn(const Point3& query, std::size_t k) const;

  /// Every point with distance <= radius, sorted by index.
  std::vector<Neighbor> radius(const Point3& query, double radius) const;
  /// Same as above, appending into `out` (cleared first) without sorting.
  void radius(const Point3& query, double radius, std::vector<Neighbor>& out) const;

 private:
  struct Node {
    std::uint32_t begin = 0;  // leaves own points_[begin, end)
    std::uint32_t end = 0;
    bool leaf = true;
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    int axis = 0;
    double split = 0.0;
  };

  struct Entry {
    Point3 point;
    std::uint32_t id;
  };

  std::uint32_t build(std::vector<Entry>& entries, std::uint32_t begin, std::uint32_t end,
                      std::size_t leaf_size);
  void knn_recurse(std::uint32_t node, const Point3& q, std::size_t k,
                   std::vector<Neighbor>& heap) const;
  void radius_recurse(std::uint32_t node, const Point3& q, double r2,
                      std::vector<Neighbor>& out) const;

  std::vector<Point3> points_;         // reordered copy
  std::vector<std::uint32_t> ids_;     // original index of points_[i]
  std::vector<Node> nodes_;
};

}  // namespace imls
