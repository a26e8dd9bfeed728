#include "imls/spatial_index.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace imls {
namespace {

bool closer(const Neighbor& a, const Neighbor& b) {
  return a.squared_distance < b.squared_distance ||
         (a.squared_distance == b.squared_distance && a.index < b.index);
}

}  // namespace

KdTree::KdTree(std::span<const Point3> points, std::size_t leaf_size) {
  if (points.size() >= std::numeric_limits<std::uint32_t>::max()) {
    throw std::length_error("KdTree: too many points");
  }
  if (points.empty()) return;
  const auto n = static_cast<std::uint32_t>(points.size());
  std::vector<Entry> entries(n);
  for (std::uint32_t i = 0; i < n; ++i) entries[i] = {points[i], i};
  nodes_.reserve(2 * (n / std::max<std::size_t>(leaf_size, 1)) + 1);
  build(entries, 0, n, std::max<std::size_t>(leaf_size, 1));
  // Points end up in leaf order for cache-friendly scanning.
  points_.resize(n);
  ids_.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    points_[i] = entries[i].point;
    ids_[i] = entries[i].id;
  }
}

std::uint32_t KdTree::build(std::vector<Entry>& entries, std::uint32_t begin,
                            std::uint32_t end, std::size_t leaf_size) {
  const auto id = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back(Node{begin, end});
  if (end - begin <= leaf_size) return id;

  Eigen::Vector3d lo = Eigen::Vector3d::Constant(std::numeric_limits<double>::max());
  Eigen::Vector3d hi = -lo;
  for (std::uint32_t i = begin; i < end; ++i) {
    lo = lo.cwiseMin(entries[i].point);
    hi = hi.cwiseMax(entries[i].point);
  }
  int axis = 0;
  (hi - lo).maxCoeff(&axis);
  if (hi[axis] - lo[axis] <= 0.0) return id;  // all points identical

  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(entries.begin() + begin, entries.begin() + mid, entries.begin() + end,
                   [axis](const Entry& a, const Entry& b) {
                     return a.point[axis] < b.point[axis];
                   });
  const double split = entries[mid].point[axis];
  const std::uint32_t left = build(entries, begin, mid, leaf_size);
  const std::uint32_t right = build(entries, mid, end, leaf_size);
  nodes_[id].leaf = false;
  nodes_[id].left = left;
  nodes_[id].right = right;
  nodes_[id].axis = axis;
  nodes_[id].split = split;
  return id;
}

std::optional<Neighbor> KdTree::nearest(const Point3& query) const {
  auto result = knn(query, 1);
  if (result.empty()) return std::nullopt;
  return result.front();
}

std::vector<Neighbor> KdTree::knn(const Point3& query, std::size_t k) const {
  std::vector<Neighbor> heap;
  if (empty() || k == 0) return heap;
  heap.reserve(k + 1);
  knn_recurse(0, query, k, heap);
  std::sort_heap(heap.begin(), heap.end(), closer);
  return heap;
}

void KdTree::knn_recurse(std::uint32_t node_id, const Point3& q, std::size_t k,
                         std::vector<Neighbor>& heap) const {
  const Node& node = nodes_[node_id];
  if (node.leaf) {
    for (std::uint32_t i = node.begin; i < node.end; ++i) {
      const Neighbor candidate{ids_[i], (points_[i] - q).squaredNorm()};
      if (heap.size() < k) {
        heap.push_back(candidate);
        std::push_heap(heap.begin(), heap.end(), closer);
      } else if (closer(candidate, heap.front())) {
        std::pop_heap(heap.begin(), heap.end(), closer);
        heap.back() = candidate;
        std::push_heap(heap.begin(), heap.end(), closer);
      }
    }
    return;
  }
  const double diff = q[node.axis] - node.split;
  const std::uint32_t near_child = diff < 0.0 ? node.left : node.right;
  const std::uint32_t far_child = diff < 0.0 ? node.right : node.left;
  knn_recurse(near_child, q, k, heap);
  if (heap.size() < k || diff * diff <= heap.front().squared_distance) {
    knn_recurse(far_child, q, k, heap);
  }
}

std::vector<Neighbor> KdTree::radius(const Point3& query, double r) const {
  std::vector<Neighbor> out;
  radius(query, r, out);
  std::sort(out.begin(), out.end(),
            [](const Neighbor& a, const Neighbor& b) { return a.index < b.index; });
  return out;
}

void KdTree::radius(const Point3& query, double r, std::vector<Neighbor>& out) const {
  out.clear();
  if (empty() || r < 0.0) return;
  radius_recurse(0, query, r * r, out);
}

void KdTree::radius_recurse(std::uint32_t node_id, const Point3& q, double r2,
                            std::vector<Neighbor>& out) const {
  const Node& node = nodes_[node_id];
  if (node.leaf) {
    for (std::uint32_t i = node.begin; i < node.end; ++i) {
      const double d2 = (points_[i] - q).squaredNorm();
      if (d2 <= r2) out.push_back({ids_[i], d2});
    }
    return;
  }
  const double diff = q[node.axis] - node.split;
  if (diff <= 0.0 || diff * diff <= r2) radius_recurse(node.left, q, r2, out);
  if (diff >= 0.0 || diff * diff <= r2) radius_recurse(node.right, q, r2, out);
}

}  // namespace imls
