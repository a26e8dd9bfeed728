#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "imls/features.hpp"
#include "imls/geometry.hpp"
#include "imls/spatial_index.hpp"

namespace imls {

/// Result of evaluating the IMLS distance function at a query point.
struct ImlsEval {
  double value = 0.0;        // signed distance, positive on the normals' side
  Vector3 normal;            // normal of the nearest model point
  std::size_t support = 0;   // neighbors within the radius
  double nearest_distance = 0.0;
};

struct SurfaceProjection {
  Point3 point;
  Vector3 normal;
  double value = 0.0;
};

/// Gaussian IMLS weight exp(-d^2 / h^2).
double imls_weight(double distance, double h);

/// FIFO of the last `capacity` localized scans (world frame, frozen normals)
/// behind a k-d tree over all member points. The tree is rebuilt on every
/// insertion; queries are const and safe to run concurrently.
class ModelMap {
 public:
  ModelMap(std::size_t capacity, double kernel_width, double radius);

  /// Appends a scan and evicts the oldest one beyond capacity.
  void insert_scan(FeaturedCloud scan);

  std::size_t capacity() const { return capacity_; }
  double kernel_width() const { return h_; }
  double radius() const { return r_; }
  bool empty() const { return points_.empty(); }
  std::size_t scan_count() const { return scans_.size(); }
  std::size_t point_count() const { return points_.size(); }
  const std::deque<FeaturedCloud>& scans() const { return scans_; }
  std::span<const Point3> points() const { return points_; }
  std::span<const Vector3> normals() const { return normals_; }
  const KdTree& index() const { return index_; }

  std::optional<Neighbor> nearest(const Point3& x) const { return index_.nearest(x); }

  /// Weighted mean of (x - p_i) . n_i over the neighbors within the radius;
  /// nullopt (no support) when no model point lies within it.
  std::optional<ImlsEval> evaluate(const Point3& x) const;

  /// x - I(x) n_c with n_c the nearest point's normal.
  std::optional<SurfaceProjection> project(const Point3& x) const;

 private:
  void rebuild();

  std::size_t capacity_;
  double h_;
  double r_;
  std::deque<FeaturedCloud> scans_;
  std::vector<Point3> points_;
  std::vector<Vector3> normals_;
  KdTree index_;
};

inline std::optional<ImlsEval> evaluate_imls(const ModelMap& map, const Point3& x) {
  return map.evaluate(x);
}
inline std::optional<SurfaceProjection> project_to_surface(const ModelMap& map,
                                                           const Point3& x) {
  return map.project(x);
}

}  // namespace imls
