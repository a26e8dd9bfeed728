#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "imls/geometry.hpp"

namespace imls {

/// Points with unit normals and the planar scalar a2d = (s2 - s3) / s1,
/// where s_i are square roots of the neighborhood PCA eigenvalues.
struct FeaturedCloud {
  std::vector<Point3> points;
  std::vector<Vector3> normals;
  std::vector<double> a2d;
  std::vector<std::uint8_t> usable;  // 0 for degenerate neighborhoods

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  void reserve(std::size_t n);
  void push_back(const Point3& p, const Vector3& normal, double planarity, bool ok);

  /// Rigidly moved copy (points and normals).
  FeaturedCloud transformed(const RigidTransform& t) const;
  FeaturedCloud subset(std::span<const std::size_t> indices) const;
  /// Throws std::invalid_argument on mismatched array lengths.
  void check_consistent() const;
};

struct PointFeature {
  Vector3 normal = Vector3::UnitZ();
  double a2d = 0.0;
  bool usable = false;
};

/// PCA of one neighborhood. The normal is the smallest-eigenvalue eigenvector
/// oriented so that normal . (sensor_origin - point) >= 0.
PointFeature analyze_neighborhood(std::span<const Point3> neighborhood, const Point3& point,
                                  const Point3& sensor_origin);

/// PCA over each point's k nearest neighbors (the point included). Throws
/// TooFewPoints when the cloud has fewer than k points or k < 3.
FeaturedCloud compute_features(std::span<const Point3> cloud, int k_neighbors,
                               const Point3& sensor_origin);

}  // namespace imls
