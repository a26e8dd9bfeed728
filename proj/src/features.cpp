#include "imls/features.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "imls/errors.hpp"
#include "imls/spatial_index.hpp"

namespace imls {

void FeaturedCloud::reserve(std::size_t n) {
  points.reserve(n);
  normals.reserve(n);
  a2d.reserve(n);
  usable.reserve(n);
}

void FeaturedCloud::push_back(const Point3& p, const Vector3& normal, double planarity,
                              bool ok) {
  points.push_back(p);
  normals.push_back(normal);
  a2d.push_back(planarity);
  usable.push_back(ok ? 1 : 0);
}

FeaturedCloud FeaturedCloud::transformed(const RigidTransform& t) const {
  FeaturedCloud out = *this;
  for (auto& p : out.points) p = t * p;
  for (auto& n : out.normals) n = t.rotation() * n;
  return out;
}

FeaturedCloud FeaturedCloud::subset(std::span<const std::size_t> indices) const {
  FeaturedCloud out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(points[i], normals[i], a2d[i], usable[i]);
  return out;
}

void FeaturedCloud::check_consistent() const {
  const std::size_t n = points.size();
  if (normals.size() != n || a2d.size() != n || usable.size() != n) {
    throw std::invalid_argument("FeaturedCloud: array lengths differ");
  }
}

PointFeature analyze_neighborhood(std::span<const Point3> neighborhood, const Point3& point,
                                  const Point3& sensor_origin) {
  PointFeature out;
  if (neighborhood.size() < 3) return out;
  Point3 mean = Point3::Zero();
  for (const auto& p : neighborhood) mean += p;
  mean /= static_cast<double>(neighborhood.size());
  Matrix3 cov = Matrix3::Zero();
  for (const auto& p : neighborhood) {
    const Vector3 d = p - mean;
    cov.noalias() += d * d.transpose();
  }
  cov /= static_cast<double>(neighborhood.size());

  Eigen::SelfAdjointEigenSolver<Matrix3> solver;
  solver.computeDirect(cov);
  // Ascending order: lambda3 <= lambda2 <= lambda1.
  const Vector3 lambda = solver.eigenvalues().cwiseMax(0.0);
  const double l1 = lambda[2];
  if (!(l1 >= 1e-12)) return out;

  const double s1 = std::sqrt(l1);
  const double s2 = std::sqrt(lambda[1]);
  const double s3 = std::sqrt(lambda[0]);
  Vector3 normal = solver.eigenvectors().col(0).normalized();
  if (normal.dot(sensor_origin - point) < 0.0) normal = -normal;
  out.normal = normal;
  out.a2d = std::clamp((s2 - s3) / s1, 0.0, 1.0);
  out.usable = normal.allFinite();
  if (!out.usable) {
    out.normal = Vector3::UnitZ();
    out.a2d = 0.0;
  }
  return out;
}

FeaturedCloud compute_features(std::span<const Point3> cloud, int k_neighbors,
                               const Point3& sensor_origin) {
  if (k_neighbors < 3) throw TooFewPoints("compute_features: k_neighbors must be >= 3");
  if (cloud.size() < static_cast<std::size_t>(k_neighbors)) {
    throw TooFewPoints("compute_features: cloud has " + std::to_string(cloud.size()) +
                       " points, fewer than k = " + std::to_string(k_neighbors));
  }
  const KdTree tree(cloud);
  FeaturedCloud out;
  out.reserve(cloud.size());
  std::vector<Point3> neighborhood;
  neighborhood.reserve(static_cast<std::size_t>(k_neighbors));
  for (const auto& p : cloud) {
    neighborhood.clear();
    for (const auto& nb : tree.knn(p, static_cast<std::size_t>(k_neighbors))) {
      neighborhood.push_back(cloud[nb.index]);
    }
    const PointFeature f = analyze_neighborhood(neighborhood, p, sensor_origin);
    out.push_back(p, f.normal, f.a2d, f.usable);
  }
  return out;
}

}  // namespace imls
