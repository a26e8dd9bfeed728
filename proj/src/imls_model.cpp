#include "imls/imls_model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace imls {

double imls_weight(double distance, double h) {
  return std::exp(-(distance * distance) / (h * h));
}

ModelMap::ModelMap(std::size_t capacity, double kernel_width, double radius)
    : capacity_(capacity), h_(kernel_width), r_(radius) {
  if (capacity == 0) throw std::invalid_argument("ModelMap: capacity must be >= 1");
  if (!(kernel_width > 0.0) || !(radius > 0.0)) {
    throw std::invalid_argument("ModelMap: h and r must be positive");
  }
}

void ModelMap::insert_scan(FeaturedCloud scan) {
  scan.check_consistent();
  scans_.push_back(std::move(scan));
  while (scans_.size() > capacity_) scans_.pop_front();
  rebuild();
}

void ModelMap::rebuild() {
  std::size_t total = 0;
  for (const auto& s : scans_) total += s.size();
  points_.clear();
  normals_.clear();
  points_.reserve(total);
  normals_.reserve(total);
  for (const auto& s : scans_) {
    points_.insert(points_.end(), s.points.begin(), s.points.end());
    normals_.insert(normals_.end(), s.normals.begin(), s.normals.end());
  }
  index_ = KdTree(points_);
}

std::optional<ImlsEval> ModelMap::evaluate(const Point3& x) const {
  thread_local std::vector<Neighbor> neighbors;
  index_.radius(x, r_, neighbors);
  if (neighbors.empty()) return std::nullopt;

  const Neighbor* nearest = &neighbors.front();
  for (const auto& nb : neighbors) {
    if (nb.squared_distance < nearest->squared_distance ||
        (nb.squared_distance == nearest->squared_distance && nb.index < nearest->index)) {
      nearest = &nb;
    }
  }
  // Weights are scaled by exp(d_min^2 / h^2) so that large r/h ratios cannot
  // underflow every term; the ratio is unchanged.
  const double inv_h2 = 1.0 / (h_ * h_);
  const double d2_min = nearest->squared_distance;
  double weighted = 0.0;
  double total = 0.0;
  for (const auto& nb : neighbors) {
    const double w = std::exp(-(nb.squared_distance - d2_min) * inv_h2);
    weighted += w * (x - points_[nb.index]).dot(normals_[nb.index]);
    total += w;
  }
  ImlsEval out;
  out.value = weighted / total;
  out.normal = normals_[nearest->index];
  out.support = neighbors.size();
  out.nearest_distance = std::sqrt(d2_min);
  return out;
}

std::optional<SurfaceProjection> ModelMap::project(const Point3& x) const {
  const auto eval = evaluate(x);
  if (!eval) return std::nullopt;
  return SurfaceProjection{x - eval->value * eval->normal, eval->normal, eval->value};
}

}  // namespace imls
